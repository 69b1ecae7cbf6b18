"""Command line interface.

Subcommands:
    gen      write a generated instance to a graph file
    check    test class membership, print a JSON verdict
    encode   build distance labels for a graph file
    decode   answer a distance query from a label file alone
    verify   re-check labels against true distances and invariants
    bench    CSV timing/quality table over a size sweep
    inspect  dump the top-level star partition of an instance

Exit codes: 0 success, 1 usage/io error, 2 verification or class failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .classcheck import is_bridged, is_k4_free
from .codec import (LabelMismatchError, LabelParseError, LabelSet,
                    decode_pair, encode_graph)
from .generators import (burned_lozenge, flat_triangle, glued_triangles,
                         lozenge, random_instance, random_tree)
from .graphs import (DisconnectedGraphError, Graph, GraphFormatError,
                     all_pairs, format_graph, graph_hash, is_connected,
                     parse_graph)
from .stars import (ClassViolationError, build_star, fiber_partition,
                    median_vertex, star_labels, total_boundary)
from .verify import structural_invariants, verify_labels

# git-describe style provenance tag stamped into every report
_BUILD = "v" + __version__


def _read_graph(path: str) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc.strerror}")
    except GraphFormatError as exc:
        raise SystemExit(f"error: {path}: {exc}")


def _read_labels(path: str) -> LabelSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return LabelSet.from_text(fh.read())
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc.strerror}")
    except LabelParseError as exc:
        raise SystemExit(f"error: {path}: {exc}")


def _write_out(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _params(raw: str | None, want: int, family: str,
            optional: int = 0) -> list[int]:
    vals = [int(p) for p in raw.split(",")] if raw else []
    if not want - optional <= len(vals) <= want:
        raise SystemExit(
            f"error: family {family!r} takes {want} comma-separated "
            f"parameter(s), got {len(vals)}")
    return vals


def cmd_gen(args: argparse.Namespace) -> int:
    fam = args.family
    if fam == "triangle":
        (k,) = _params(args.params, 1, fam)
        g = flat_triangle(k)
    elif fam == "lozenge":
        a, b = _params(args.params, 2, fam)
        g = lozenge(a, b)
    elif fam == "burned":
        vals = _params(args.params, 3, fam, optional=1)
        budget = vals[2] if len(vals) == 3 else None
        g = burned_lozenge(vals[0], vals[1], seed=args.seed, budget=budget)
    elif fam == "glued":
        k, t = _params(args.params, 2, fam)
        g = glued_triangles(k, t, seed=args.seed)
    elif fam == "random":
        (n,) = _params(args.params, 1, fam)
        g = random_instance(n, seed=args.seed)
    else:  # tree
        (n,) = _params(args.params, 1, fam)
        g = random_tree(n, seed=args.seed)
    _write_out(format_graph(g), args.out)
    return 0


def _class_verdict(g: Graph) -> dict:
    verdict: dict = {"build": _BUILD, "instance": graph_hash(g),
                     "n": g.n, "m": g.m, "connected": is_connected(g)}
    if not verdict["connected"]:
        verdict.update(in_class=False, witnesses=[{"kind": "disconnected"}])
        return verdict
    D = all_pairs(g)
    witnesses = []
    ok4, wit = is_k4_free(g)
    verdict["k4_free"] = ok4
    if wit:
        witnesses.append(wit)
    okb, wit = is_bridged(g, D)
    verdict["bridged"] = okb
    if wit:
        witnesses.append(wit)
    verdict["in_class"] = ok4 and okb
    verdict["witnesses"] = witnesses
    return verdict


def cmd_check(args: argparse.Namespace) -> int:
    verdict = _class_verdict(_read_graph(args.graph))
    print(json.dumps(verdict, indent=2))
    return 0 if verdict["in_class"] else 2


def cmd_encode(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    verdict = _class_verdict(g)
    if not verdict["in_class"]:
        print(json.dumps(verdict, indent=2), file=sys.stderr)
        return 2
    t0 = time.perf_counter()
    ls = encode_graph(g)
    ms = (time.perf_counter() - t0) * 1000.0
    text = ls.to_text()
    _write_out(text, args.out)
    bits = ls.label_bits()
    levels = [len(lab.levels) for lab in ls.labels.values()]
    stats = {
        "build": _BUILD,
        "instance": ls.instance_hash,
        "n": g.n,
        "m": g.m,
        "encode_ms": round(ms, 2),
        "max_label_bits": max(bits),
        "mean_label_bits": round(sum(bits) / len(bits), 1),
        "max_levels": max(levels),
        "mean_levels": round(sum(levels) / len(levels), 2),
        "file_bytes": len(text.encode()),
    }
    print(json.dumps(stats, indent=2),
          file=sys.stderr if args.out is None else sys.stdout)
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    ls = _read_labels(args.labels)
    other = _read_labels(args.labels_b) if args.labels_b else ls
    try:
        est = decode_pair(ls, other, args.u, args.v)
    except LabelMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: no label for vertex {exc.args[0]}", file=sys.stderr)
        return 1
    print(est)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    ls = _read_labels(args.labels)
    if graph_hash(g) != ls.instance_hash:
        print("error: label file was built from a different graph",
              file=sys.stderr)
        return 2
    fresh, info = encode_graph(g, with_info=True)
    if fresh.to_text() != ls.to_text():
        print("error: label file does not match a fresh deterministic "
              "encoding of the graph", file=sys.stderr)
        return 2
    D = all_pairs(g)
    sample = args.sample
    if sample is None and g.n > 2000:
        sample = 1_000_000
    threads = 1
    raw = os.environ.get("STARFIBER_THREADS")
    if raw:
        try:
            threads = max(1, int(raw))
        except ValueError:
            raise SystemExit(f"error: STARFIBER_THREADS={raw!r} is not an "
                             "integer")
    report = verify_labels(g, ls, D=D, info=info, sample=sample,
                           seed=args.seed, threads=threads)
    report = {"build": _BUILD, "instance": ls.instance_hash, **report}
    report["invariant_failures"] = (
        [] if args.skip_invariants else structural_invariants(g, D=D))
    report["ok"] = report["ok"] and not report["invariant_failures"]
    print(json.dumps(report, indent=2))
    return 0 if report["ok"] else 2


def cmd_bench(args: argparse.Namespace) -> int:
    import csv

    sizes = [int(s) for s in args.sizes.split(",")]
    seeds = [int(s) for s in args.seeds.split(",")]
    make = random_tree if args.family == "tree" else random_instance
    print(f"# starfiber {_BUILD} family={args.family}")
    writer = csv.writer(sys.stdout)
    writer.writerow(["n", "seed", "instance", "encode_ms", "max_label_bits",
                     "mean_ratio", "max_ratio"])
    for n in sizes:
        for seed in seeds:
            g = make(n, seed=seed)
            times = []
            for _ in range(args.repeats):
                t0 = time.perf_counter()
                ls = encode_graph(g)
                times.append(time.perf_counter() - t0)
            times.sort()
            ms = times[len(times) // 2] * 1000.0
            D = all_pairs(g)
            report = verify_labels(g, ls, D=D, sample=args.sample, seed=seed)
            writer.writerow([g.n, seed, ls.instance_hash[:12], f"{ms:.2f}",
                             max(ls.label_bits()),
                             f"{report['mean_ratio']:.4f}",
                             f"{report['max_ratio']:.4f}"])
            sys.stdout.flush()
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    verdict = _class_verdict(g)
    if not verdict["in_class"]:
        print(json.dumps(verdict, indent=2), file=sys.stderr)
        return 2
    D = all_pairs(g)
    m = median_vertex(D)
    try:
        star = build_star(g, D, m)
        part = fiber_partition(g, D, star)
    except ClassViolationError as exc:
        print(json.dumps({"error": str(exc), "witness": exc.witness},
                         indent=2), file=sys.stderr)
        return 2
    labels = star_labels(star)
    out = {
        "build": _BUILD,
        "instance": graph_hash(g),
        "n": g.n,
        "median": m,
        "star": {
            "center": star.center,
            "neighbors": list(star.neighbors),
            "apexes": [list(t) for t in star.apexes],
        },
        "star_labels": {str(v): sorted(s) for v, s in labels.items()},
        "fiber_sizes": {str(r): len(part.fibers[r])
                        for r in sorted(part.fibers)},
        "cone_panels": {str(c): list(p)
                        for c, p in sorted(part.cone_panels.items())},
    }
    if args.boundaries:
        bt = {}
        for root in sorted(part.fibers):
            if root == star.center:
                continue
            tree = total_boundary(g, D, part, root)
            bt[str(root)] = {
                "members": [int(v) for v in tree.members],
                "parents": {str(v): tree.parent[v] for v in sorted(tree.parent)},
                "depths": {str(int(v)): int(d)
                           for v, d in zip(tree.members, tree.depth)},
            }
        out["boundaries"] = bt
    print(json.dumps(out, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="starfiber",
        description="Approximate distance labels for K4-free bridged graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--family", required=True,
                   choices=["triangle", "lozenge", "burned", "glued",
                            "random", "tree"])
    p.add_argument("--params", default=None,
                   help="comma-separated ints: triangle k | lozenge a,b | "
                        "burned a,b[,budget] | glued k,t | random n | tree n")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="test class membership")
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode", help="build labels for a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", default=None, help="label file (default stdout)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="answer one query from labels")
    p.add_argument("--labels", required=True)
    p.add_argument("--labels-b", default=None,
                   help="second label file (must be from the same graph)")
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="check labels against true distances")
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--sample", type=int, default=None,
                   help="check this many random pairs instead of all "
                        "(automatic above n=2000)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--skip-invariants", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="timing and quality sweep (CSV)")
    p.add_argument("--sizes", default="128,256,512,1024,2048")
    p.add_argument("--seeds", default="1")
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--sample", type=int, default=20000)
    p.add_argument("--family", choices=["random", "tree"], default="random")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inspect", help="dump the top-level star partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--boundaries", action="store_true",
                   help="include boundary trees of every fiber")
    p.set_defaults(func=cmd_inspect)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ClassViolationError, DisconnectedGraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
