"""Checks that tie the labels back to the graph metric.

`verify_labels` measures decode output against the true distance matrix
for every (or a sampled set of) vertex pair(s), classifies each pair by
its ground-truth regime at the decisive recursion level, and enforces the
per-regime bounds.  `structural_invariants` re-walks the partition
recursion and checks each structural property the scheme relies on,
collecting human-readable failure strings (empty list = pass).
"""

from __future__ import annotations

import math
import random
from collections import Counter

import numpy as np

from .classcheck import spheres_triangle_free
from .codec import EncodeInfo, LabelSet, decode_explain
from .graphs import (
    DisconnectedGraphError,
    Graph,
    all_pairs,
    interval_mask,
    quasi_median,
)
from .stars import (
    ClassViolationError,
    build_star,
    entrance,
    exits,
    fiber_partition,
    median_vertex,
    total_boundary,
)

#: decode branch expected for each ground-truth regime
_BRANCH_FOR_KIND = {"separated": "median", "almost": "median",
                    "pc": "pc", "cc": "cc"}


def classify_pair(info: EncodeInfo, u: int, v: int) -> tuple[str, int]:
    """Ground-truth regime of a pair at its divergence level.

    separated: the level median lies between u and v, the estimate is
    exact.  almost: estimate within 2x.  pc / cc: the panel-cone and
    cone-cone regimes served by the landmark branches, within 4x.
    """
    node, xu, xv = info.divergence(u, v)
    ru, rv = node.roles[xu], node.roles[xv]
    if "center" in (ru, rv):
        return "separated", node.level
    k = node.star_dist(xu, xv)
    if ru == "panel" and rv == "panel":
        return ("almost" if k == 1 else "separated"), node.level
    if "panel" in (ru, rv):
        if k == 1:
            return "pc", node.level
        return ("almost" if k == 2 else "separated"), node.level
    if k == 2:
        return "cc", node.level
    if k == 3:
        return "almost", node.level
    if k >= 4:
        return "separated", node.level
    raise ClassViolationError(
        "cone roots are adjacent", {"kind": "adjacent_cones",
                                    "roots": [xu, xv], "level": node.level})


def _ratio_bin(r: float) -> str:
    lo = min(int((r - 1.0) / 0.25), 11)
    return f"{1.0 + 0.25 * lo:.2f}-{1.25 + 0.25 * lo:.2f}"


def iter_pairs(n: int, sample: int | None, seed: int = 0):
    """All ordered pairs u < v, or a seeded sample of that many."""
    if sample is None:
        for u in range(n):
            for v in range(u + 1, n):
                yield u, v
        return
    rng = random.Random(seed)
    total = n * (n - 1) // 2
    if sample >= total:
        yield from iter_pairs(n, None)
        return
    picked = set()
    while len(picked) < sample:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        picked.add((min(u, v), max(u, v)))
    yield from sorted(picked)


class _Tally:
    """Mergeable accumulator for one batch of pair checks."""

    __slots__ = ("count", "ratio_sum", "ratio_min", "ratio_max", "exact",
                 "histogram", "branches", "kinds", "levels", "violations")

    def __init__(self) -> None:
        self.count = 0
        self.ratio_sum = 0.0
        self.ratio_min = math.inf
        self.ratio_max = 0.0
        self.exact = 0
        self.histogram: Counter = Counter()
        self.branches: Counter = Counter()
        self.kinds: Counter = Counter()
        self.levels: Counter = Counter()
        self.violations: list[dict] = []

    def merge(self, other: "_Tally") -> None:
        self.count += other.count
        self.ratio_sum += other.ratio_sum
        self.ratio_min = min(self.ratio_min, other.ratio_min)
        self.ratio_max = max(self.ratio_max, other.ratio_max)
        self.exact += other.exact
        self.histogram += other.histogram
        self.branches += other.branches
        self.kinds += other.kinds
        self.levels += other.levels
        self.violations.extend(other.violations)


def _scan_pairs(pairs, lab: dict, D: np.ndarray,
                info: EncodeInfo | None, max_violations: int) -> _Tally:
    t = _Tally()

    def flag(kind: str, u: int, v: int, d: int, est: int) -> None:
        if len(t.violations) < max_violations:
            t.violations.append({"kind": kind, "u": u, "v": v,
                                 "d": int(d), "estimate": int(est)})

    for u, v in pairs:
        d = int(D[u, v])
        est, branch, level = decode_explain(lab[u], lab[v])
        r = est / d
        t.count += 1
        t.ratio_sum += r
        t.ratio_max = max(t.ratio_max, r)
        t.ratio_min = min(t.ratio_min, r)
        t.exact += est == d
        t.histogram[_ratio_bin(r)] += 1
        t.branches[branch] += 1
        t.levels[level] += 1
        if not d <= est <= 4 * d:
            flag("stretch", u, v, d, est)
        if info is not None:
            kind, klevel = classify_pair(info, u, v)
            t.kinds[kind] += 1
            if klevel != level or _BRANCH_FOR_KIND[kind] != branch:
                flag("branch_mismatch", u, v, d, est)
            elif kind == "separated" and est != d:
                flag("separated_not_exact", u, v, d, est)
            elif kind == "almost" and est > 2 * d:
                flag("almost_above_2x", u, v, d, est)
    return t


def verify_labels(g: Graph, labels: LabelSet, D: np.ndarray | None = None,
                  info: EncodeInfo | None = None, sample: int | None = None,
                  seed: int = 0, max_violations: int = 25,
                  threads: int = 1) -> dict:
    """Compare decoded estimates with true distances pair by pair.

    With threads > 1 the pair stream is scanned in parallel batches; the
    report is identical either way (decoding is pure).
    """
    if D is None:
        D = all_pairs(g)
    lab = labels.labels
    pairs = iter_pairs(g.n, sample, seed)
    if threads <= 1:
        tally = _scan_pairs(pairs, lab, D, info, max_violations)
    else:
        from concurrent.futures import ThreadPoolExecutor
        from itertools import islice

        tally = _Tally()
        with ThreadPoolExecutor(max_workers=threads) as pool:
            while True:
                wave = []
                for _ in range(threads):
                    chunk = list(islice(pairs, 100_000))
                    if not chunk:
                        break
                    wave.append(pool.submit(_scan_pairs, chunk, lab, D,
                                            info, max_violations))
                if not wave:
                    break
                for fut in wave:
                    tally.merge(fut.result())
        del tally.violations[max_violations:]
    return {
        "n": g.n,
        "pairs": tally.count,
        "sampled": sample is not None,
        "min_ratio": tally.ratio_min if tally.count else 1.0,
        "max_ratio": tally.ratio_max if tally.count else 1.0,
        "mean_ratio": (tally.ratio_sum / tally.count) if tally.count else 1.0,
        "exact_pairs": tally.exact,
        "ratio_histogram": dict(sorted(tally.histogram.items())),
        "branches": dict(tally.branches),
        "kinds": dict(tally.kinds),
        "decisive_levels": {str(k): c for k, c in sorted(tally.levels.items())},
        "violations": tally.violations,
        "ok": not tally.violations,
    }


# ------------------------------------------------------------- invariants

def _tree_distance_matrix(tree) -> tuple[np.ndarray, dict[int, int]]:
    """All-pairs hop counts inside a boundary tree (tree edges only)."""
    members = [int(v) for v in tree.members]
    index = {v: i for i, v in enumerate(members)}
    t = len(members)
    adj = tree.adjacency()
    out = np.zeros((t, t), dtype=np.int32)
    for v in members:
        dist = {v: 0}
        queue = [v]
        for a in queue:
            for b in adj[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        row = out[index[v]]
        for w, dw in dist.items():
            row[index[w]] = dw
    return out, index


def _check_level(sub_g: Graph, sub_D: np.ndarray, gids: np.ndarray,
                 level: int, failures: list[str]) -> list[tuple]:
    """Run one level's checks; returns the fibers to recurse into."""

    def fail(msg: str) -> None:
        failures.append(f"level {level}: {msg}")

    try:
        m = median_vertex(sub_D)
        star = build_star(sub_g, sub_D, m)
        part = fiber_partition(sub_g, sub_D, star)
    except ClassViolationError as exc:
        fail(f"partition aborted: {exc} {exc.witness}")
        return []

    n_sub = sub_g.n
    sizes = {x: len(mem) for x, mem in part.fibers.items()}
    if sum(sizes.values()) != n_sub:
        fail("fibers do not partition the graph")
    for x, s in sizes.items():
        if x != m and s > n_sub // 2:
            fail(f"fiber of {gids[x]} has {s} of {n_sub} vertices")

    in_fiber = {x: np.zeros(n_sub, dtype=bool) for x in part.fibers}
    for x, mem in part.fibers.items():
        in_fiber[x][mem] = True

    # star-shapedness: intervals to the root stay inside the fiber
    for x, mem in part.fibers.items():
        dx = sub_D[:, x]
        target = sub_D[mem, x][:, None]
        covered = sub_D[mem] + dx[None, :] == target
        if (covered & ~in_fiber[x][None, :]).any():
            fail(f"fiber of {gids[x]} is not star-shaped")

    # cross-fiber edges: never cone-cone or deep panel-panel; panel-cone
    # edges obey the distance rule on the panel side.  Edges among the
    # star vertices themselves (base-base, base-apex, center-base) are
    # the k = 0 exceptions.
    for a, b in sub_g.edges():
        xa, xb = part.fiber_of(a), part.fiber_of(b)
        if xa == xb:
            continue
        if part.role[xb] < part.role[xa]:
            a, b, xa, xb = b, a, xb, xa
        ra, rb = part.role[xa], part.role[xb]
        if (ra, rb) == ("center", "panel"):
            if b != xb:
                fail(f"center adjacent to non-base vertex {gids[b]}")
        elif (ra, rb) == ("panel", "panel"):
            if a != xa or b != xb:
                fail(f"cross edge {gids[a]}-{gids[b]} joins two panels "
                     "away from their bases")
        elif (ra, rb) == ("cone", "panel"):
            a, b, xa, xb = b, a, xb, xa
            y = xb
            if xa not in part.cone_panels[y]:
                fail(f"cross edge {gids[a]}-{gids[b]} joins a cone to a "
                     "foreign panel")
            elif a == xa:
                if b != y:
                    fail(f"base {gids[a]} adjacent to cone vertex "
                         f"{gids[b]} other than the apex")
            else:
                k = int(sub_D[b, y])
                if not (sub_D[a, y] == sub_D[a, xa]
                        and k <= sub_D[a, y] <= k + 1):
                    fail(f"cross edge {gids[a]}-{gids[b]} breaks the "
                         "distance rule")
        else:
            fail(f"cross edge {gids[a]}-{gids[b]} joins {ra} and {rb} fibers")

    # boundary trees: unique parents, depth = distance, metric within 2x
    trees = {}
    tree_mats = {}
    for x in sorted(part.fibers):
        if part.role[x] == "center":
            continue
        try:
            tr = total_boundary(sub_g, sub_D, part, x)
        except ClassViolationError as exc:
            fail(f"boundary of fiber {gids[x]}: {exc} {exc.witness}")
            continue
        trees[x] = tr
        mat, index = _tree_distance_matrix(tr)
        tree_mats[x] = (mat, index)
        mem = tr.members
        real = sub_D[np.ix_(mem, mem)]
        if (mat < real).any():
            fail(f"boundary tree of {gids[x]} is shorter than the graph")
        if (mat > 2 * real).any():
            fail(f"boundary tree of {gids[x]} exceeds twice the graph metric")
        if (tr.depth != sub_D[mem, x]).any():
            fail(f"boundary depths of {gids[x]} disagree with distances")

    # exits: both landmarks cover the whole boundary tree within 2x
    for x in star.neighbors:
        if x not in trees:
            continue
        tr = trees[x]
        mat, index = tree_mats[x]
        for u in part.fibers[x]:
            u = int(u)
            try:
                u1, u2 = exits(sub_D, tr, u)
            except ClassViolationError as exc:
                fail(f"exits of {gids[u]} in fiber {gids[x]}: {exc} {exc.witness}")
                continue
            est = np.minimum(
                int(sub_D[u, u1]) + mat[index[u1]],
                int(sub_D[u, u2]) + mat[index[u2]])
            bound = 2 * sub_D[u, tr.members]
            if (est > bound).any():
                t_bad = int(tr.members[int(np.argmax(est > bound))])
                fail(f"exit bound fails for {gids[u]} towards {gids[t_bad]}")

    # entrances: unique, on the boundary, and tree-close to the projection
    for x, (w_lo, w_hi) in part.cone_panels.items():
        for w in (w_lo, w_hi):
            if w not in trees:
                continue
            tr = trees[w]
            mat, index = tree_mats[w]
            fib_w = part.fibers[w]
            for u in part.fibers[x]:
                u = int(u)
                try:
                    e = entrance(sub_D, part, tr, u)
                except ClassViolationError as exc:
                    fail(f"entrance of {gids[u]} on fiber {gids[w]}: "
                         f"{exc} {exc.witness}")
                    continue
                dvals = sub_D[u, fib_w]
                proj = fib_w[dvals == dvals.min()]
                de = int(sub_D[u, e])
                for q in proj:
                    if mat[index[e], index[int(q)]] > de:
                        fail(f"entrance of {gids[u]} on fiber {gids[w]} is "
                             f"tree-far from projection vertex {gids[int(q)]}")
                        break

    out = []
    for x in sorted(part.fibers):
        mem = part.fibers[x]
        if len(mem) >= 2:
            out.append((x, mem))
    return out


def structural_invariants(g: Graph, D: np.ndarray | None = None,
                          seed: int = 0) -> list[str]:
    """Full structural audit; returns failure descriptions (empty = pass)."""
    if D is None:
        D = all_pairs(g)
    failures: list[str] = []

    ok, wit = spheres_triangle_free(g, D)
    if not ok:
        failures.append(f"sphere triangle: {wit}")

    rng = random.Random(seed)
    if g.n >= 3:
        for _ in range(min(200, g.n * 4)):
            a, b, c = (rng.randrange(g.n) for _ in range(3))
            qa, qb, qc = quasi_median(D, a, b, c)
            sides = {int(D[qa, qb]), int(D[qa, qc]), int(D[qb, qc])}
            if len(sides) != 1:
                failures.append(
                    f"quasi-median of ({a},{b},{c}) is not equilateral")
                break

    if g.n >= 2:
        for _ in range(min(100, g.n * 2)):
            a, b = rng.randrange(g.n), rng.randrange(g.n)
            if a == b:
                continue
            ids = np.nonzero(interval_mask(D, a, b))[0]
            sub, sub_ids = g.subgraph(ids)
            try:
                sub_D = all_pairs(sub)
            except DisconnectedGraphError:
                failures.append(f"interval I({a},{b}) is disconnected")
                break
            if not np.array_equal(sub_D, D[np.ix_(ids, ids)]):
                failures.append(f"interval I({a},{b}) is not isometric")
                break

    if g.n == 1:
        return failures
    work = [(g, D, np.arange(g.n, dtype=np.int64), 0)]
    while work:
        sub_g, sub_D, gids, level = work.pop()
        for x, mem in _check_level(sub_g, sub_D, gids, level, failures):
            child_g, _ = sub_g.subgraph(mem)
            try:
                child_D = all_pairs(child_g)
            except DisconnectedGraphError:
                failures.append(
                    f"level {level}: fiber of {gids[x]} is disconnected")
                continue
            if not np.array_equal(child_D, sub_D[np.ix_(mem, mem)]):
                failures.append(
                    f"level {level}: fiber of {gids[x]} is not isometric")
                continue
            work.append((child_g, child_D, gids[mem], level + 1))
        if len(failures) > 50:
            failures.append("aborting after 50 failures")
            break
    return failures
