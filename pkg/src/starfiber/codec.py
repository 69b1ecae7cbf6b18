"""Distance label construction and decoding.

A vertex label is a stack of per-level records produced by recursive
star/fiber partitioning around median vertices.  Each record stores the
level's median id, the distance to it, the tiny within-star label of the
vertex's fiber root, and two landmark parts: a panel vertex keeps its two
exits on the fiber boundary tree, a cone vertex keeps its entrance on
each of its two adjacent panels.  Two labels alone determine a distance
estimate within a factor of 4.
"""

from __future__ import annotations

import base64
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, all_pairs, graph_hash
from .stars import (
    ClassViolationError,
    build_star,
    entrance,
    exits,
    fiber_partition,
    median_vertex,
    star_labels,
    total_boundary,
)
from .treelabels import TreeLabel, encode_tree, tree_distance


class LabelParseError(ValueError):
    """Malformed serialized label or label file."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (offset {offset})"
        super().__init__(message)
        self.offset = offset


class LabelMismatchError(ValueError):
    """Labels from different instances were mixed."""


@dataclass
class SidePart:
    """One landmark: its tree label in a boundary tree plus the distance
    from the label's owner to the landmark."""

    tree_label: TreeLabel
    distance: int


@dataclass
class LevelRecord:
    median: int
    median_distance: int
    star_label: frozenset[int]
    left: SidePart | None = None
    right: SidePart | None = None


@dataclass
class VertexLabel:
    vertex: int
    levels: list[LevelRecord]


# ---------------------------------------------------------------- encoder

@dataclass
class LevelNode:
    """Ground-truth partition data for one recursion node (diagnostics)."""

    level: int
    median: int
    roles: dict[int, str]
    root_of: dict[int, int]
    star_adj: dict[int, tuple[int, ...]]
    cone_panels: dict[int, tuple[int, int]]
    fiber_sizes: dict[int, int]
    children: dict[int, "LevelNode"] = field(default_factory=dict)
    _sd: dict[int, dict[int, int]] = field(default_factory=dict, repr=False)

    def star_dist(self, x: int, y: int) -> float:
        """Hop distance between fiber roots in the star minus its center."""
        if x == y:
            return 0
        if x not in self._sd:
            dist = {x: 0}
            queue = [x]
            for u in queue:
                for w in self.star_adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            self._sd[x] = dist
        return self._sd[x].get(y, math.inf)


@dataclass
class EncodeInfo:
    """Recursion transcript used by verification and inspection."""

    root: LevelNode

    def divergence(self, u: int, v: int) -> tuple[LevelNode, int, int]:
        """Deepest node where u and v fall into different fibers."""
        node = self.root
        while True:
            xu, xv = node.root_of[u], node.root_of[v]
            if xu != xv:
                return node, xu, xv
            node = node.children[xu]


def _globalize(label: list[tuple[int, int]], gids: np.ndarray) -> TreeLabel:
    return tuple((int(gids[s]), d) for s, d in label)


def encode_graph(g: Graph, with_info: bool = False):
    """Build labels for every vertex.  Inputs must pass the class checks;
    structural violations abort with a witness.

    Returns a LabelSet, or (LabelSet, EncodeInfo) when with_info is set.
    """
    D = all_pairs(g)
    per_vertex: list[list[LevelRecord]] = [[] for _ in range(g.n)]
    level_cap = (math.ceil(math.log2(g.n)) + 1) if g.n > 1 else 0
    info_root: LevelNode | None = None
    stack: list[tuple] = []
    if g.n > 1:
        stack.append((g, D, np.arange(g.n, dtype=np.int64), None, -1, 0))
    while stack:
        sub_g, sub_D, gids, parent_node, via_root, level = stack.pop()
        if level > level_cap:
            raise ClassViolationError(
                "recursion deeper than the fiber-halving bound",
                {"kind": "depth_overflow", "level": level})
        m = median_vertex(sub_D)
        star = build_star(sub_g, sub_D, m)
        slab = star_labels(star)
        part = fiber_partition(sub_g, sub_D, star)
        half = sub_g.n // 2
        for x, mem in part.fibers.items():
            if x != m and len(mem) > half:
                raise ClassViolationError(
                    "fiber exceeds half of its graph",
                    {"kind": "fiber_too_large", "root": int(gids[x]),
                     "size": int(len(mem)), "graph_size": sub_g.n})
        trees = {}
        tl = {}
        for x in star.neighbors:
            tr = total_boundary(sub_g, sub_D, part, x)
            trees[x] = tr
            tl[x] = encode_tree(tr.adjacency())
        mg = int(gids[m])
        for u in range(sub_g.n):
            x = part.fiber_of(u)
            if x == m:
                rec = LevelRecord(mg, 0, slab[m])
            elif part.role[x] == "panel":
                u1, u2 = exits(sub_D, trees[x], u)
                rec = LevelRecord(
                    mg, int(sub_D[u, m]), slab[x],
                    SidePart(_globalize(tl[x][u1], gids), int(sub_D[u, u1])),
                    SidePart(_globalize(tl[x][u2], gids), int(sub_D[u, u2])))
            else:
                w_lo, w_hi = part.cone_panels[x]
                e_lo = entrance(sub_D, part, trees[w_lo], u)
                e_hi = entrance(sub_D, part, trees[w_hi], u)
                rec = LevelRecord(
                    mg, int(sub_D[u, m]), slab[x],
                    SidePart(_globalize(tl[w_lo][e_lo], gids), int(sub_D[u, e_lo])),
                    SidePart(_globalize(tl[w_hi][e_hi], gids), int(sub_D[u, e_hi])))
            per_vertex[int(gids[u])].append(rec)
        node = None
        if with_info:
            star_members = sorted(star.vertices - {m})
            member_set = set(star_members)
            node = LevelNode(
                level, mg,
                roles={int(gids[x]): r for x, r in part.role.items()},
                root_of={int(gids[v]): int(gids[part.root[v]])
                         for v in range(sub_g.n)},
                star_adj={int(gids[a]): tuple(int(gids[b]) for b in sub_g.adj[a]
                                              if b in member_set)
                          for a in star_members},
                cone_panels={int(gids[c]): (int(gids[p]), int(gids[q]))
                             for c, (p, q) in part.cone_panels.items()},
                fiber_sizes={int(gids[x]): int(len(mem))
                             for x, mem in part.fibers.items()})
            if parent_node is None:
                info_root = node
            else:
                parent_node.children[via_root] = node
        for x in sorted(part.fibers):
            mem = part.fibers[x]
            if len(mem) < 2:
                continue
            child_g, _ = sub_g.subgraph(mem)
            child_D = sub_D[np.ix_(mem, mem)]
            stack.append((child_g, child_D, gids[mem], node,
                          int(gids[x]), level + 1))
    labels = {v: VertexLabel(v, per_vertex[v]) for v in range(g.n)}
    ls = LabelSet(g.n, graph_hash(g), labels)
    if with_info:
        return ls, EncodeInfo(info_root)
    return ls


# ---------------------------------------------------------------- decoder

def dist_pc(panel: LevelRecord, cone: LevelRecord) -> int:
    """Estimate for a panel vertex and a cone vertex whose cone touches
    that panel: route through the cone's entrance on the shared panel and
    the panel vertex's better exit."""
    (rank,) = panel.star_label
    side = cone.left if rank == min(cone.star_label) else cone.right
    best = min(
        tree_distance(side.tree_label, panel.left.tree_label) + panel.left.distance,
        tree_distance(side.tree_label, panel.right.tree_label) + panel.right.distance,
    )
    return side.distance + best


def dist_cc(a: LevelRecord, b: LevelRecord) -> int:
    """Estimate for two cone vertices sharing exactly one panel: route
    through both entrances on the shared panel's boundary tree."""
    (shared,) = a.star_label & b.star_label
    sa = a.left if shared == min(a.star_label) else a.right
    sb = b.left if shared == min(b.star_label) else b.right
    return sa.distance + tree_distance(sa.tree_label, sb.tree_label) + sb.distance


def decode_explain(a: VertexLabel, b: VertexLabel) -> tuple[int, str, int]:
    """Distance estimate plus the branch taken and the decisive level."""
    if a.vertex == b.vertex:
        return 0, "identical", -1
    la, lb = a.levels, b.levels
    top = min(len(la), len(lb))
    k = 0
    while k < top and la[k].median == lb[k].median:
        k += 1
    if k == 0:
        raise LabelMismatchError(
            f"labels of {a.vertex} and {b.vertex} share no median; "
            "were they produced by the same encoding?")
    ra, rb = la[k - 1], lb[k - 1]
    A, B = ra.star_label, rb.star_label
    if len(A) == 1 and len(B) == 2 and A < B:
        return dist_pc(ra, rb), "pc", k - 1
    if len(B) == 1 and len(A) == 2 and B < A:
        return dist_pc(rb, ra), "pc", k - 1
    if len(A) == 2 and len(B) == 2 and len(A & B) == 1:
        return dist_cc(ra, rb), "cc", k - 1
    return ra.median_distance + rb.median_distance, "median", k - 1


def decode(a: VertexLabel, b: VertexLabel) -> int:
    """Distance estimate in [d, 4d] from two labels alone."""
    return decode_explain(a, b)[0]


# ---------------------------------------------------------- serialization

def _write_uint(buf: bytearray, x: int) -> None:
    if x < 0:
        raise ValueError(f"cannot serialize negative value {x}")
    while True:
        b = x & 0x7F
        x >>= 7
        if x:
            buf.append(b | 0x80)
        else:
            buf.append(b)
            return


def _read_uint(data: bytes, pos: int) -> tuple[int, int]:
    result = 0
    shift = 0
    start = pos
    while True:
        if pos >= len(data):
            raise LabelParseError("truncated varint", offset=start)
        byte = data[pos]
        pos += 1
        result |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return result, pos
        shift += 7
        if shift > 70:
            raise LabelParseError("varint runs too long", offset=start)


def _write_side(buf: bytearray, side: SidePart) -> None:
    _write_uint(buf, len(side.tree_label))
    for sep, d in side.tree_label:
        _write_uint(buf, sep)
        _write_uint(buf, d)
    _write_uint(buf, side.distance)


def _read_side(data: bytes, pos: int) -> tuple[SidePart, int]:
    count, pos = _read_uint(data, pos)
    entries = []
    for _ in range(count):
        sep, pos = _read_uint(data, pos)
        d, pos = _read_uint(data, pos)
        entries.append((sep, d))
    dist, pos = _read_uint(data, pos)
    return SidePart(tuple(entries), dist), pos


def serialize_label(label: VertexLabel) -> bytes:
    """Canonical byte form: varint fields, levels in order."""
    buf = bytearray()
    _write_uint(buf, label.vertex)
    _write_uint(buf, len(label.levels))
    for rec in label.levels:
        _write_uint(buf, rec.median)
        _write_uint(buf, rec.median_distance)
        _write_uint(buf, len(rec.star_label))
        for e in sorted(rec.star_label):
            _write_uint(buf, e)
        if (rec.left is None) != (rec.right is None):
            raise ValueError("level record must carry both sides or neither")
        _write_uint(buf, 0 if rec.left is None else 1)
        if rec.left is not None:
            _write_side(buf, rec.left)
            _write_side(buf, rec.right)
    return bytes(buf)


def deserialize_label(data: bytes) -> VertexLabel:
    vertex, pos = _read_uint(data, 0)
    n_levels, pos = _read_uint(data, pos)
    levels = []
    for _ in range(n_levels):
        median, pos = _read_uint(data, pos)
        mdist, pos = _read_uint(data, pos)
        size, pos = _read_uint(data, pos)
        if size > 2:
            raise LabelParseError(f"star label of size {size}", offset=pos)
        elems = []
        for _ in range(size):
            e, pos = _read_uint(data, pos)
            elems.append(e)
        flag, pos = _read_uint(data, pos)
        if flag not in (0, 1):
            raise LabelParseError(f"bad side flag {flag}", offset=pos)
        left = right = None
        if flag:
            left, pos = _read_side(data, pos)
            right, pos = _read_side(data, pos)
        levels.append(LevelRecord(median, mdist, frozenset(elems), left, right))
    if pos != len(data):
        raise LabelParseError("trailing bytes after label", offset=pos)
    return VertexLabel(vertex, levels)


# ------------------------------------------------------------ label files

FORMAT_VERSION = 1
_HEADER_RE = re.compile(
    r"# starfiber-labels v(\d+) n=(\d+) graph=([0-9a-f]{64})\s*$")


@dataclass
class LabelSet:
    """All labels of one instance, tied to it by a content hash."""

    n: int
    instance_hash: str
    labels: dict[int, VertexLabel]

    def serialized(self, v: int) -> bytes:
        return serialize_label(self.labels[v])

    def label_bits(self) -> list[int]:
        return [len(self.serialized(v)) * 8 for v in range(self.n)]

    def decode(self, u: int, v: int) -> int:
        return decode(self.labels[u], self.labels[v])

    def to_text(self) -> str:
        lines = [f"# starfiber-labels v{FORMAT_VERSION} "
                 f"n={self.n} graph={self.instance_hash}"]
        for v in range(self.n):
            b64 = base64.b64encode(self.serialized(v)).decode("ascii")
            lines.append(f"{v}\t{b64}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LabelSet":
        lines = text.splitlines()
        if not lines:
            raise LabelParseError("empty label file")
        mt = _HEADER_RE.match(lines[0])
        if not mt:
            raise LabelParseError(f"bad header line {lines[0]!r}")
        version, n, ihash = int(mt.group(1)), int(mt.group(2)), mt.group(3)
        if version != FORMAT_VERSION:
            raise LabelParseError(f"unsupported format version {version}")
        labels: dict[int, VertexLabel] = {}
        for ln in lines[1:]:
            if not ln.strip():
                continue
            parts = ln.split("\t")
            if len(parts) != 2:
                raise LabelParseError(f"bad label line {ln!r}")
            try:
                vid = int(parts[0])
                raw = base64.b64decode(parts[1], validate=True)
            except (ValueError, base64.binascii.Error):
                raise LabelParseError(f"bad label line {ln!r}") from None
            lab = deserialize_label(raw)
            if lab.vertex != vid:
                raise LabelParseError(
                    f"line claims vertex {vid}, payload says {lab.vertex}")
            labels[vid] = lab
        if sorted(labels) != list(range(n)):
            raise LabelParseError("label ids do not cover 0..n-1")
        return cls(n, ihash, labels)


def decode_pair(a_set: LabelSet, b_set: LabelSet, u: int, v: int) -> int:
    """Decode across two label sets; they must describe the same instance."""
    if a_set.instance_hash != b_set.instance_hash:
        raise LabelMismatchError(
            "label sets come from different instances "
            f"({a_set.instance_hash[:12]}… vs {b_set.instance_hash[:12]}…)")
    return decode(a_set.labels[u], b_set.labels[v])
