"""Star of a median vertex and the fiber machinery built on it.

The star St(m) is N[m] plus every vertex with exactly two (necessarily
adjacent) neighbors in N(m) ("apexes").  Fibers partition the graph by
metric projection onto N(m): panels sit under neighbors of m, cones under
apexes, and m keeps the singleton fiber {m}.  Boundary trees, entrances
and exits are the landmarks the distance labels store per level.

Functions here take a graph together with its distance matrix and raise
ClassViolationError (with a witness) whenever the input behaves in a way
no K4-free bridged graph can.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .graphs import Graph


class ClassViolationError(ValueError):
    """Structural assumption broke; `witness` names the offending vertices."""

    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


def median_vertex(D: np.ndarray) -> int:
    """Vertex minimizing total distance, ties to the smallest id."""
    return int(np.argmin(D.sum(axis=1, dtype=np.int64)))


@dataclass(frozen=True)
class Star:
    """St(m): center, its neighbors, and apexes with their base pairs."""

    center: int
    neighbors: tuple[int, ...]
    apexes: tuple[tuple[int, int, int], ...]  # (apex, y, y') with y < y'

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset((self.center, *self.neighbors,
                          *(a for a, _, _ in self.apexes)))


def build_star(g: Graph, D: np.ndarray, m: int) -> Star:
    """Assemble St(m); rejects vertices with 3+ neighbors in N(m)."""
    nbrs = tuple(g.adj[m])
    nbr_set = g._adjsets[m]
    apexes = []
    pairs_seen: dict[tuple[int, int], int] = {}
    for x in np.nonzero(D[m] == 2)[0]:
        x = int(x)
        com = sorted(g._adjsets[x] & nbr_set)
        if len(com) < 2:
            continue
        if len(com) > 2:
            raise ClassViolationError(
                "vertex projects on 3+ neighbors of the center",
                {"kind": "wide_apex", "center": m, "vertex": x, "bases": com})
        y, yp = com
        if not g.has_edge(y, yp):
            raise ClassViolationError(
                "apex bases are not adjacent (induced C4)",
                {"kind": "induced_c4", "vertices": [x, y, m, yp]})
        if (y, yp) in pairs_seen:
            raise ClassViolationError(
                "two apexes share a base pair (forbidden C4/K4)",
                {"kind": "apex_pair_clash",
                 "vertices": [pairs_seen[(y, yp)], x, y, yp]})
        pairs_seen[(y, yp)] = x
        apexes.append((x, y, yp))
    return Star(m, nbrs, tuple(apexes))


def star_labels(star: Star) -> dict[int, frozenset[int]]:
    """Tiny within-star labels: center -> {}, i-th neighbor (ascending id)
    -> {i+1}, apex -> the pair of its two base labels."""
    rank = {x: i + 1 for i, x in enumerate(star.neighbors)}
    labels: dict[int, frozenset[int]] = {star.center: frozenset()}
    for x, r in rank.items():
        labels[x] = frozenset((r,))
    for x, y, yp in star.apexes:
        labels[x] = frozenset((rank[y], rank[yp]))
    return labels


@dataclass
class FiberPartition:
    """Assignment of every vertex to the fiber of a star vertex."""

    star: Star
    root: np.ndarray                      # vertex -> fiber root
    role: dict[int, str]                  # root -> "center"|"panel"|"cone"
    fibers: dict[int, np.ndarray]         # root -> ascending member ids
    cone_panels: dict[int, tuple[int, int]]  # cone -> its two panels, by rank

    def fiber_of(self, v: int) -> int:
        return int(self.root[v])


def fiber_partition(g: Graph, D: np.ndarray, star: Star) -> FiberPartition:
    """Project every outside vertex onto N(m) and resolve two-vertex
    projections to their unique apex one step closer."""
    n = g.n
    m = star.center
    root = np.full(n, -1, dtype=np.int64)
    root[m] = m
    for x in star.neighbors:
        root[x] = x
    apex_by_pair = {(y, yp): x for x, y, yp in star.apexes}
    for x, _, _ in star.apexes:
        root[x] = x
    nbrs = np.array(star.neighbors, dtype=np.int64)
    Dn = D[:, nbrs]
    for u in np.nonzero(root < 0)[0]:
        u = int(u)
        row = Dn[u]
        lo = row.min()
        idx = np.nonzero(row == lo)[0]
        if len(idx) == 1:
            root[u] = nbrs[idx[0]]
        elif len(idx) == 2:
            pair = (int(nbrs[idx[0]]), int(nbrs[idx[1]]))
            x = apex_by_pair.get(pair)
            if x is None:
                raise ClassViolationError(
                    "two-vertex projection without an apex",
                    {"kind": "projection_no_apex", "vertex": u, "bases": list(pair)})
            if D[u, x] != lo - 1:
                raise ClassViolationError(
                    "apex is not one step closer than the projection",
                    {"kind": "apex_not_closer", "vertex": u, "apex": x})
            root[u] = x
        else:
            raise ClassViolationError(
                "projection on N(m) has 3+ vertices",
                {"kind": "projection_too_wide", "vertex": u,
                 "bases": [int(nbrs[i]) for i in idx]})
    role = {m: "center"}
    for x in star.neighbors:
        role[x] = "panel"
    cone_panels = {}
    for x, y, yp in star.apexes:
        role[x] = "cone"
        cone_panels[x] = (y, yp)  # ascending ids == ascending ranks
    fibers = {x: np.nonzero(root == x)[0] for x in role}
    return FiberPartition(star, root, role, fibers, cone_panels)


def star_distance(g: Graph, star: Star, x: int, y: int) -> float:
    """Hop distance between two star vertices in the induced graph on
    St(m) minus the center; math.inf when separated."""
    members = star.vertices - {star.center}
    if x not in members or y not in members:
        raise ValueError("arguments must be star vertices other than the center")
    if x == y:
        return 0
    dist = {x: 0}
    queue = [x]
    for u in queue:
        for w in g.adj[u]:
            if w in members and w not in dist:
                dist[w] = dist[u] + 1
                if w == y:
                    return dist[w]
                queue.append(w)
    return math.inf


@dataclass
class TotalBoundaryTree:
    """Vertices of one fiber with neighbors outside it, arranged as the
    tree of unique parents toward the fiber root."""

    root: int
    members: np.ndarray           # ascending ids
    parent: dict[int, int]        # member -> member, root absent
    depth: np.ndarray             # aligned with members
    member_set: set[int] = field(repr=False)
    _index: dict[int, int] = field(repr=False)

    def depth_of(self, v: int) -> int:
        return int(self.depth[self._index[v]])

    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {int(v): [] for v in self.members}
        for v, p in self.parent.items():
            out[p].append(v)
        return out

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {int(v): [] for v in self.members}
        for v, p in self.parent.items():
            adj[v].append(p)
            adj[p].append(v)
        return adj

    def distance(self, u: int, v: int) -> int:
        """Path length inside the tree (not the induced subgraph)."""
        du, dv = self.depth_of(u), self.depth_of(v)
        hops = 0
        while du > dv:
            u = self.parent[u]
            du -= 1
            hops += 1
        while dv > du:
            v = self.parent[v]
            dv -= 1
            hops += 1
        while u != v:
            u = self.parent[u]
            v = self.parent[v]
            hops += 2
        return hops

    def __iter__(self) -> Iterator[int]:
        return iter(int(v) for v in self.members)


def total_boundary(g: Graph, D: np.ndarray, part: FiberPartition,
                   x: int) -> TotalBoundaryTree:
    """Boundary of F(x): members with a neighbor in another fiber, each
    non-root member hanging from its unique neighbor toward x."""
    rx = int(x)
    members = [int(v) for v in part.fibers[rx]
               if any(part.root[w] != rx for w in g.adj[v])]
    member_set = set(members)
    if rx not in member_set:
        raise ClassViolationError(
            "fiber root has no outside neighbor",
            {"kind": "boundary_missing_root", "fiber": rx})
    parent: dict[int, int] = {}
    for v in members:
        if v == rx:
            continue
        closer = [w for w in g.adj[v] if D[w, rx] == D[v, rx] - 1]
        if len(closer) != 1:
            raise ClassViolationError(
                "boundary vertex lacks a unique parent toward the root",
                {"kind": "boundary_parent", "fiber": rx, "vertex": v,
                 "candidates": closer})
        p = closer[0]
        if p not in member_set:
            raise ClassViolationError(
                "boundary parent leaves the boundary",
                {"kind": "boundary_parent_outside", "fiber": rx,
                 "vertex": v, "parent": p})
        parent[v] = p
    arr = np.array(members, dtype=np.int64)
    depth = D[arr, rx].astype(np.int64)
    index = {int(v): i for i, v in enumerate(arr)}
    return TotalBoundaryTree(rx, arr, parent, depth, member_set, index)


def entrance(D: np.ndarray, part: FiberPartition, tree: TotalBoundaryTree,
             v: int) -> int:
    """Unique vertex nearest the panel root among v's nearest vertices of
    the panel fiber; v must live outside that fiber."""
    w = tree.root
    fib = part.fibers[w]
    dvals = D[v, fib]
    lo = dvals.min()
    proj = fib[dvals == lo]
    off = [int(p) for p in proj if int(p) not in tree.member_set]
    if off:
        raise ClassViolationError(
            "projection leaves the fiber boundary",
            {"kind": "projection_off_boundary", "fiber": int(w),
             "vertex": v, "outside": off})
    droot = D[proj, w]
    best = droot.min()
    hits = np.nonzero(droot == best)[0]
    if len(hits) != 1:
        raise ClassViolationError(
            "entrance is not unique",
            {"kind": "entrance_not_unique", "fiber": int(w), "vertex": v,
             "candidates": [int(proj[i]) for i in hits]})
    return int(proj[hits[0]])


def exits(D: np.ndarray, tree: TotalBoundaryTree, u: int) -> tuple[int, int]:
    """The at-most-two deepest boundary vertices reachable inside I(u, x).

    The trace of I(u, x) on the boundary tree is a parent-closed subtree
    with one or two leaves; both leaves are returned (repeated when the
    trace is a single descending path, in particular when u is itself a
    boundary vertex).
    """
    x = tree.root
    mask = D[u, tree.members] + tree.depth == D[u, x]
    trace = set(int(v) for v in tree.members[mask])
    if not trace:
        raise ClassViolationError(
            "interval trace misses the fiber root",
            {"kind": "empty_trace", "fiber": int(x), "vertex": u})
    internal = set()
    for v in trace:
        if v != x:
            p = tree.parent[v]
            if p not in trace:
                raise ClassViolationError(
                    "interval trace is not parent-closed",
                    {"kind": "trace_not_closed", "fiber": int(x),
                     "vertex": u, "member": v, "parent": p})
            internal.add(p)
    leaves = sorted(trace - internal)
    if len(leaves) == 1:
        return leaves[0], leaves[0]
    if len(leaves) == 2:
        return leaves[0], leaves[1]
    raise ClassViolationError(
        "interval trace has more than two branches",
        {"kind": "trace_too_branched", "fiber": int(x), "vertex": u,
         "leaves": leaves})
