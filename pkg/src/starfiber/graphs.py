"""Core graph type and metric primitives.

Vertices are dense integer ids 0..n-1.  Graphs are simple, undirected and
(for everything downstream of `all_pairs`) connected.  The distance matrix
is a plain numpy int32 array indexed [u, v].
"""

from __future__ import annotations

import hashlib
from collections import deque
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


class GraphFormatError(ValueError):
    """Raised for malformed graph text or invalid edge lists."""


class DisconnectedGraphError(ValueError):
    """Raised when an operation requires a connected graph."""


class Graph:
    """Simple undirected graph with sorted adjacency lists."""

    __slots__ = ("n", "adj", "_adjsets", "m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise GraphFormatError(f"vertex count must be >= 1, got {n}")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({key[0]}, {key[1]})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        for lst in adj:
            lst.sort()
        self.n = n
        self.adj = adj
        self._adjsets = [set(lst) for lst in adj]
        self.m = len(seen)

    def neighbors(self, v: int) -> list[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield each edge once as (u, v) with u < v, lexicographically."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def subgraph(self, vertices: Sequence[int]) -> tuple["Graph", np.ndarray]:
        """Induced subgraph on `vertices`, relabeled 0..k-1 in ascending
        order of the original ids.  Returns (graph, original_ids)."""
        gids = np.array(sorted(vertices), dtype=np.int64)
        local = {int(g): i for i, g in enumerate(gids)}
        edges = []
        for g_u in gids:
            for g_v in self.adj[g_u]:
                if g_u < g_v and g_v in local:
                    edges.append((local[int(g_u)], local[int(g_v)]))
        return Graph(len(gids), edges), gids

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def parse_graph(text: str) -> Graph:
    """Parse the text format: first line `n m`, then m lines `u v`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphFormatError("empty graph text")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphFormatError(f"header must be 'n m', got {lines[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError(f"non-integer header {lines[0]!r}") from None
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError(f"bad edge line {ln!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"non-integer edge line {ln!r}") from None
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    """Render the canonical text form: `n m` then sorted `u v` lines."""
    out = [f"{g.n} {g.m}"]
    out.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(out) + "\n"


def graph_hash(g: Graph) -> str:
    """SHA-256 of the canonical text form; identifies the instance."""
    return hashlib.sha256(format_graph(g).encode("ascii")).hexdigest()


def bfs_distances(g: Graph, source: int) -> np.ndarray:
    """Hop distances from `source`; unreachable vertices get -1."""
    dist = np.full(g.n, -1, dtype=np.int32)
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u]
        for v in g.adj[u]:
            if dist[v] < 0:
                dist[v] = du + 1
                q.append(v)
    return dist


def is_connected(g: Graph) -> bool:
    return bool((bfs_distances(g, 0) >= 0).all())


def _csr(g: Graph) -> csr_matrix:
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    for v in range(g.n):
        indptr[v + 1] = indptr[v] + len(g.adj[v])
    indices = np.fromiter(
        (v for lst in g.adj for v in lst), dtype=np.int64, count=int(indptr[-1])
    )
    data = np.ones(len(indices), dtype=np.int8)
    return csr_matrix((data, indices, indptr), shape=(g.n, g.n))


def all_pairs(g: Graph) -> np.ndarray:
    """Full distance matrix (int32).  Rejects disconnected inputs."""
    if g.n == 1:
        return np.zeros((1, 1), dtype=np.int32)
    dist = shortest_path(_csr(g), method="D", unweighted=True, directed=False)
    if np.isinf(dist).any():
        far = int(np.nonzero(np.isinf(dist[0]))[0][0])
        raise DisconnectedGraphError(f"graph is disconnected: no path from 0 to {far}")
    return dist.astype(np.int32)


def interval_mask(D: np.ndarray, u: int, v: int) -> np.ndarray:
    """Boolean mask of I(u, v), the vertices on shortest (u, v)-paths."""
    return D[u] + D[v] == D[u, v]


def interval(D: np.ndarray, u: int, v: int) -> list[int]:
    """I(u, v) as an ascending list of vertex ids."""
    return np.nonzero(interval_mask(D, u, v))[0].tolist()


def metric_projection(D: np.ndarray, u: int, targets: Sequence[int]) -> list[int]:
    """Vertices of `targets` nearest to u, ascending, ties kept."""
    arr = np.asarray(sorted(targets), dtype=np.int64)
    if arr.size == 0:
        raise ValueError("projection onto an empty set")
    d = D[u, arr]
    return arr[d == d.min()].tolist()


def quasi_median(D: np.ndarray, u1: int, u2: int, u3: int) -> tuple[int, int, int]:
    """Metric triangle obtained by pulling each corner as far as possible
    into the intersection of its two incident intervals (ties: min id)."""

    def pull(a: int, b: int, c: int) -> int:
        ids = np.nonzero(interval_mask(D, a, b) & interval_mask(D, a, c))[0]
        return int(ids[np.argmax(D[a, ids])])

    u1p = pull(u1, u2, u3)
    u2p = pull(u2, u1p, u3)
    u3p = pull(u3, u1p, u2p)
    return u1p, u2p, u3p


def is_convex(D: np.ndarray, vertices: Iterable[int]) -> bool:
    """True iff every shortest path between members stays inside the set."""
    ids = np.asarray(sorted(set(vertices)), dtype=np.int64)
    inside = np.zeros(D.shape[0], dtype=bool)
    inside[ids] = True
    # quadratic over member pairs; fine at test scale
    for a in ids:
        for b in ids:
            if a < b and not inside[interval_mask(D, int(a), int(b))].all():
                return False
    return True


def blocks(g: Graph) -> tuple[list[list[int]], set[int]]:
    """Biconnected components and articulation vertices.

    Each block is returned as an ascending vertex list; a bridge edge is a
    2-vertex block.  Vertices with no incident edge form singleton blocks.
    """
    n = g.n
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    arts: set[int] = set()
    comps: list[list[int]] = []
    counter = 0
    for start in range(n):
        if disc[start] != -1:
            continue
        if not g.adj[start]:
            comps.append([start])
            continue
        root_children = 0
        edge_stack: list[tuple[int, int]] = []
        disc[start] = low[start] = counter
        counter += 1
        stack: list[tuple[int, Iterator[int]]] = [(start, iter(g.adj[start]))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for v in it:
                if disc[v] == -1:
                    parent[v] = u
                    if u == start:
                        root_children += 1
                    edge_stack.append((u, v))
                    disc[v] = low[v] = counter
                    counter += 1
                    stack.append((v, iter(g.adj[v])))
                    advanced = True
                    break
                elif v != parent[u] and disc[v] < disc[u]:
                    edge_stack.append((u, v))
                    if disc[v] < low[u]:
                        low[u] = disc[v]
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] >= disc[p]:
                    comp = set()
                    while edge_stack:
                        a, b = edge_stack.pop()
                        comp.add(a)
                        comp.add(b)
                        if (a, b) == (p, u):
                            break
                    comps.append(sorted(comp))
                    if p != start or root_children > 1:
                        arts.add(p)
    return comps, arts
