"""Seeded generators for class instances used by tests and the CLI.

All generators are deterministic in their parameters and seed: the same
call produces byte-identical graphs.  `glued_triangles` and
`random_instance` re-check class membership and resample on failure.
"""

from __future__ import annotations

import random

from .classcheck import is_bridged, is_k4_free
from .graphs import Graph, all_pairs


def _triangle_rows(k: int) -> tuple[int, list[tuple[int, int]]]:
    """Edges of a side-k triangular patch; vertex (i, j) -> i(i+1)/2 + j."""

    def vid(i: int, j: int) -> int:
        return i * (i + 1) // 2 + j

    edges = []
    for i in range(k + 1):
        for j in range(i):
            edges.append((vid(i, j), vid(i, j + 1)))
        if i < k:
            for j in range(i + 1):
                edges.append((vid(i, j), vid(i + 1, j)))
                edges.append((vid(i, j), vid(i + 1, j + 1)))
    return (k + 1) * (k + 2) // 2, edges


def _triangle_sides(k: int) -> list[list[int]]:
    """The three extreme sides as ordered id lists (k+1 vertices each)."""

    def vid(i: int, j: int) -> int:
        return i * (i + 1) // 2 + j

    left = [vid(i, 0) for i in range(k + 1)]
    right = [vid(i, i) for i in range(k + 1)]
    bottom = [vid(k, j) for j in range(k + 1)]
    return [left, right, bottom]


def flat_triangle(k: int) -> Graph:
    """Equilateral patch of the triangular grid with side k."""
    if k < 0:
        raise ValueError("side must be >= 0")
    n, edges = _triangle_rows(k)
    return Graph(n, edges)


def _lozenge_edges(a: int, b: int) -> tuple[int, list[tuple[int, int]]]:
    """Triangulated (a+1) x (b+1) parallelogram; (i, j) -> i(b+1) + j."""

    def vid(i: int, j: int) -> int:
        return i * (b + 1) + j

    edges = []
    for i in range(a + 1):
        for j in range(b + 1):
            if i < a:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j < b:
                edges.append((vid(i, j), vid(i, j + 1)))
            if i < a and j > 0:
                edges.append((vid(i, j), vid(i + 1, j - 1)))
    return (a + 1) * (b + 1), edges


def lozenge(a: int, b: int) -> Graph:
    """Interval shape of the triangular grid: opposite corners are vertex 0
    and vertex n-1 at distance a+b, and every vertex lies between them."""
    if a < 1 or b < 1:
        raise ValueError("lozenge sides must be >= 1")
    n, edges = _lozenge_edges(a, b)
    return Graph(n, edges)


def burned_lozenge(a: int, b: int, seed: int, budget: int | None = None) -> Graph:
    """Lozenge with pseudo-random removable degree-3 vertices burned away.

    A vertex is removable when it is not one of the two designated corners
    and deleting it keeps the graph connected with the corners still at
    distance a+b.  With budget=None, burning continues while any vertex is
    removable; budget=0 returns the plain lozenge.  The corners end up as
    vertex 0 and vertex n-1 of the result.
    """
    n, edges = _lozenge_edges(a, b)
    rng = random.Random(seed)
    alive = set(range(n))
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    corners = (0, n - 1)
    target = a + b

    def corner_distance_ok() -> bool:
        dist = {corners[0]: 0}
        queue = [corners[0]]
        for u in queue:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return len(dist) == len(alive) and dist.get(corners[1]) == target

    removed = 0
    blocked: set[int] = set()
    while budget is None or removed < budget:
        cands = sorted(
            v for v in alive
            if len(adj[v]) == 3 and v not in corners and v not in blocked
        )
        if not cands:
            break
        v = rng.choice(cands)
        saved = adj[v]
        alive.discard(v)
        adj[v] = set()
        for w in saved:
            adj[w].discard(v)
        if corner_distance_ok():
            removed += 1
            blocked.clear()
        else:
            alive.add(v)
            adj[v] = saved
            for w in saved:
                adj[w].add(v)
            blocked.add(v)
    relabel = {v: i for i, v in enumerate(sorted(alive))}
    out_edges = [
        (relabel[u], relabel[v]) for u in alive for v in adj[u] if u < v
    ]
    return Graph(len(alive), out_edges)


class _Assembly:
    """Mutable edge/vertex pool for gluing grid patches together."""

    def __init__(self) -> None:
        self.edges: set[tuple[int, int]] = set()
        self.next_id = 0
        self.free_sides: list[list[int]] = []

    def add_patch(self, g: Graph, pinned: dict[int, int]) -> dict[int, int]:
        """Insert a patch; `pinned` maps patch-local ids to existing ids."""
        mapping = dict(pinned)
        for v in range(g.n):
            if v not in mapping:
                mapping[v] = self.next_id
                self.next_id += 1
        for u, v in g.edges():
            a, b = mapping[u], mapping[v]
            self.edges.add((a, b) if a < b else (b, a))
        return mapping

    def build(self) -> Graph:
        return Graph(self.next_id, sorted(self.edges))


def _class_ok(g: Graph) -> bool:
    D = all_pairs(g)
    return is_k4_free(g)[0] and is_bridged(g, D)[0]


def glued_triangles(k: int, t: int, seed: int) -> Graph:
    """t side-k triangular patches glued along full sides in a seeded
    tree-of-copies pattern.  Resamples if the result leaves the class."""
    if k < 1 or t < 1:
        raise ValueError("need k >= 1 and t >= 1")
    rng = random.Random(seed)
    for _ in range(20):
        asm = _Assembly()
        patch = flat_triangle(k)
        sides = _triangle_sides(k)
        mapping = asm.add_patch(patch, {})
        asm.free_sides = [[mapping[v] for v in s] for s in sides]
        for _ in range(t - 1):
            target = asm.free_sides.pop(rng.randrange(len(asm.free_sides)))
            if rng.random() < 0.5:
                target = target[::-1]
            own = rng.randrange(3)
            pinned = dict(zip(sides[own], target))
            mapping = asm.add_patch(patch, pinned)
            for s_idx in range(3):
                if s_idx != own:
                    asm.free_sides.append([mapping[v] for v in sides[s_idx]])
        g = asm.build()
        if _class_ok(g):
            return g
    raise RuntimeError(f"glued_triangles({k}, {t}, {seed}) kept failing class-check")


def random_instance(n_target: int, seed: int) -> Graph:
    """Random class instance of roughly n_target vertices: grid patches
    glued along matching sides or at single vertices, seeded."""
    if n_target < 1:
        raise ValueError("n_target must be >= 1")
    if n_target == 1:
        return Graph(1, [])
    rng = random.Random(seed)

    def make_patch() -> tuple[Graph, list[list[int]] | None]:
        kind = rng.choice(("triangle", "lozenge", "burned"))
        if kind == "triangle":
            k = rng.randint(1, 6)
            return flat_triangle(k), _triangle_sides(k)
        a, b = rng.randint(1, 5), rng.randint(1, 5)
        if kind == "lozenge":
            return lozenge(a, b), None
        budget = rng.randint(0, a * b)
        return burned_lozenge(a, b, rng.getrandbits(32), budget), None

    for _ in range(30):
        asm = _Assembly()
        patch, sides = make_patch()
        mapping = asm.add_patch(patch, {})
        if sides:
            asm.free_sides = [[mapping[v] for v in s] for s in sides]
        while asm.next_id < n_target:
            patch, sides = make_patch()
            matching = (
                [s for s in asm.free_sides if sides and len(s) == len(sides[0])]
            )
            if sides and matching and rng.random() < 0.6:
                target = matching[rng.randrange(len(matching))]
                asm.free_sides.remove(target)
                if rng.random() < 0.5:
                    target = target[::-1]
                own = rng.randrange(3)
                pinned = dict(zip(sides[own], target))
                mapping = asm.add_patch(patch, pinned)
                new_sides = [s for i, s in enumerate(sides) if i != own]
            else:
                anchor = rng.randrange(asm.next_id)
                mapping = asm.add_patch(patch, {0: anchor})
                new_sides = sides or []
            for s in new_sides:
                asm.free_sides.append([mapping[v] for v in s])
        g = asm.build()
        if _class_ok(g):
            return g
    raise RuntimeError(f"random_instance({n_target}, {seed}) kept failing class-check")


def random_tree(n: int, seed: int) -> Graph:
    """Random recursive tree on n vertices (trees are class members)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])
