"""Independent brute-force reference implementations used by the tests.

Everything here is deliberately slow and simple: plain loops, no numpy,
no shared code with the package beyond the Graph container.
"""
from __future__ import annotations

import random
from itertools import combinations

from starfiber import Graph

INF = float("inf")


def floyd_warshall(g: Graph) -> list[list[float]]:
    n = g.n
    D = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in g.edges():
        D[u][v] = D[v][u] = 1
    for k in range(n):
        Dk = D[k]
        for i in range(n):
            Di = D[i]
            dik = Di[k]
            if dik == INF:
                continue
            for j in range(n):
                alt = dik + Dk[j]
                if alt < Di[j]:
                    Di[j] = alt
    return D


def k4_by_enumeration(g: Graph) -> bool:
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    for quad in combinations(range(g.n), 4):
        if all(b in adj[a] for a, b in combinations(quad, 2)):
            return False
    return True


def _cycle_order(mask_vertices: list[int], adj: list[set]) -> list[int] | None:
    """Return the vertices in cycle order if they induce a single cycle."""
    vs = set(mask_vertices)
    for v in mask_vertices:
        if len(adj[v] & vs) != 2:
            return None
    start = mask_vertices[0]
    order = [start]
    prev, cur = None, start
    while True:
        nxt = [w for w in adj[cur] & vs if w != prev]
        nxt = nxt[0] if prev is not None else min(nxt)
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == len(mask_vertices) else None


def bridged_by_isometric_cycles(g: Graph) -> bool:
    """A graph is bridged iff every isometric cycle is a triangle.

    Enumerates induced cycles of length >= 4 over vertex bitmasks, so
    only usable for very small graphs.
    """
    n = g.n
    D = floyd_warshall(g)
    adj = [set(g.neighbors(v)) for v in range(n)]
    adj_bits = [0] * n
    for u, v in g.edges():
        adj_bits[u] |= 1 << v
        adj_bits[v] |= 1 << u
    for mask in range(1, 1 << n):
        if bin(mask).count("1") < 4:
            continue
        vs = [v for v in range(n) if mask >> v & 1]
        if any(bin(adj_bits[v] & mask).count("1") != 2 for v in vs):
            continue
        order = _cycle_order(vs, adj)
        if order is None:
            continue
        L = len(order)
        isometric = True
        for i in range(L):
            for j in range(i + 1, L):
                if min(j - i, L - (j - i)) != D[order[i]][order[j]]:
                    isometric = False
                    break
            if not isometric:
                break
        if isometric:
            return False
    return True


def random_connected_graph(rng: random.Random, max_n: int = 9) -> Graph:
    while True:
        n = rng.randint(1, max_n)
        p = rng.uniform(0.15, 0.9)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rng.random() < p]
        g = Graph(n, edges)
        seen = {0}
        stack = [0]
        while stack:
            for w in g.neighbors(stack.pop()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == n:
            return g


def _components_without(g: Graph, removed: set[int]) -> int:
    seen: set[int] = set()
    comps = 0
    for s in range(g.n):
        if s in removed or s in seen:
            continue
        comps += 1
        stack = [s]
        seen.add(s)
        while stack:
            for w in g.neighbors(stack.pop()):
                if w not in removed and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return comps


def blocks_by_edge_removal(g: Graph) -> tuple[list[list[int]], set[int]]:
    """Biconnected components by brute force.

    Two edges share a block iff no single vertex of the edge-subdivided
    graph separates their midpoints.  Quadratic in m, fine for tests.
    """
    edges = list(g.edges())
    base = _components_without(g, set())
    arts = {v for v in range(g.n)
            if _components_without(g, {v}) > base - (not g.neighbors(v))}

    # subdivide every edge once
    sub_edges = []
    mid = {}
    nid = g.n
    for e in edges:
        mid[e] = nid
        sub_edges += [(e[0], nid), (nid, e[1])]
        nid += 1
    sg = Graph(nid, sub_edges)

    def same_block(e: tuple, f: tuple) -> bool:
        a, b = mid[e], mid[f]
        for v in range(g.n):
            dist = {a: 0}
            stack = [a]
            while stack:
                for w in sg.neighbors(stack.pop()):
                    if w != v and w not in dist:
                        dist[w] = 1
                        stack.append(w)
            if b not in dist:
                return False
        return True

    parent = list(range(len(edges)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            if find(i) != find(j) and same_block(edges[i], edges[j]):
                parent[find(i)] = find(j)

    groups: dict[int, set[int]] = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), set()).update(e)
    blocks = [sorted(vs) for vs in groups.values()]
    covered = set().union(*groups.values()) if groups else set()
    blocks += [[v] for v in range(g.n) if v not in covered]
    return sorted(blocks), arts
