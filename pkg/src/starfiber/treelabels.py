"""Exact distance labels for trees via centroid separators.

A label is a sequence of (separator, distance) pairs, one per level of
the centroid decomposition the vertex belongs to; two labels from the
same tree decode to the exact tree distance.  Labels have at most
ceil(log2 n) + 1 entries.
"""

from __future__ import annotations

from collections import deque
from typing import Mapping, Sequence

TreeLabel = tuple[tuple[int, int], ...]


def _centroid(comp: list[int], adj: Mapping[int, Sequence[int]],
              removed: set[int]) -> int:
    total = len(comp)
    root = comp[0]
    order = [root]
    parent: dict[int, int | None] = {root: None}
    for v in order:
        for w in adj[v]:
            if w not in removed and w not in parent:
                parent[w] = v
                order.append(w)
    size = {v: 1 for v in order}
    for v in reversed(order):
        if parent[v] is not None:
            size[parent[v]] += size[v]
    best = None
    for v in order:
        heaviest = total - size[v]
        for w in adj[v]:
            if w not in removed and parent.get(w) == v:
                heaviest = max(heaviest, size[w])
        key = (heaviest, v)
        if best is None or key < best:
            best = key
    return best[1]


def encode_tree(adj: Mapping[int, Sequence[int]]) -> dict[int, list[tuple[int, int]]]:
    """Centroid-separator labels for every vertex of a tree given as an
    adjacency mapping.  Ties between centroid candidates go to the
    smallest id, so the output is deterministic."""
    labels: dict[int, list[tuple[int, int]]] = {v: [] for v in adj}
    removed: set[int] = set()
    stack = [sorted(adj)]
    while stack:
        comp = stack.pop()
        c = _centroid(comp, adj, removed)
        dist = {c: 0}
        q = deque([c])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in removed and w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        for v in comp:
            labels[v].append((c, dist[v]))
        removed.add(c)
        seen: set[int] = set()
        for v in comp:
            if v == c or v in seen:
                continue
            bucket = [v]
            seen.add(v)
            for a in bucket:
                for w in adj[a]:
                    if w != c and w not in removed and w not in seen:
                        seen.add(w)
                        bucket.append(w)
            stack.append(sorted(bucket))
    return labels


def tree_distance(a: Sequence[tuple[int, int]], b: Sequence[tuple[int, int]]) -> int:
    """Exact distance between two vertices of the same encoded tree."""
    best = None
    for (sa, da), (sb, db) in zip(a, b):
        if sa != sb:
            break
        s = da + db
        if best is None or s < best:
            best = s
    if best is None:
        raise ValueError("labels do not share a separator level")
    return best
