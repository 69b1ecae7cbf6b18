"""One level of the recursive partition, piece by piece.

Pick the median vertex, build its star (closed neighborhood plus apexes),
and split the remaining vertices into fibers by metric projection.  Every
fiber holds at most half the vertices, which caps the recursion depth.
"""
import starfiber as sf

g = sf.glued_triangles(4, 10, seed=2)
D = sf.all_pairs(g)
m = sf.median_vertex(D)
print(f"instance: n={g.n}, m={g.m}, median vertex {m}")

star = sf.build_star(g, D, m)
print(f"star: center {star.center}, {len(star.neighbors)} bases, "
      f"{len(star.apexes)} apexes")
for apex, y1, y2 in star.apexes:
    print(f"  apex {apex} over bases {y1},{y2}")

# each star vertex gets a set of at most two bases; decoding only ever
# compares these sets, never the vertex ids
labels = sf.star_labels(star)
shown = sorted(labels)[:8]
print("star labels:", {v: sorted(labels[v]) for v in shown}, "...")

part = sf.fiber_partition(g, D, star)
sizes = sorted((len(vs) for vs in part.fibers.values()), reverse=True)
print(f"fibers: {len(part.fibers)}, sizes {sizes[:8]} ..., "
      f"largest {sizes[0]} <= n/2 = {g.n / 2:.0f}")

# the boundary of a fiber forms a tree rooted at the fiber's star vertex;
# tree depth never exceeds the true distance to the root, and tree distance
# never exceeds twice the true distance
panel_roots = [r for r, role in part.role.items() if role == "panel"]
big = max(panel_roots, key=lambda r: len(part.fibers[r]))
tree = sf.total_boundary(g, D, part, big)
print(f"\nboundary tree of fiber F({big}): {len(tree.members)} members")
for v in sorted(tree.members)[:6]:
    print(f"  vertex {v}: depth {tree.depth_of(v)}, true distance "
          f"{int(D[v, big])}")

# entering the fiber from outside: the projection has a unique member
# closest to the root, the entrance
outside = next(int(v) for v in range(g.n) if part.fiber_of(v) != big)
e = sf.entrance(D, part, tree, outside)
print(f"entrance of vertex {outside} into F({big}): {e}")

# leaving the fiber: at most two exit vertices on the boundary cover all
# shortest routes from an interior vertex toward the root
inner = int(part.fibers[big][-1])
e1, e2 = sf.exits(D, tree, inner)
print(f"exits of vertex {inner}: {e1}, {e2}")
