"""Generate instances from every built-in family and run the class check.

The encoder accepts connected graphs that contain no K4 and in which every
isometric cycle is a triangle.  This script builds one instance per family,
confirms each passes, then shows the concrete witnesses the checker returns
for graphs outside the class.
"""
import starfiber as sf

families = [
    ("flat triangle, side 6", sf.flat_triangle(6)),
    ("lozenge 8x5", sf.lozenge(8, 5)),
    ("burned lozenge 8x5", sf.burned_lozenge(8, 5, seed=3, budget=15)),
    ("glued triangles", sf.glued_triangles(4, 12, seed=1)),
    ("random instance", sf.random_instance(300, seed=7)),
    ("random tree", sf.random_tree(300, seed=7)),
]

for name, g in families:
    ok4, _ = sf.is_k4_free(g)
    okb, _ = sf.is_bridged(g)
    print(f"{name:24s} n={g.n:4d} m={g.m:5d} "
          f"k4_free={ok4} bridged={okb}")

# Rejections come with a witness naming the offending vertices.
print()
for name, text in [
    ("4-cycle", "4 4\n0 1\n1 2\n2 3\n0 3\n"),
    ("5-cycle", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n"),
    ("6-cycle", "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n"),
]:
    ok, wit = sf.is_bridged(sf.parse_graph(text))
    print(f"{name}: rejected, witness {wit}")

k4 = sf.parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
ok, wit = sf.is_k4_free(k4)
print(f"K4:      rejected, witness {wit}")
