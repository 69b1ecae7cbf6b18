"""Measure the achieved stretch over whole instances, not single queries.

verify_labels compares every pair (or a random sample) against true BFS
distances and reports ratio statistics, a histogram, and the breakdown by
decode branch.  Trees must come out exact; general instances stay inside
the factor-4 band, and most pairs land well below it.
"""
import starfiber as sf

for seed in (1, 2, 3):
    g = sf.random_instance(400, seed=seed)
    D = sf.all_pairs(g)
    ls, info = sf.encode_graph(g, with_info=True)
    rep = sf.verify_labels(g, ls, D=D, info=info)
    print(f"random seed {seed}: n={g.n}, {rep['pairs']} pairs, "
          f"mean ratio {rep['mean_ratio']:.3f}, max {rep['max_ratio']:.3f}, "
          f"exact {100 * rep['exact_pairs'] / rep['pairs']:.1f}%")
    print("  histogram:", rep["ratio_histogram"])
    print("  branches: ", rep["branches"])
    assert rep["ok"]

# the same labels are exact on trees
g = sf.random_tree(512, seed=9)
rep = sf.verify_labels(g, sf.encode_graph(g), D=sf.all_pairs(g))
print(f"\ntree n={g.n}: min ratio {rep['min_ratio']}, "
      f"max ratio {rep['max_ratio']}")

# structural invariants of the partition, audited level by level
bad = sf.structural_invariants(sf.glued_triangles(3, 20, seed=4))
print("invariant failures on glued instance:", bad or "none")
