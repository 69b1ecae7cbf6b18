import math

import starfiber as sf

# Encode once, write the labels to text, read them back, and answer
# distance queries from the file contents alone.

g = sf.random_instance(220, seed=1)
D = sf.all_pairs(g)
ls = sf.encode_graph(g)

bits = ls.label_bits()
budget = math.ceil(math.log2(g.n)) ** 3
print(f"n={g.n}: max label {max(bits)} bits, mean {sum(bits) / g.n:.0f}, "
      f"log2(n)^3 = {budget}")

text = ls.to_text()
print("header:", text.splitlines()[0])

# the reader refuses any file whose payload disagrees with the header
back = sf.LabelSet.from_text(text)
assert back.to_text() == text

# hunt down one pair per decode branch; "pc" pairs straddle a panel and a
# cone of the same star, "cc" pairs straddle two cones, "median" pairs are
# resolved by distances through the star itself
want = {"median", "pc", "cc"}
rows = [(7, 7)]
for u in range(g.n):
    for v in range(u + 1, g.n):
        branch = sf.decode_explain(back.labels[u], back.labels[v])[1]
        if branch in want:
            want.remove(branch)
            rows.append((u, v))
    if not want:
        break

print(f"\n{'pair':>9s} {'true':>5s} {'estimate':>8s} {'branch':>10s} level")
for u, v in rows:
    est, branch, level = sf.decode_explain(back.labels[u], back.labels[v])
    print(f"{u:>4d},{v:<4d} {int(D[u, v]):>5d} {est:>8d} {branch:>10s} "
          f"{level:>5d}")

# estimates never drop below the true distance or exceed four times it
worst = max((ls.decode(u, v) / D[u, v], u, v)
            for u in range(g.n) for v in range(u + 1, g.n))
print(f"\nworst pair {worst[1]},{worst[2]}: ratio {worst[0]:.3f} (bound 4)")
