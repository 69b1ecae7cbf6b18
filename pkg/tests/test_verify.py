import pytest

import starfiber as sf
from starfiber.codec import LevelRecord
from starfiber.verify import classify_pair, iter_pairs

from .conftest import path


def test_report_shape_and_counts():
    g = sf.flat_triangle(5)
    D = sf.all_pairs(g)
    ls, info = sf.encode_graph(g, with_info=True)
    rep = sf.verify_labels(g, ls, D=D, info=info)
    assert rep["ok"] and not rep["violations"]
    assert rep["n"] == g.n
    assert rep["pairs"] == g.n * (g.n - 1) // 2
    assert not rep["sampled"]
    assert 1.0 <= rep["min_ratio"] <= rep["mean_ratio"] <= rep["max_ratio"] <= 4.0
    assert sum(rep["branches"].values()) == rep["pairs"]
    assert sum(rep["kinds"].values()) == rep["pairs"]
    assert sum(rep["ratio_histogram"].values()) == rep["pairs"]
    # ratio-1 pairs land in the first histogram bin (with e.g. 6/5 pairs)
    assert 0 < rep["exact_pairs"] <= rep["ratio_histogram"]["1.00-1.25"]


def test_classify_pair_matches_decode_branch():
    g = sf.glued_triangles(3, 6, seed=9)
    ls, info = sf.encode_graph(g, with_info=True)
    branch_for = {"separated": "median", "almost": "median",
                  "pc": "pc", "cc": "cc"}
    for u in range(0, g.n, 3):
        for v in range(u + 1, g.n, 2):
            kind, lvl = classify_pair(info, u, v)
            est, branch, dlvl = sf.decode_explain(ls.labels[u], ls.labels[v])
            assert branch == branch_for[kind]
            assert lvl == dlvl


def test_separated_pairs_exact_almost_at_most_double():
    g = sf.random_instance(200, seed=4)
    D = sf.all_pairs(g)
    ls, info = sf.encode_graph(g, with_info=True)
    seen = set()
    for u in range(g.n):
        for v in range(u + 1, g.n):
            kind, _ = classify_pair(info, u, v)
            seen.add(kind)
            est = ls.decode(u, v)
            d = int(D[u, v])
            if kind == "separated":
                assert est == d
            elif kind == "almost":
                assert d <= est <= 2 * d
    assert "separated" in seen and "almost" in seen


def test_sampling_is_deterministic_and_bounded():
    g = sf.glued_triangles(3, 10, seed=0)
    ls = sf.encode_graph(g)
    a = sf.verify_labels(g, ls, sample=500, seed=7)
    b = sf.verify_labels(g, ls, sample=500, seed=7)
    assert a == b
    assert a["pairs"] == 500 and a["sampled"]
    c = sf.verify_labels(g, ls, sample=500, seed=8)
    assert c["pairs"] == 500
    pairs = list(iter_pairs(g.n, 500, 7))
    assert len(pairs) == 500
    assert all(u != v for u, v in pairs)


def test_threaded_scan_matches_serial():
    g = sf.random_instance(150, seed=2)
    D = sf.all_pairs(g)
    ls, info = sf.encode_graph(g, with_info=True)
    serial = sf.verify_labels(g, ls, D=D, info=info)
    threaded = sf.verify_labels(g, ls, D=D, info=info, threads=4)
    assert serial == threaded


def test_tampered_labels_are_flagged():
    g = sf.flat_triangle(5)
    ls = sf.encode_graph(g)
    rec = ls.labels[3].levels[0]
    ls.labels[3].levels[0] = LevelRecord(
        rec.median, rec.median_distance + 9, rec.star_label,
        rec.left, rec.right)
    rep = sf.verify_labels(g, ls)
    assert not rep["ok"]
    assert any(v["kind"] == "stretch" and 3 in (v["u"], v["v"])
               for v in rep["violations"])


def test_violation_cap():
    g = sf.flat_triangle(5)
    ls = sf.encode_graph(g)
    for v in range(g.n):
        rec = ls.labels[v].levels[0]
        ls.labels[v].levels[0] = LevelRecord(
            rec.median, rec.median_distance + 50, rec.star_label,
            rec.left, rec.right)
    rep = sf.verify_labels(g, ls, max_violations=5)
    assert len(rep["violations"]) == 5
    assert not rep["ok"]


def test_structural_invariants_clean_and_dirty():
    g = sf.glued_triangles(3, 6, seed=1)
    assert sf.structural_invariants(g) == []
    # a path is in the class; its invariants hold too
    assert sf.structural_invariants(path(9)) == []


def test_invariants_reject_out_of_class_input():
    from .conftest import cycle
    with pytest.raises(sf.ClassViolationError):
        sf.encode_graph(cycle(4))
    failures = sf.structural_invariants(cycle(6))
    assert failures  # C6 is not bridged; the walk reports rather than raises
