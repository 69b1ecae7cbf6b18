import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import starfiber as sf
from starfiber import LabelMismatchError, LabelParseError, LabelSet
from starfiber.codec import (LevelRecord, SidePart, VertexLabel,
                             decode_explain, deserialize_label,
                             serialize_label)

from .conftest import path
from .oracles import floyd_warshall


def test_path_decodes_exactly():
    # P5: median 2, both halves are separated panel fibers, every branch
    # of the recursion is a path again, so all estimates are exact
    g = path(5)
    ls = sf.encode_graph(g)
    F = floyd_warshall(g)
    for u in range(5):
        for v in range(5):
            assert ls.decode(u, v) == F[u][v]


def test_identical_vertex_is_zero():
    ls = sf.encode_graph(sf.flat_triangle(3))
    assert ls.decode(7, 7) == 0


def test_decode_is_symmetric():
    g = sf.glued_triangles(3, 5, seed=6)
    ls = sf.encode_graph(g)
    rnd = random.Random(1)
    for _ in range(300):
        u, v = rnd.randrange(g.n), rnd.randrange(g.n)
        assert ls.decode(u, v) == ls.decode(v, u)


def test_branches_on_small_triangle_grid():
    # rows 0 / 1 2 / 3 4 5 / 6 7 8 9 / 10 11 12 13 14; median is 4, the
    # four apexes are 0, 6, 9, 12; fixed pairs exercise every branch
    g = sf.flat_triangle(4)
    D = floyd_warshall(g)
    ls = sf.encode_graph(g)

    def check(u, v, want_branch, want_est):
        est, branch, level = decode_explain(ls.labels[u], ls.labels[v])
        assert (branch, est) == (want_branch, want_est)
        assert D[u][v] <= est <= 4 * D[u][v]
        assert level == 0

    check(0, 1, "pc", 1)      # apex 0 next to its panel vertex 1
    check(6, 11, "pc", 2)     # true distance 1, estimate may double
    check(3, 10, "pc", 2)
    check(6, 12, "cc", 2)     # cones over (3,7) and (7,8) share panel 7
    check(10, 12, "cc", 3)    # true distance 2
    check(0, 4, "median", 2)  # apex to the median itself: exact
    check(0, 11, "median", 4)
    check(1, 2, "median", 2)  # adjacent panels, true distance 1


def test_level_count_is_logarithmic():
    for make, n_expect in [(lambda: sf.random_instance(400, seed=2), None),
                           (lambda: sf.random_tree(700, seed=2), 700)]:
        g = make()
        ls = sf.encode_graph(g)
        cap = math.ceil(math.log2(g.n)) + 1
        assert max(len(lab.levels) for lab in ls.labels.values()) <= cap


def test_serialize_round_trip_instance():
    g = sf.glued_triangles(3, 8, seed=1)
    ls = sf.encode_graph(g)
    for v in range(g.n):
        blob = serialize_label(ls.labels[v])
        back = deserialize_label(blob)
        assert back == ls.labels[v]
        assert serialize_label(back) == blob


def test_label_set_text_round_trip():
    g = sf.lozenge(4, 3)
    ls = sf.encode_graph(g)
    text = ls.to_text()
    again = LabelSet.from_text(text)
    assert again.n == ls.n
    assert again.instance_hash == ls.instance_hash
    assert again.labels == ls.labels
    assert again.to_text() == text


side = st.builds(
    SidePart,
    st.lists(st.tuples(st.integers(0, 2**20), st.integers(0, 2**20)),
             max_size=5).map(tuple),
    st.integers(0, 2**30))
record = st.builds(
    LevelRecord,
    st.integers(0, 2**30), st.integers(0, 2**30),
    st.sets(st.integers(0, 200), max_size=2).map(frozenset),
    st.none(), st.none()) | st.builds(
    LevelRecord,
    st.integers(0, 2**30), st.integers(0, 2**30),
    st.sets(st.integers(0, 200), max_size=2).map(frozenset),
    side, side)
label = st.builds(VertexLabel, st.integers(0, 2**30),
                  st.lists(record, max_size=6))


@given(label)
@settings(max_examples=200, deadline=None)
def test_serialize_round_trip_property(lab):
    assert deserialize_label(serialize_label(lab)) == lab


def test_mixed_side_presence_rejected():
    rec = LevelRecord(0, 0, frozenset(), SidePart((), 0), None)
    with pytest.raises(ValueError):
        serialize_label(VertexLabel(0, [rec]))


def test_deserialize_rejects_corruption():
    g = path(5)
    ls = sf.encode_graph(g)
    blob = serialize_label(ls.labels[3])
    with pytest.raises(LabelParseError):
        deserialize_label(blob[:-1])        # truncated
    with pytest.raises(LabelParseError):
        deserialize_label(blob + b"\x00")   # trailing byte
    with pytest.raises(LabelParseError):
        deserialize_label(b"\x80" * 12)     # varint never terminates
    err = None
    try:
        deserialize_label(b"")
    except LabelParseError as e:
        err = e
    assert err is not None and err.offset == 0
    # star label size > 2: vertex 0, one level, median 0, dist 0, size 3
    with pytest.raises(LabelParseError):
        deserialize_label(bytes([0, 1, 0, 0, 3, 1, 2, 3, 0]))
    # side flag outside {0, 1}
    with pytest.raises(LabelParseError):
        deserialize_label(bytes([0, 1, 0, 0, 0, 2]))


def test_from_text_rejects_malformed():
    g = path(4)
    text = sf.encode_graph(g).to_text()
    lines = text.splitlines()
    with pytest.raises(LabelParseError):
        LabelSet.from_text("")
    with pytest.raises(LabelParseError):
        LabelSet.from_text("garbage\n")
    with pytest.raises(LabelParseError):
        LabelSet.from_text(text.replace("v1", "v9"))
    with pytest.raises(LabelParseError):            # missing a label line
        LabelSet.from_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(LabelParseError):            # not base64
        LabelSet.from_text(lines[0] + "\n0\t!!!\n")
    # vertex id on the line must match the payload
    swapped = [lines[0], "1\t" + lines[1].split("\t")[1]]
    with pytest.raises(LabelParseError):
        LabelSet.from_text("\n".join(swapped) + "\n")


def test_cross_instance_decode_refused():
    a = sf.encode_graph(sf.flat_triangle(3))
    b = sf.encode_graph(sf.lozenge(2, 2))
    with pytest.raises(LabelMismatchError):
        sf.decode_pair(a, b, 0, 1)
    # same instance loaded twice is fine
    a2 = LabelSet.from_text(a.to_text())
    assert sf.decode_pair(a, a2, 0, 5) == a.decode(0, 5)


def test_unrelated_labels_share_no_median():
    # raw decode on labels whose top medians differ must refuse
    a = sf.encode_graph(path(5)).labels[0]  # median vertex 2
    g = sf.Graph(5, [(1, 2), (2, 3), (3, 4), (4, 0)])  # median vertex 3
    b = sf.encode_graph(g).labels[1]
    with pytest.raises(LabelMismatchError):
        sf.decode(a, b)
