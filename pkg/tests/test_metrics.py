import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distpart import build_graph, contingency, modularity, nmi
from distpart.metrics import entropy

from conftest import brute_modularity, random_graph, two_triangles

# literal double sum over the unweighted karate adjacency, computed once
KARATE_FACTIONS_Q = 0.3582347140039433


def test_one_community_scores_zero(karate):
    assert modularity(karate.graph, np.zeros(34, dtype=int)) == pytest.approx(0.0, abs=1e-15)


def test_triangle_singletons():
    tri = build_graph([(0, 1), (1, 2), (0, 2)])
    assert brute_modularity(tri, [0, 1, 2]) == pytest.approx(-1 / 3, abs=1e-15)
    assert modularity(tri, [0, 1, 2]) == pytest.approx(-1 / 3, abs=1e-15)


def test_bridged_triangles():
    g = two_triangles(bridge=True)
    labels = [0, 0, 0, 1, 1, 1]
    assert brute_modularity(g, labels) == pytest.approx(5 / 14, abs=1e-15)
    assert modularity(g, labels) == pytest.approx(5 / 14, abs=1e-15)


def test_karate_factions_pinned(karate):
    assert brute_modularity(karate.graph, karate.ground_truth) == pytest.approx(
        KARATE_FACTIONS_Q, abs=1e-12)
    assert modularity(karate.graph, karate.ground_truth) == pytest.approx(
        KARATE_FACTIONS_Q, abs=1e-12)


def test_modularity_ignores_weights():
    g = build_graph([(0, 1, 3.0), (1, 2, 0.5), (2, 3, 2.0)])
    labels = [0, 0, 1, 1]
    unweighted = build_graph([(0, 1), (1, 2), (2, 3)])
    assert modularity(g, labels) == modularity(unweighted, labels)


def test_modularity_errors():
    from distpart import from_arrays
    with pytest.raises(ValueError):
        modularity(from_arrays(3, [], []), [0, 1, 2])
    with pytest.raises(ValueError):
        modularity(two_triangles(), [0, 1])


@pytest.mark.parametrize("seed", range(50))
def test_modularity_matches_double_sum_on_random_graphs(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 201))
    g = random_graph(rng, n, float(rng.uniform(0.02, 0.2)))
    if g.edge_count == 0:
        g = random_graph(rng, n, 0.5)
    labels = rng.integers(0, int(rng.integers(1, 10)), size=n)
    assert modularity(g, labels) == pytest.approx(brute_modularity(g, labels), abs=1e-12)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30)
def test_modularity_relabel_invariant(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 30, 0.3)
    labels = rng.integers(0, 5, 30)
    perm = rng.permutation(5) + 100
    assert modularity(g, labels) == pytest.approx(modularity(g, perm[labels]), abs=1e-15)
    assert modularity(g, labels) < 1


def test_contingency_examples():
    t = contingency([0, 0, 1], [0, 1, 1])
    assert t.counts.tolist() == [[1, 1], [0, 1]]
    assert contingency([0, 0], [0, 0]).counts.tolist() == [[2]]
    with pytest.raises(ValueError):
        contingency([], [])
    with pytest.raises(ValueError):
        contingency([0, 1], [0])


def test_contingency_margins():
    rng = np.random.default_rng(5)
    a, b = rng.integers(0, 4, 100), rng.integers(0, 3, 100)
    t = contingency(a, b)
    assert t.total == 100
    assert t.counts.sum(axis=1).tolist() == np.bincount(a).tolist()
    assert t.counts.sum(axis=0).tolist() == np.bincount(b).tolist()


def test_nmi_examples():
    assert nmi([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0
    assert nmi([0, 0, 0, 0], [0, 0, 1, 1]) == 0.0
    assert nmi([0, 0, 1, 1], [1, 1, 0, 0]) == 1.0
    assert nmi([3, 3, 3], [7, 7, 7]) == 1.0
    with pytest.raises(ValueError):
        nmi([0, 1], [0, 1, 1])


def test_nmi_reference_value():
    # hand-evaluated: a=[0,0,1,1], b=[0,0,0,1]
    # H(a)=ln2, H(b)=-(3/4 ln 3/4 + 1/4 ln 1/4), I = H(b) - H(b|a) = H(b) - (1/2) ln 2
    hb = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    mi = hb - 0.5 * math.log(2)
    expected = 2 * mi / (math.log(2) + hb)
    assert nmi([0, 0, 1, 1], [0, 0, 0, 1]) == pytest.approx(expected, rel=1e-14)


def test_nmi_accepts_string_labels():
    assert nmi(["a", "a", "b"], ["x", "x", "y"]) == 1.0


def test_entropy():
    assert entropy(np.array([5, 5])) == pytest.approx(math.log(2))
    assert entropy(np.array([4, 0])) == 0.0


labelings = st.lists(st.integers(0, 5), min_size=1, max_size=60)


@given(st.data())
def test_nmi_symmetric_and_bounded(data):
    a = data.draw(labelings)
    b = data.draw(st.lists(st.integers(0, 5), min_size=len(a), max_size=len(a)))
    v = nmi(a, b)
    assert 0.0 <= v <= 1.0
    assert v == pytest.approx(nmi(b, a), abs=1e-15)


@given(labelings.filter(lambda x: len(set(x)) >= 2))
def test_nmi_self_is_one(a):
    assert nmi(a, a) == pytest.approx(1.0, abs=1e-12)


def test_nmi_independent_labelings_small():
    rng = np.random.default_rng(11)
    a, b = rng.integers(0, 4, 10_000), rng.integers(0, 4, 10_000)
    assert nmi(a, b) < 0.05
