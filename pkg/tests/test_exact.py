from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from apgraph.exact import (
    APWitness,
    NumberSet,
    PairGraph,
    as_rational,
    count_k_aps,
    difference_set_along_graph,
    doubling_ratio,
    iterated_sumset,
    make_number_set,
    sumset,
    sumset_along_graph,
)

from oracles import aps_by_subsets, aps_in_interval

small_sets = st.sets(st.integers(-30, 30), min_size=1, max_size=12)


def test_make_number_set_dedupes_and_sorts():
    A = make_number_set([3, 1, 2, 1])
    assert list(A) == [1, 2, 3] and len(A) == 3
    assert len(make_number_set([])) == 0
    assert list(make_number_set([F(1, 2), F(1, 3)])) == [F(1, 3), F(1, 2)]


def test_rationals_are_exact():
    assert as_rational("6/4") == F(3, 2)
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(ValueError):
        as_rational("0.5")


def test_scaled_clears_denominators():
    A = NumberSet([F(1, 2), F(1, 3), 2])
    L, ints = A.scaled()
    assert L == 6 and ints == (2, 3, 12)


def test_pair_graph_validation():
    with pytest.raises(ValueError):
        PairGraph.from_pairs(3, [(0, 3)])
    with pytest.raises(ValueError):
        PairGraph.from_pairs(3, [(1, 1)])
    G = PairGraph.from_pairs(3, [(2, 0), (0, 2), (1, 1)], allow_loops=True)
    assert G.sorted_pairs() == [(0, 2), (1, 1)]
    assert (G.edge_count, G.loop_count, G.pair_count) == (1, 1, 2)


def test_sumset_along_graph_examples():
    A = NumberSet([0, 1, 2])
    assert list(sumset_along_graph(A, PairGraph.from_pairs(3, [(0, 1), (1, 2)]))) == [1, 3]
    assert list(sumset_along_graph(A, PairGraph.complete(3))) == [1, 2, 3]
    assert list(sumset_along_graph(NumberSet([5]), PairGraph.complete(1, loops=True))) == [10]
    with pytest.raises(ValueError):
        sumset_along_graph(A, PairGraph.complete(2))


def test_difference_set_along_graph_examples():
    A = NumberSet([0, 1, 2])
    assert list(difference_set_along_graph(A, PairGraph.from_pairs(3, [(0, 2)]))) == [-2, 2]
    assert list(difference_set_along_graph(A, PairGraph.complete(3))) == [-2, -1, 1, 2]
    assert len(difference_set_along_graph(A, PairGraph(3))) == 0


def test_iterated_sumset_examples():
    assert list(iterated_sumset(NumberSet([0, 1]), 2, 1)) == [-1, 0, 1, 2]
    for m in (1, 5, 9):
        assert len(iterated_sumset(NumberSet(range(m)), 1, 1)) == 2 * m - 1
    assert list(iterated_sumset(NumberSet([7]), 3, 2)) == [7]
    assert list(iterated_sumset(NumberSet([4, 9]), 0, 0)) == [0]
    with pytest.raises(ValueError):
        iterated_sumset(NumberSet(), 1, 0)


def test_count_k_aps_examples():
    count, ws = count_k_aps(NumberSet(range(5)), 3)
    assert count == 4
    assert sorted(w.difference for w in ws) == [1, 1, 1, 2]
    assert count_k_aps(NumberSet(range(4)), 4)[0] == 1
    assert count_k_aps(NumberSet([0, 1, 3]), 3) == (0, [])
    with pytest.raises(ValueError):
        count_k_aps(NumberSet(range(4)), 2)


def test_count_k_aps_witnesses_are_lexicographic():
    _, ws = count_k_aps(NumberSet([0, 1, 2, 3, 4, 6, 8]), 3)
    assert ws == sorted(ws)
    assert all(w.difference > 0 for w in ws)


def test_doubling_ratio_examples():
    A = NumberSet(range(10))
    assert doubling_ratio(A, A) == F(19, 10)
    B = NumberSet([0, 1, 2, 4, 8])
    assert len(sumset(B, B)) == 12 and doubling_ratio(B, B) == F(12, 5)
    assert doubling_ratio(NumberSet([0]), NumberSet([0])) == 1
    with pytest.raises(ValueError):
        doubling_ratio(NumberSet(), A)


def test_ap_witness_canonical():
    w = APWitness.from_terms([4, 0, 2])
    assert w.terms == (0, 2, 4) and w.difference == 2
    with pytest.raises(ValueError):
        APWitness.from_terms([0, 1, 3])


@pytest.mark.parametrize("k", [3, 4, 5])
def test_count_k_aps_on_intervals_matches_closed_form(k):
    for n in range(0, 31):
        assert count_k_aps(NumberSet(range(n)), k)[0] == aps_in_interval(n, k)


@settings(max_examples=60, deadline=None)
@given(small_sets, st.integers(3, 5))
def test_count_k_aps_matches_subset_scan(values, k):
    count, ws = count_k_aps(NumberSet(values), k)
    assert [w.terms for w in ws] == aps_by_subsets(values, k)
    assert count == len(ws)


@settings(max_examples=60, deadline=None)
@given(small_sets)
def test_complete_with_loops_gives_full_sumset(values):
    A = NumberSet(values)
    G = PairGraph.complete(len(A), loops=True)
    assert sumset_along_graph(A, G) == sumset(A, A)


@settings(max_examples=60, deadline=None)
@given(small_sets, st.data())
def test_sumset_along_graph_size_bounds(values, data):
    A = NumberSet(values)
    n = len(A)
    all_pairs = [(i, j) for i in range(n) for j in range(i, n)]
    chosen = data.draw(st.lists(st.sampled_from(all_pairs), unique=True)) if all_pairs else []
    G = PairGraph.from_pairs(n, chosen, allow_loops=True)
    S = sumset_along_graph(A, G)
    assert len(S) <= G.edge_count + G.loop_count
    assert len(S) <= len(sumset(A, A))
    D = difference_set_along_graph(A, G)
    assert all(-t in D for t in D)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(-6, 6), min_size=1, max_size=5), st.integers(0, 3), st.integers(0, 3))
def test_iterated_sumset_symmetry_and_monotonicity(values, k, l):
    B = NumberSet(values)
    assert iterated_sumset(B, k, l) == iterated_sumset(B, l, k).negated()
    size = len(iterated_sumset(B, k, l))
    assert len(iterated_sumset(B, k + 1, l)) >= size
    assert len(iterated_sumset(B, k, l + 1)) >= size
