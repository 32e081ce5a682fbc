import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfdmolso.ranking import (
    constrained_dominates,
    crowding_degree,
    crowding_threshold,
    dominance_matrix,
    dominates,
    first_front,
    fronts_from_ranks,
    non_dominated_sort,
    trim_by_crowding,
)


def brute_ranks(F):
    """Peel fronts with explicit pairwise loops."""
    n = len(F)
    ranks = np.zeros(n, dtype=int)
    remaining = set(range(n))
    level = 1
    while remaining:
        front = [i for i in remaining
                 if not any(np.all(F[j] <= F[i]) and np.any(F[j] < F[i]) for j in remaining if j != i)]
        for i in front:
            ranks[i] = level
        remaining -= set(front)
        level += 1
    return ranks


def test_dominates_examples():
    assert dominates((1, 2), (2, 3))
    assert not dominates((1, 2), (1, 2))
    assert not dominates((1, 3), (3, 1)) and not dominates((3, 1), (1, 3))
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))


def test_constrained_dominance():
    assert constrained_dominates((5, 5), 0.0, (1, 1), 0.1)
    assert not constrained_dominates((1, 1), 0.1, (5, 5), 0.0)
    assert constrained_dominates((9, 9), 0.1, (1, 1), 0.2)
    dom = dominance_matrix(np.array([[5.0, 5.0], [1.0, 1.0]]), np.array([0.0, 0.3]))
    assert dom[0, 1] and not dom[1, 0]


def test_sort_examples():
    F = np.array([[1, 2], [2, 1], [3, 3], [0.5, 4]])
    np.testing.assert_array_equal(non_dominated_sort(F), [1, 1, 2, 1])
    np.testing.assert_array_equal(non_dominated_sort(np.ones((5, 3))), np.ones(5))
    np.testing.assert_array_equal(first_front(F), [0, 1, 3])
    fronts = fronts_from_ranks(non_dominated_sort(F))
    assert [list(f) for f in fronts] == [[0, 1, 3], [2]]


def test_sort_matches_oracle_200(rng):
    F = rng.random((200, 2))
    np.testing.assert_array_equal(non_dominated_sort(F), brute_ranks(F))


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 500), st.integers(2, 4), st.integers(0, 2**32 - 1), st.booleans())
def test_sort_oracle_equivalence(n, M, seed, discrete):
    rng = np.random.default_rng(seed)
    F = rng.integers(0, 6, (n, M)).astype(float) if discrete else rng.random((n, M))
    ranks = non_dominated_sort(F)
    dom = dominance_matrix(F)
    # oracle check without the cubic peel: level-1 members are undominated,
    # and every member at level k > 1 has a dominator at level k - 1 and none at k or deeper
    for i in range(n):
        doms = np.flatnonzero(dom[:, i])
        if ranks[i] == 1:
            assert doms.size == 0
        else:
            assert np.any(ranks[doms] == ranks[i] - 1)
            assert np.all(ranks[doms] < ranks[i])
    if n <= 120:
        np.testing.assert_array_equal(ranks, brute_ranks(F))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sort_permutation_invariant(seed):
    rng = np.random.default_rng(seed)
    F = rng.integers(0, 4, (40, 3)).astype(float)
    perm = rng.permutation(40)
    np.testing.assert_array_equal(non_dominated_sort(F)[perm], non_dominated_sort(F[perm]))


def test_crowding_examples():
    X = np.array([[0.0], [1.0], [3.0]])
    F = np.array([[0.0, 3.0], [1.0, 2.0], [2.0, 1.0]])
    C = crowding_degree(X, F)
    assert np.isinf(C[0]) and np.isinf(C[2]) and C[1] == 3.0
    X = np.array([[0.4, 0.4], [0.1, 0.9], [0.4, 0.4]])
    assert crowding_degree(X, F)[1] == 0.0
    assert crowding_degree(X, F, space="objective")[1] == pytest.approx(np.hypot(2, 2))


def test_crowding_vs_direct_norms(rng):
    X = rng.random((50, 4))
    F = rng.random((50, 2))
    C = crowding_degree(X, F, sort_objective_index=1)
    order = np.argsort(F[:, 1], kind="stable")
    for k in range(1, 49):
        i = order[k]
        assert C[i] == pytest.approx(np.sqrt(np.sum((X[order[k + 1]] - X[order[k - 1]]) ** 2)))


def test_threshold():
    assert crowding_threshold([1, 3]) == 2
    C = np.full(4, 2.5)
    assert crowding_threshold(C) == 2.5 and not np.any(C < crowding_threshold(C))
    assert crowding_threshold([np.inf, 1, 2, np.inf]) == 1.5
    assert crowding_threshold([np.inf]) == np.inf


def test_trim_by_crowding_removes_middle():
    X = np.array([[0.0], [0.45], [0.5], [1.0]])
    F = np.column_stack([X[:, 0], 1 - X[:, 0]])
    np.testing.assert_array_equal(trim_by_crowding(X, F, 3), [0, 2, 3])
