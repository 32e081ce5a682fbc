import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfdmolso.problems import Problem, make_problem
from mfdmolso.swarm import (
    Lion,
    Role,
    SwarmConfig,
    SwarmConfigError,
    apply_bounds,
    chaotic_positions,
    g_bar,
    init_population,
    partition_roles,
    personal_best_mask,
    regulatory_factor,
    step_factors,
    tent_next,
    tent_sequence,
    update_cub,
    update_king,
    update_lioness,
    update_personal_best,
)


def box(lo, hi, D):
    return Problem("box", D, 2, np.full(D, lo), np.full(D, hi), False, lambda X, t: np.column_stack([X[:, 0], -X[:, 0]]))


# ------------------------------------------------------------------ tent map


def test_tent_branches():
    assert tent_next(0.3, 0.7) == pytest.approx(0.3 / 0.7)
    assert tent_next(0.91, 0.7) == pytest.approx(0.3)
    with pytest.raises(SwarmConfigError):
        tent_next(0.2, 0.5)


def test_tent_histogram_covers_all_bins(rng):
    seq = tent_sequence(100_000, 0.7, rng)
    counts, _ = np.histogram(seq, bins=100, range=(0.0, 1.0))
    assert counts.min() > 0
    assert np.all((seq > 0) & (seq < 1))


def test_chaotic_positions_affine():
    rng = np.random.default_rng(1)
    X = chaotic_positions(box(0.0, 10.0, 1), 100, 0.7, rng)
    assert X.min() >= 0 and X.max() <= 10
    # chaos value 0.5 on [-5, 5] maps to 0
    p = box(-5.0, 5.0, 1)
    assert (p.lower + 0.5 * p.span)[0] == 0.0


def test_init_population_bin_coverage():
    p = make_problem("zdt1", 10)
    sw = init_population(p, SwarmConfig(population_size=500, max_iterations=10), 7)
    for d in range(10):
        counts, _ = np.histogram(sw.x[:, d], bins=20, range=(0.0, 1.0))
        assert counts.min() > 0
    np.testing.assert_array_equal(sw.pbest_x, sw.x)


# --------------------------------------------------------------------- roles


@pytest.mark.parametrize("N,beta,counts", [(10, 0.4, (1, 3, 6)), (4, 0.5, (1, 1, 2)), (120, 0.2, (1, 23, 96))])
def test_partition_counts(N, beta, counts):
    roles = partition_roles(N, beta, king=2)
    assert roles[2] == Role.KING
    got = tuple(int(np.sum(roles == r)) for r in (Role.KING, Role.LIONESS, Role.CUB))
    assert got == counts


def test_partition_rejects_zero_ratio():
    with pytest.raises(SwarmConfigError):
        partition_roles(10, 0.0, 0)


def test_partition_uses_order():
    roles = partition_roles(10, 0.4, king=5, order=np.array([5, 9, 8, 7, 0, 1, 2, 3, 4, 6]))
    assert set(np.flatnonzero(roles == Role.LIONESS)) == {9, 8, 7}


# ----------------------------------------------------------------- role moves


def test_king_examples():
    g = np.array([0.3, 0.6])
    p = np.array([0.5, 0.1])
    np.testing.assert_allclose(update_king(g, p, gamma=0.0), g)
    np.testing.assert_allclose(update_king(g, g, gamma=3.7), g)
    assert update_king(np.array([1.0]), np.array([2.0]), gamma=0.5)[0] == pytest.approx(1.5)


def test_king_zero_coordinate_stays_zero(rng):
    g = np.array([0.0, 0.5])
    out = update_king(g, np.array([0.4, 0.4]), rng=rng)
    assert out[0] == 0.0


def test_lioness_examples():
    p, c = np.array([0.2, 0.4]), np.array([0.6, 0.8])
    np.testing.assert_allclose(update_lioness(p, c, 0.3, gamma=0.0), (p + c) / 2)
    np.testing.assert_allclose(update_lioness(p, p, 0.3, gamma=0.0), p)
    np.testing.assert_allclose(update_lioness(p, c, 0.0, gamma=5.0), (p + c) / 2)


def test_cub_branches():
    p, g, pm, gb = np.array([0.2, 0.2]), np.array([0.6, 0.4]), np.array([0.9, 0.9]), np.array([0.1, 0.0])
    np.testing.assert_allclose(update_cub(p, g, pm, gb, 0.1, 0, 10, gamma=0.0, q=0.0), (g + p) / 2)
    # eta(0) = 1/3: q = 0.3 picks the lioness, q = 0.5 the opposite point
    np.testing.assert_allclose(update_cub(p, g, pm, gb, 0.1, 0, 10, gamma=0.0, q=0.3), (pm + p) / 2)
    np.testing.assert_allclose(update_cub(p, g, pm, gb, 0.1, 0, 10, gamma=0.0, q=0.5), (gb + p) / 2)
    # at t = T every q <= 1 = eta, so no cub goes to gbar
    q = np.linspace(0, 1, 11)
    P = np.tile(p, (11, 1))
    out = update_cub(P, g, pm, gb, 0.1, 10, 10, gamma=0.0, q=q)
    assert not np.any(np.all(np.isclose(out, (gb + p) / 2), axis=1))


def test_regulatory_factor():
    assert regulatory_factor(0, 30) == pytest.approx(1 / 3)
    assert regulatory_factor(30, 30) == pytest.approx(1.0)


def test_g_bar(rng):
    assert g_bar(0.0, 10.0, 3.0) == 7.0
    np.testing.assert_allclose(g_bar(0.0, 10.0, 5.0), 5.0)
    low, high, g = rng.random(3), rng.random(3) + 1, rng.random(3)
    np.testing.assert_allclose(g_bar(low, high, g), [low[i] + high[i] - g[i] for i in range(3)])


def test_step_factors(rng):
    step = np.array([0.1, 0.2])
    af, ac = step_factors(0, 50, step, rng, n_cubs=4)
    np.testing.assert_allclose(af, step)
    np.testing.assert_allclose(ac, np.tile(step, (4, 1)))
    af, ac = step_factors(50, 50, step, rng, n_cubs=1000)
    np.testing.assert_allclose(af, step * math.exp(-30), rtol=1e-12)
    assert af[0] == pytest.approx(0.1 * 9.357623e-14, rel=1e-6)
    linear = np.all(ac == 0.0, axis=1)
    assert 0 < linear.sum() < 1000


def test_cub_linear_branch_frequency():
    rng = np.random.default_rng(3)
    _, ac = step_factors(10, 20, 1.0, rng, n_cubs=100_000)
    freq = np.mean(ac[:, 0] == 0.5)
    assert abs(freq - 0.7) < 0.01


def test_apply_bounds():
    lo, hi = np.zeros(2), np.ones(2)
    X = np.array([[-0.25, 1.5]])
    np.testing.assert_allclose(apply_bounds(X, lo, hi), [[0.0, 1.0]])
    np.testing.assert_allclose(apply_bounds(X, lo, hi, "reflect"), [[0.25, 0.5]])
    with pytest.raises(ValueError):
        apply_bounds(X, lo, hi, "wrap")


def test_bounce_lands_between_origin_and_bound(rng):
    lo, hi = np.zeros(2), np.ones(2)
    origin = np.tile([0.4, 0.7], (500, 1))
    X = np.tile([-0.3, 1.8], (500, 1))
    out = apply_bounds(X, lo, hi, "bounce", origin=origin, rng=rng)
    assert np.all((out[:, 0] > 0) & (out[:, 0] <= 0.4))
    assert np.all((out[:, 1] >= 0.7) & (out[:, 1] < 1))
    inside = np.full((1, 2), 0.5)
    np.testing.assert_array_equal(apply_bounds(inside, lo, hi, "bounce", origin=inside, rng=rng), inside)
    with pytest.raises(ValueError):
        apply_bounds(X, lo, hi, "bounce")


# --------------------------------------------------------------- personal best


def lion(pf):
    x = np.zeros(2)
    return Lion(x, np.array(pf, float), x.copy(), np.array(pf, float), Role.CUB)


def test_personal_best_rules(rng):
    out = update_personal_best(lion([2, 2]), np.ones(2), np.array([1.0, 1.0]), rng)
    np.testing.assert_array_equal(out.personal_best_objectives, [1, 1])
    out = update_personal_best(lion([1, 1]), np.ones(2), np.array([2.0, 2.0]), rng)
    np.testing.assert_array_equal(out.personal_best_objectives, [1, 1])
    np.testing.assert_array_equal(out.objectives, [2, 2])


def test_personal_best_coin_frequency():
    rng = np.random.default_rng(11)
    n = 20_000
    mask = personal_best_mask(np.tile([3.0, 1.0], (n, 1)), np.zeros(n), np.tile([1.0, 3.0], (n, 1)), np.zeros(n), rng)
    assert abs(mask.mean() - 0.5) < 0.02


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_positions_stay_in_bounds_after_moves(seed):
    rng = np.random.default_rng(seed)
    lo, hi = np.zeros(4), np.ones(4)
    P = rng.random((8, 4))
    g = rng.random(4)
    for out in (
        update_king(g, P, rng, lo, hi),
        update_lioness(P, P[::-1], 0.1, rng, lo, hi),
        update_cub(P, g, P[::-1], g_bar(lo, hi, g), 0.1, 3, 10, rng, lo, hi),
    ):
        assert np.all((out >= lo) & (out <= hi))
