import numpy as np
import pytest

from mfdmolso.metrics import (
    MetricError,
    error_rate,
    generational_distance,
    nearest_distances,
    report,
    set_coverage,
    spread_delta,
)

PF = np.column_stack([np.linspace(0, 1, 101), 1 - np.linspace(0, 1, 101)])


def test_gd_examples():
    assert generational_distance(PF[::10], PF) == 0.0
    assert generational_distance(np.array([[0.0, 2.0]]), np.array([[0.0, 1.0]])) == 1.0


def test_gd_vs_brute_force(rng):
    known = rng.random((20, 2))
    ref = rng.random((300, 2))
    d = np.array([min(np.sqrt(np.sum((k - r) ** 2)) for r in ref) for k in known])
    np.testing.assert_allclose(nearest_distances(known, ref), d)
    assert generational_distance(known, ref) == pytest.approx(np.sqrt(np.sum(d**2)) / 20)
    assert generational_distance(known, ref, p=1) == pytest.approx(d.sum() / 20)


def test_spread_examples():
    line = np.column_stack([np.arange(6.0), np.zeros(6)])
    assert spread_delta(line) == 0.0
    assert spread_delta(np.array([[0.0, 0.0], [1.0, 2.0]])) == 0.0
    with pytest.raises(MetricError):
        spread_delta(np.array([[0.0, 0.0]]))


def test_spread_vs_direct(rng):
    P = rng.random((10, 2))
    d = []
    for i in range(10):
        d.append(min(np.abs(P[i] - P[j]).sum() for j in range(10) if j != i))
    d = np.array(d)
    assert spread_delta(P) == pytest.approx(np.std(d, ddof=1))


def test_error_rate_examples():
    assert error_rate(PF[::7], PF) == 0.0
    assert error_rate(PF[:5] + 1.0, PF) == 1.0
    known = PF[::10].copy()
    known[:3, 1] += 0.05
    assert error_rate(known[:10], PF) == pytest.approx(0.3)
    assert error_rate(PF[:1], PF, mode="front") > 0.9
    with pytest.raises(MetricError):
        error_rate(PF, PF, mode="other")


def test_coverage_examples():
    B = np.array([[1.0, 1.0], [2.0, 0.5]])
    assert set_coverage(B - 0.1, B) == 1.0
    assert set_coverage(B, B) == 0.0
    assert set_coverage(np.array([[0.5, 0.9]]), B) == 0.5


def test_report():
    r = report(PF[::10], PF)
    assert r.gd == 0.0 and r.er == 0.0 and r.n_known == 11 and r.reference_size == 101
    assert set(r.as_dict()) == {"gd", "delta", "er", "n_known", "reference_size"}
