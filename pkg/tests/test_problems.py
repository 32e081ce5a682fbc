import numpy as np
import pytest

from mfdmolso.problems import (
    PROBLEM_NAMES,
    EnvironmentClock,
    ProblemError,
    dmop1_exponent,
    g2_optimum,
    make_problem,
    sample_true_pf,
    write_front_csv,
    zdt3_segments,
)
from mfdmolso.ranking import first_front

# non-dominated f1 intervals of the ZDT3 curve (literature values, 10 digits)
ZDT3_SEGMENTS = [
    (0.0, 0.0830015349),
    (0.1822287280, 0.2577623634),
    (0.4093136748, 0.4538821041),
    (0.6183967944, 0.6525117038),
    (0.8233317983, 0.8518328654),
]


def test_registry_and_bad_input():
    assert {"zdt1", "zdt2", "zdt3", "dtlz1", "dtlz2", "dtlz3", "dmop1", "robot"} <= set(PROBLEM_NAMES)
    with pytest.raises(ProblemError):
        make_problem("zdt1", 0)
    with pytest.raises(ProblemError):
        make_problem("nope", 5)
    p = make_problem("zdt1", 5)
    with pytest.raises(ProblemError):
        p.evaluate(np.full(4, 0.5))
    with pytest.raises(ProblemError):
        p.evaluate(np.full(5, 1.5))


@pytest.mark.parametrize("v", [0.0, 0.25, 0.64, 1.0])
def test_zdt1_on_pareto_set(v):
    x = np.zeros(30)
    x[0] = v
    np.testing.assert_allclose(make_problem("zdt1", 30).evaluate(x), [v, 1 - np.sqrt(v)], atol=1e-15)


def test_dtlz2_distance_at_half_gives_unit_norm(rng):
    p = make_problem("dtlz2", 10)
    X = rng.random((50, 10))
    X[:, 2:] = 0.5
    F = p.evaluate(X)
    np.testing.assert_allclose(np.linalg.norm(F, axis=1), 1.0, atol=1e-12)


def test_dtlz1_on_front_sums_to_half(rng):
    X = rng.random((50, 10))
    X[:, 2:] = 0.5
    F = make_problem("dtlz1", 10).evaluate(X)
    np.testing.assert_allclose(F.sum(axis=1), 0.5, atol=1e-12)


def test_static_problems_ignore_time(rng):
    p = make_problem("zdt2", 10)
    x = rng.random((5, 10))
    c0 = EnvironmentClock(initial_time=0.0)
    c3 = EnvironmentClock(initial_time=3.0)
    np.testing.assert_array_equal(p.evaluate(x, c0), p.evaluate(x, c3))


def test_dmop1_changes_with_time():
    p = make_problem("dmop1", 10)
    x = np.full(10, 0.3)
    f0 = p.evaluate(x, EnvironmentClock(initial_time=0.0))
    f1 = p.evaluate(x, EnvironmentClock(initial_time=1.0))
    assert f0[0] == f1[0]
    assert not np.isclose(f0[1], f1[1])
    # frozen: H(0) = 1.25, H(1) = 2.0
    assert dmop1_exponent(0.0) == pytest.approx(1.25)
    assert dmop1_exponent(1.0) == pytest.approx(2.0)


def test_g2_optimum_moves():
    assert g2_optimum(0.0) == 0.0
    assert g2_optimum(1.0) == pytest.approx(1.0)
    p = make_problem("g2", 5)
    x = np.zeros(5)
    x[0] = 0.25
    x[1:] = g2_optimum(1.0)
    np.testing.assert_allclose(p.evaluate(x, EnvironmentClock(initial_time=1.0)), [0.25, 0.5])


def test_zdt1_front_three_points():
    F = sample_true_pf(make_problem("zdt1", 30), n=3)
    np.testing.assert_allclose(F, [[0, 1], [0.5, 1 - np.sqrt(0.5)], [1, 0]])


def test_zdt3_front_only_in_segments():
    F = sample_true_pf(make_problem("zdt3", 10), n=2000)
    inside = np.zeros(len(F), dtype=bool)
    for lo, hi in ZDT3_SEGMENTS:
        inside |= (F[:, 0] >= lo - 1e-6) & (F[:, 0] <= hi + 1e-6)
    assert inside.all()
    assert len(first_front(F)) == len(F)


def test_zdt3_segments_match_frozen():
    segs = zdt3_segments(200_001)
    assert len(segs) == 5
    np.testing.assert_allclose(np.array(segs), np.array(ZDT3_SEGMENTS), atol=1e-5)


def test_dmop1_front_depends_on_time():
    p = make_problem("dmop1", 10)
    a = sample_true_pf(p, EnvironmentClock(initial_time=0.0), 11)
    b = sample_true_pf(p, EnvironmentClock(initial_time=1.0), 11)
    np.testing.assert_allclose(b[:, 1], 1 - b[:, 0] ** 2)
    np.testing.assert_allclose(a[:, 1], 1 - a[:, 0] ** 1.25)


@pytest.mark.parametrize("name", ["dtlz1", "dtlz2", "dtlz3"])
def test_dtlz_front_sampler(name):
    F = sample_true_pf(make_problem(name, 10), n=500)
    assert len(F) >= 500
    if name == "dtlz1":
        np.testing.assert_allclose(F.sum(axis=1), 0.5, atol=1e-12)
    else:
        np.testing.assert_allclose(np.linalg.norm(F, axis=1), 1.0, atol=1e-12)


def test_clock_schedule():
    c = EnvironmentClock.stepped([0, 1, 2], 100)
    assert c.time_value == 0
    assert c.next_change() == 100
    assert not c.advance(99)
    assert c.advance(1)
    assert c.time_value == 1
    c.advance(500)
    assert c.time_value == 2 and c.next_change() is None


def test_front_csv(tmp_path):
    path = tmp_path / "pf.csv"
    write_front_csv(np.array([[0.0, 1.0], [1.0, 0.0]]), path)
    assert path.read_text().splitlines()[0] == "f1,f2"
