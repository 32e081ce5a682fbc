import numpy as np
import pytest
import sympy as sp

from mfdmolso.robot import (
    MAX_ACCELERATION,
    DHTable,
    TrajectoryCoefficients,
    TrajectoryError,
    WaypointSet,
    constraint_residuals,
    dh_transform,
    evaluate_durations,
    forward_kinematics,
    make_robot_problem,
    profile,
    robot_fitness,
    solve_353,
    solve_353_batch,
    write_trajectory_csv,
)

WP = WaypointSet()


def test_fk_matches_first_target():
    pose = forward_kinematics(DHTable(), WP.angles[0])
    np.testing.assert_allclose(pose[:3, 3], [740.0, 487.0, 185.0], atol=5.0)


def test_fk_translation_chain():
    rows = np.array([[10.0, 0, 1.0, 0], [20.0, 0, 2.0, 0], [30.0, 0, 3.0, 0],
                     [40.0, 0, 4.0, 0], [50.0, 0, 5.0, 0], [60.0, 0, 6.0, 0]])
    pose = forward_kinematics(DHTable(rows), np.zeros(6))
    np.testing.assert_allclose(pose[:3, 3], [210.0, 0.0, 21.0])
    np.testing.assert_allclose(pose[:3, :3], np.eye(3))


def test_fk_orthonormal(rng):
    R = forward_kinematics(DHTable(), rng.uniform(-180, 180, 6))[:3, :3]
    np.testing.assert_allclose(R.T @ R, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
    T = dh_transform(0.0, 0.0, 0.0, 90.0)
    np.testing.assert_allclose(T[:2, :2], [[0, -1], [1, 0]], atol=1e-15)


def test_residuals_1000_random_triples():
    rng = np.random.default_rng(2024)
    tau = rng.uniform(0.1, 3.5, (1000, 3))
    C = solve_353_batch(WP, tau)
    worst = 0.0
    for c, t in zip(C, tau):
        worst = max(worst, np.abs(constraint_residuals(TrajectoryCoefficients(c, t), WP)).max())
    assert worst < 1e-9


def test_flat_waypoints_give_flat_path():
    flat = WaypointSet(np.full((4, 6), 12.5))
    prof = profile(solve_353(flat, (1.0, 2.0, 1.5)), 0.05)
    np.testing.assert_allclose(prof.position, 12.5, atol=1e-10)
    assert prof.max_abs_velocity < 1e-10


def symbolic_joint(p, t1, t2, t3):
    """Exact coefficients of one joint by symbolic elimination."""
    t = sp.symbols("t")
    a = sp.symbols("a10:14")
    b = sp.symbols("a20:26")
    c = sp.symbols("a30:34")
    s1 = sum(a[k] * t**k for k in range(4))
    s2 = sum(b[k] * t**k for k in range(6))
    s3 = sum(c[k] * t**k for k in range(4))
    d = lambda e, n: sp.diff(e, t, n)
    at = lambda e, v: e.subs(t, v)
    eqs = [
        at(s1, 0) - p[0], at(s1, t1) - p[1], at(s2, 0) - p[1], at(s2, t2) - p[2],
        at(s3, 0) - p[2], at(s3, t3) - p[3],
        at(d(s1, 1), 0), at(d(s1, 1), t1) - at(d(s2, 1), 0), at(d(s2, 1), t2) - at(d(s3, 1), 0), at(d(s3, 1), t3),
        at(d(s1, 2), 0), at(d(s1, 2), t1) - at(d(s2, 2), 0), at(d(s2, 2), t2) - at(d(s3, 2), 0), at(d(s3, 2), t3),
    ]
    unknowns = list(a) + list(b) + list(c)
    sol = sp.solve(eqs, unknowns, dict=True)[0]
    return np.array([float(sol[u]) for u in unknowns])


def test_joint_against_symbolic_elimination():
    j = 0
    p = [sp.Rational(int(v)) for v in WP.angles[:, j]]
    exact = symbolic_joint(p, 1, 1, 1)
    np.testing.assert_allclose(solve_353(WP, (1.0, 1.0, 1.0)).coeffs[:, j], exact, atol=1e-9)


def test_profile_properties():
    coeffs = solve_353(WP, (2.9, 2.6, 2.8))
    prof = profile(coeffs, 0.01)
    np.testing.assert_allclose(prof.velocity[[0, -1]], 0.0, atol=1e-9)
    assert prof.junction_residuals.max() < 1e-6
    assert prof.total_time == pytest.approx(8.3)
    dense = profile(coeffs, 1e-4)
    assert prof.max_abs_acceleration == pytest.approx(np.abs(dense.acceleration).max(), rel=1e-3)
    assert prof.max_abs_velocity == pytest.approx(np.abs(dense.velocity).max(), rel=1e-3)
    with pytest.raises(ValueError):
        profile(coeffs, 0.0)


def test_fitness():
    total, acc, feasible = robot_fitness((3.5, 3.5, 3.5))
    assert total == 10.5 and feasible and acc < MAX_ACCELERATION
    assert not robot_fitness((0.3, 0.3, 0.3))[2]
    with pytest.raises(TrajectoryError):
        robot_fitness((0.0, 1.0, 1.0))
    with pytest.raises(TrajectoryError):
        robot_fitness((1.0, 1.0, 3.6))


def test_problem_wrapper(rng):
    p = make_robot_problem()
    X = rng.uniform(0.5, 3.5, (20, 3))
    F = p.evaluate(X)
    total, amax, vmax = evaluate_durations(X)
    np.testing.assert_allclose(F, np.column_stack([total, amax]))
    np.testing.assert_array_equal(p.violation(X) == 0, (amax <= 60) & (vmax <= 100))


def test_trajectory_csv(tmp_path):
    prof = profile(solve_353(WP, (3.0, 3.0, 3.0)), 0.5)
    path = tmp_path / "t.csv"
    write_trajectory_csv(prof, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "time_s,joint,position_deg,velocity_degps,acceleration_degps2"
    assert len(lines) == 1 + 6 * len(prof.time)
