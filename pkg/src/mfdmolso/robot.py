"""6R robot application: forward kinematics and 3-5-3 joint trajectories.

A trajectory passes through four joint-space waypoints with a cubic, a
quintic and a cubic segment. Given the three segment durations, the 14
coefficients of every joint follow from one 14x14 linear system (six position,
four velocity and four acceleration conditions) shared by all six joints.

Angles are in degrees, lengths in millimetres, times in seconds.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mfdmolso.problems import Problem

MAX_VELOCITY = 100.0  # deg/s
MAX_ACCELERATION = 60.0  # deg/s^2
MAX_DURATION = 3.5
MIN_DURATION = 0.1

# a (mm), alpha (deg), d (mm), theta offset (deg) per joint
SR1400_DH = np.array([
    [180.0, -90.0, 415.0, 0.0],
    [590.0, 0.0, 0.0, 0.0],
    [115.0, -90.0, 0.0, 0.0],
    [0.0, 90.0, 625.0, 0.0],
    [0.0, -90.0, 0.0, 0.0],
    [0.0, 0.0, 98.0, 0.0],
])

# joint angles (deg) at P1..P4, one row per waypoint
SR1400_WAYPOINTS = np.array([
    [36.0, -45.0, 27.0, -45.0, 36.0, 45.0],
    [18.0, -36.0, -12.0, -25.0, 25.0, 45.0],
    [4.0, -36.0, -12.0, 15.0, 25.0, -78.0],
    [-15.0, -36.0, 15.0, 21.0, 21.0, -81.0],
])

# Cartesian positions (mm) of the four target points
SR1400_TARGETS = np.array([
    [740.0, 487.0, 185.0],
    [1184.0, 366.0, 342.0],
    [1235.0, 88.0, 340.0],
    [960.0, -244.0, 122.0],
])

# unknown layout: a10..a13, a20..a25, a30..a33
SEGMENT_SLICES = (slice(0, 4), slice(4, 10), slice(10, 14))
SEGMENT_ORDERS = (3, 5, 3)


class TrajectoryError(ValueError):
    pass


@dataclass(frozen=True)
class DHTable:
    """Standard Denavit-Hartenberg rows ``(a, alpha, d, theta_offset)``."""

    rows: np.ndarray = field(default_factory=lambda: SR1400_DH.copy())

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=float)
        if rows.shape != (6, 4):
            raise ValueError("a 6R D-H table needs six rows of (a, alpha, d, theta_offset)")
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class WaypointSet:
    angles: np.ndarray = field(default_factory=lambda: SR1400_WAYPOINTS.copy())

    def __post_init__(self) -> None:
        angles = np.asarray(self.angles, dtype=float)
        if angles.shape != (4, 6):
            raise ValueError("waypoints must be a 4x6 array of joint angles")
        object.__setattr__(self, "angles", angles)


def dh_transform(a: float, alpha_deg: float, d: float, theta_deg: float) -> np.ndarray:
    """Homogeneous transform ``Rz(theta) Tz(d) Tx(a) Rx(alpha)``."""
    th, al = np.radians(theta_deg), np.radians(alpha_deg)
    ct, st, ca, sa = np.cos(th), np.sin(th), np.cos(al), np.sin(al)
    return np.array([
        [ct, -st * ca, st * sa, a * ct],
        [st, ct * ca, -ct * sa, a * st],
        [0.0, sa, ca, d],
        [0.0, 0.0, 0.0, 1.0],
    ])


def forward_kinematics(dh: DHTable, joint_angles: np.ndarray) -> np.ndarray:
    """End-effector pose as a 4x4 homogeneous matrix (position in mm)."""
    q = np.asarray(joint_angles, dtype=float)
    if q.shape != (6,) or not np.all(np.isfinite(q)):
        raise ValueError("need six finite joint angles")
    T = np.eye(4)
    for (a, alpha, d, offset), theta in zip(dh.rows, q):
        T = T @ dh_transform(a, alpha, d, theta + offset)
    return T


# ------------------------------------------------------------------ 3-5-3 solve


def _powers(t: np.ndarray, order: int, deriv: int) -> np.ndarray:
    """Rows ``d^deriv/dt^deriv [1, t, ..., t^order]`` for each ``t``; shape ``(n, order+1)``."""
    t = np.asarray(t, dtype=float)[..., None]
    k = np.arange(order + 1)
    coef = np.ones(order + 1)
    for j in range(deriv):
        coef = coef * (k - j)
    exp = np.maximum(k - deriv, 0)
    return coef * t**exp


def constraint_matrix(durations: np.ndarray) -> np.ndarray:
    """Batched 14x14 boundary-condition matrices, shape ``(n, 14, 14)``."""
    tau = np.atleast_2d(np.asarray(durations, dtype=float))
    n = tau.shape[0]
    t1, t2, t3 = tau[:, 0], tau[:, 1], tau[:, 2]
    zero = np.zeros(n)
    A = np.zeros((n, 14, 14))
    s1, s2, s3 = SEGMENT_SLICES
    # positions
    A[:, 0, s1] = _powers(zero, 3, 0)
    A[:, 1, s1] = _powers(t1, 3, 0)
    A[:, 2, s2] = _powers(zero, 5, 0)
    A[:, 3, s2] = _powers(t2, 5, 0)
    A[:, 4, s3] = _powers(zero, 3, 0)
    A[:, 5, s3] = _powers(t3, 3, 0)
    # velocities: start, two junctions, end
    A[:, 6, s1] = _powers(zero, 3, 1)
    A[:, 7, s1] = _powers(t1, 3, 1)
    A[:, 7, s2] = -_powers(zero, 5, 1)
    A[:, 8, s2] = _powers(t2, 5, 1)
    A[:, 8, s3] = -_powers(zero, 3, 1)
    A[:, 9, s3] = _powers(t3, 3, 1)
    # accelerations
    A[:, 10, s1] = _powers(zero, 3, 2)
    A[:, 11, s1] = _powers(t1, 3, 2)
    A[:, 11, s2] = -_powers(zero, 5, 2)
    A[:, 12, s2] = _powers(t2, 5, 2)
    A[:, 12, s3] = -_powers(zero, 3, 2)
    A[:, 13, s3] = _powers(t3, 3, 2)
    return A


def constraint_rhs(waypoints: WaypointSet) -> np.ndarray:
    """Right-hand sides ``(14, 6)``: waypoint angles in the position rows, zeros elsewhere."""
    P = waypoints.angles
    Q = np.zeros((14, 6))
    Q[0], Q[1], Q[2], Q[3], Q[4], Q[5] = P[0], P[1], P[1], P[2], P[2], P[3]
    return Q


def _check_durations(tau: np.ndarray) -> None:
    if tau.shape[-1] != 3:
        raise TrajectoryError("need three segment durations")
    if np.any(~np.isfinite(tau)) or np.any(tau <= 0.0) or np.any(tau > MAX_DURATION):
        raise TrajectoryError(f"segment durations must lie in (0, {MAX_DURATION}]")


@dataclass(frozen=True)
class TrajectoryCoefficients:
    """Per-joint coefficients; ``coeffs[k, j]`` is unknown ``k`` of joint ``j``.

    Unknowns are ordered ``a10..a13, a20..a25, a30..a33`` (ascending powers).
    """

    coeffs: np.ndarray
    durations: np.ndarray

    def segment(self, s: int) -> np.ndarray:
        """Coefficients of segment ``s`` (0-based), shape ``(order+1, 6)``."""
        return self.coeffs[SEGMENT_SLICES[s]]


def solve_353_batch(waypoints: WaypointSet, durations: np.ndarray) -> np.ndarray:
    """Coefficients for many duration triples at once, shape ``(n, 14, 6)``."""
    tau = np.atleast_2d(np.asarray(durations, dtype=float))
    _check_durations(tau)
    A = constraint_matrix(tau)
    Q = np.broadcast_to(constraint_rhs(waypoints), (len(tau), 14, 6))
    return np.linalg.solve(A, Q)


def solve_353(waypoints: WaypointSet, durations: tuple[float, float, float]) -> TrajectoryCoefficients:
    """Coefficients of the cubic-quintic-cubic trajectory for one duration triple."""
    tau = np.asarray(durations, dtype=float)
    return TrajectoryCoefficients(solve_353_batch(waypoints, tau[None, :])[0], tau.copy())


def constraint_residuals(coeffs: TrajectoryCoefficients, waypoints: WaypointSet) -> np.ndarray:
    """Residuals of all 14 boundary conditions per joint, shape ``(14, 6)``."""
    A = constraint_matrix(coeffs.durations[None, :])[0]
    return A @ coeffs.coeffs - constraint_rhs(waypoints)


# --------------------------------------------------------------------- extrema


def _poly_eval(c: np.ndarray, t: np.ndarray, deriv: int) -> np.ndarray:
    """Evaluate derivative ``deriv`` of ascending-power polynomials ``c`` (..., k+1) at ``t`` (...)."""
    order = c.shape[-1] - 1
    return np.sum(c * _powers(t, order, deriv), axis=-1)


def _quadratic_roots(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Real roots of ``a t^2 + b t + c`` as ``(..., 2)`` with NaN where absent."""
    with np.errstate(invalid="ignore", divide="ignore"):
        disc = b * b - 4.0 * a * c
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        lin = np.abs(a) < 1e-14 * (np.abs(b) + np.abs(c) + 1e-300)
        r1 = np.where(lin, -c / b, (-b + sq) / (2.0 * a))
        r2 = np.where(lin, np.nan, (-b - sq) / (2.0 * a))
    return np.stack([r1, r2], axis=-1)


def _cubic_roots(c: np.ndarray) -> np.ndarray:
    """Real roots of ascending cubics ``c`` (..., 4) as ``(..., 3)`` with NaN where absent."""
    shape = c.shape[:-1]
    flat = c.reshape(-1, 4)
    out = np.full((flat.shape[0], 3), np.nan)
    lead = flat[:, 3]
    scale = np.max(np.abs(flat), axis=1)
    cubic = np.abs(lead) > 1e-12 * np.maximum(scale, 1e-300)
    if cubic.any():
        cc = flat[cubic] / lead[cubic, None]
        comp = np.zeros((cc.shape[0], 3, 3))
        comp[:, 1, 0] = 1.0
        comp[:, 2, 1] = 1.0
        comp[:, :, 2] = -cc[:, :3]
        ev = np.linalg.eigvals(comp)
        real = np.abs(ev.imag) <= 1e-9 * np.maximum(1.0, np.abs(ev.real))
        out[cubic] = np.where(real, ev.real, np.nan)
    if (~cubic).any():
        q = flat[~cubic]
        out[~cubic, :2] = _quadratic_roots(q[:, 2], q[:, 1], q[:, 0])
    return out.reshape(*shape, 3)


def _segment_extreme(c: np.ndarray, T: np.ndarray, deriv: int, critical: np.ndarray) -> np.ndarray:
    """Max of ``|p^(deriv)|`` over ``[0, T]`` from endpoints and interior critical points.

    ``c`` is ``(n, k+1, 6)``; ``critical`` holds candidate times ``(n, 6, r)``.
    """
    cj = np.moveaxis(c, 1, 2)  # (n, 6, k+1)
    Tb = np.broadcast_to(T[:, None], cj.shape[:2])
    ends = np.stack([np.zeros_like(Tb), Tb], axis=-1)
    inside = np.where((critical > 0) & (critical < Tb[..., None]), critical, 0.0)
    cand = np.concatenate([ends, inside], axis=-1)  # (n, 6, r+2)
    vals = _poly_eval(cj[:, :, None, :], cand, deriv)
    return np.max(np.abs(vals), axis=(1, 2))


def kinematic_extremes(coeffs: np.ndarray, durations: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact ``max |velocity|`` and ``max |acceleration|`` over all joints and segments.

    Args:
        coeffs: ``(n, 14, 6)`` coefficient stacks.
        durations: ``(n, 3)`` segment durations.
    """
    tau = np.atleast_2d(durations)
    vmax = np.zeros(len(tau))
    amax = np.zeros(len(tau))
    for s, order in enumerate(SEGMENT_ORDERS):
        c = coeffs[:, SEGMENT_SLICES[s], :]
        T = tau[:, s]
        cj = np.moveaxis(c, 1, 2)  # (n, 6, k+1)
        if order == 3:
            # acceleration is linear: velocity peaks where it vanishes
            with np.errstate(invalid="ignore", divide="ignore"):
                tv = (-2.0 * cj[..., 2] / (6.0 * cj[..., 3]))[..., None]
            ta = np.full(tv.shape, np.nan)
        else:
            acc_poly = np.stack([2 * cj[..., 2], 6 * cj[..., 3], 12 * cj[..., 4], 20 * cj[..., 5]], axis=-1)
            tv = _cubic_roots(acc_poly)
            ta = _quadratic_roots(60.0 * cj[..., 5], 24.0 * cj[..., 4], 6.0 * cj[..., 3])
        tv = np.nan_to_num(tv, nan=-1.0)
        ta = np.nan_to_num(ta, nan=-1.0)
        vmax = np.maximum(vmax, _segment_extreme(c, T, 1, tv))
        amax = np.maximum(amax, _segment_extreme(c, T, 2, ta))
    return vmax, amax


# -------------------------------------------------------------------- profiles


@dataclass
class TrajectoryProfile:
    """Sampled trajectory; arrays are ``(n_samples, 6)`` against ``time``."""

    time: np.ndarray
    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    total_time: float
    max_abs_velocity: float
    max_abs_acceleration: float
    junction_residuals: np.ndarray  # (2, 3): junction x (position, velocity, acceleration)


def _segment_values(seg: np.ndarray, t: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    order = seg.shape[0] - 1
    out = []
    for deriv in range(3):
        out.append(_powers(t, order, deriv) @ seg)
    return out[0], out[1], out[2]


def profile(coeffs: TrajectoryCoefficients, sample_dt: float) -> TrajectoryProfile:
    """Sample position, velocity and acceleration of every joint every ``sample_dt`` seconds."""
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")
    tau = coeffs.durations
    starts = np.concatenate([[0.0], np.cumsum(tau)])
    total = float(starts[-1])
    t = np.arange(0.0, total, sample_dt)
    t = np.append(t, total) if t.size == 0 or t[-1] < total else t
    seg = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, 2)
    pos = np.empty((len(t), 6))
    vel = np.empty((len(t), 6))
    acc = np.empty((len(t), 6))
    for s in range(3):
        mask = seg == s
        p, v, a = _segment_values(coeffs.segment(s), t[mask] - starts[s])
        pos[mask], vel[mask], acc[mask] = p, v, a
    residuals = np.zeros((2, 3))
    for j in range(2):
        end = _segment_values(coeffs.segment(j), np.array([tau[j]]))
        begin = _segment_values(coeffs.segment(j + 1), np.array([0.0]))
        residuals[j] = [np.max(np.abs(e - b)) for e, b in zip(end, begin)]
    vmax, amax = kinematic_extremes(coeffs.coeffs[None], tau[None])
    return TrajectoryProfile(t, pos, vel, acc, total, float(vmax[0]), float(amax[0]), residuals)


def write_trajectory_csv(prof: TrajectoryProfile, path: str | Path) -> None:
    """Long-format CSV: time_s, joint, position_deg, velocity_degps, acceleration_degps2."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s", "joint", "position_deg", "velocity_degps", "acceleration_degps2"])
        for i, ti in enumerate(prof.time):
            for j in range(6):
                writer.writerow([f"{ti:.6f}", j + 1, prof.position[i, j], prof.velocity[i, j], prof.acceleration[i, j]])


# --------------------------------------------------------------------- fitness


def evaluate_durations(durations: np.ndarray, waypoints: WaypointSet | None = None) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total time, max |acceleration| (deg/s^2) and max |velocity| (deg/s) per duration triple."""
    waypoints = waypoints or WaypointSet()
    tau = np.atleast_2d(np.asarray(durations, dtype=float))
    c = solve_353_batch(waypoints, tau)
    vmax, amax = kinematic_extremes(c, tau)
    return tau.sum(axis=1), amax, vmax


def violation(vmax: np.ndarray, amax: np.ndarray) -> np.ndarray:
    """Total normalised excess over the velocity and acceleration limits."""
    return np.maximum(vmax / MAX_VELOCITY - 1.0, 0.0) + np.maximum(amax / MAX_ACCELERATION - 1.0, 0.0)


def robot_fitness(durations: tuple[float, float, float], waypoints: WaypointSet | None = None) -> tuple[float, float, bool]:
    """``(total_time, max_acceleration, feasible)`` for one duration triple."""
    total, amax, vmax = evaluate_durations(np.asarray(durations, dtype=float)[None, :], waypoints)
    feasible = bool(vmax[0] <= MAX_VELOCITY and amax[0] <= MAX_ACCELERATION)
    return float(total[0]), float(amax[0]), feasible


def deg_to_rad(value: float | np.ndarray) -> float | np.ndarray:
    return np.radians(value)


def make_robot_problem(waypoints: WaypointSet | None = None, lower: float = MIN_DURATION) -> Problem:
    """Bi-objective duration problem (total time, max acceleration) with kinematic limits."""
    waypoints = waypoints or WaypointSet()
    cache: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}

    def _both(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        key = X.tobytes()
        hit = cache.get(key)
        if hit is None:
            total, amax, vmax = evaluate_durations(X, waypoints)
            hit = (np.column_stack([total, amax]), violation(vmax, amax))
            cache.clear()
            cache[key] = hit
        return hit

    def objectives(X: np.ndarray, t: float) -> np.ndarray:
        return _both(X)[0]

    def constraint(X: np.ndarray) -> np.ndarray:
        return _both(X)[1]

    return Problem(
        "robot", 3, 2, np.full(3, lower), np.full(3, MAX_DURATION), False,
        objectives, None, constraint,
    )
