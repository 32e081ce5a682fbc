"""Benchmark problems (ZDT1-3, DTLZ1-3, G2, dMOP1) and the environment clock.

All problems are minimisation problems. ``evaluate`` accepts either a single
decision vector of shape ``(D,)`` or a batch of shape ``(n, D)`` and returns
objectives of shape ``(M,)`` or ``(n, M)`` respectively.

Dynamic problems read the environment time ``T`` from an
:class:`EnvironmentClock`; static problems ignore it.
"""

from __future__ import annotations

import csv
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mfdmolso.refpoints import das_dennis

ObjectiveFn = Callable[[np.ndarray, float], np.ndarray]
FrontFn = Callable[[float, int], np.ndarray]
ViolationFn = Callable[[np.ndarray], np.ndarray]

# Default number of points for metric reference fronts.
DEFAULT_PF_POINTS = 10_000

BOUND_TOL = 1e-12


class ProblemError(ValueError):
    """Raised for unknown problems, illegal dimensions or invalid inputs."""


@dataclass(frozen=True)
class Problem:
    """A box-constrained multi-objective minimisation problem.

    Attributes:
        name: Registry identifier, e.g. ``"zdt1"``.
        decision_dim: Number of decision variables ``D``.
        objective_dim: Number of objectives ``M``.
        lower: Lower bounds, shape ``(D,)``.
        upper: Upper bounds, shape ``(D,)``.
        time_dependent: Whether the objectives depend on the clock time.
        objective_fn: Batched objective function ``(X, T) -> F``.
        front_fn: Optional analytic true-front sampler ``(T, n) -> F``.
        violation_fn: Optional batched constraint violation ``X -> cv`` (0 = feasible).
    """

    name: str
    decision_dim: int
    objective_dim: int
    lower: np.ndarray
    upper: np.ndarray
    time_dependent: bool
    objective_fn: ObjectiveFn = field(repr=False)
    front_fn: FrontFn | None = field(default=None, repr=False)
    violation_fn: ViolationFn | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != (self.decision_dim,) or upper.shape != (self.decision_dim,):
            raise ProblemError("bounds must have one entry per decision variable")
        if not np.all(lower < upper):
            raise ProblemError("every lower bound must be strictly below its upper bound")
        if self.objective_dim < 2:
            raise ProblemError("at least two objectives are required")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def constrained(self) -> bool:
        return self.violation_fn is not None

    def evaluate(self, x: np.ndarray, clock: EnvironmentClock | None = None) -> np.ndarray:
        return evaluate(self, x, clock)

    def violation(self, x: np.ndarray) -> np.ndarray:
        """Total constraint violation per row (zeros for unconstrained problems)."""
        X = np.atleast_2d(np.asarray(x, dtype=float))
        if self.violation_fn is None:
            cv = np.zeros(X.shape[0])
        else:
            cv = np.asarray(self.violation_fn(X), dtype=float)
        return cv if np.ndim(x) == 2 else cv[0]

    def clip(self, X: np.ndarray) -> np.ndarray:
        return np.clip(X, self.lower, self.upper)


@dataclass
class EnvironmentClock:
    """Evaluation counter driving the environment time ``T``.

    ``schedule`` is a sequence of ``(evaluation_count, T)`` pairs sorted by
    evaluation count; ``T`` takes the value of the last entry whose count is
    ``<=`` the current counter. An empty schedule keeps ``T`` at ``initial_time``.
    """

    schedule: list[tuple[int, float]] = field(default_factory=list)
    initial_time: float = 0.0
    evaluation_counter: int = 0

    def __post_init__(self) -> None:
        self.schedule = sorted((int(n), float(t)) for n, t in self.schedule)

    @property
    def time_value(self) -> float:
        return self.time_at(self.evaluation_counter)

    def time_at(self, evaluations: int) -> float:
        t = self.initial_time
        for count, value in self.schedule:
            if evaluations >= count:
                t = value
            else:
                break
        return t

    def advance(self, n: int) -> bool:
        """Count ``n`` evaluations; returns True if ``T`` changed."""
        before = self.time_value
        self.evaluation_counter += int(n)
        return self.time_value != before

    def next_change(self) -> int | None:
        """Evaluation count of the next scheduled ``T`` transition, if any."""
        current = self.time_value
        for count, value in self.schedule:
            if count > self.evaluation_counter and value != current:
                return count
        return None

    @classmethod
    def stepped(cls, times: Sequence[float], evaluations_per_step: int) -> EnvironmentClock:
        """Clock that holds each of ``times`` for ``evaluations_per_step`` evaluations."""
        times = list(times)
        schedule = [(i * evaluations_per_step, t) for i, t in enumerate(times)]
        return cls(schedule=schedule, initial_time=times[0] if times else 0.0)


def evaluate(problem: Problem, x: np.ndarray, clock: EnvironmentClock | None = None) -> np.ndarray:
    """Evaluate ``problem`` at ``x`` under the clock's current time.

    Does not touch the clock's counter; the caller owns evaluation counting.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if X.ndim != 2 or X.shape[1] != problem.decision_dim:
        raise ProblemError(
            f"{problem.name}: expected {problem.decision_dim} decision variables, got shape {x.shape}"
        )
    if np.any(X < problem.lower - BOUND_TOL) or np.any(X > problem.upper + BOUND_TOL):
        raise ProblemError(f"{problem.name}: decision vector outside bounds")
    t = clock.time_value if (clock is not None and problem.time_dependent) else 0.0
    F = problem.objective_fn(X, t)
    return F[0] if single else F


def sample_true_pf(
    problem: Problem,
    clock: EnvironmentClock | None = None,
    n: int = DEFAULT_PF_POINTS,
) -> np.ndarray:
    """Sample ``n`` points of the analytic Pareto front at the clock's time."""
    if problem.front_fn is None:
        raise ProblemError(f"{problem.name}: no analytic Pareto front")
    if n < 2:
        raise ProblemError("need at least two front points")
    t = clock.time_value if (clock is not None and problem.time_dependent) else 0.0
    return problem.front_fn(t, n)


def write_front_csv(front: np.ndarray, path: str | Path) -> None:
    """Write objective vectors as CSV with columns ``f1..fM``."""
    front = np.atleast_2d(front)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{i + 1}" for i in range(front.shape[1])])
        writer.writerows(front.tolist())


# --------------------------------------------------------------------------- ZDT


def _zdt_g(X: np.ndarray) -> np.ndarray:
    return 1.0 + 9.0 * X[:, 1:].sum(axis=1) / (X.shape[1] - 1)


def _zdt1(X: np.ndarray, t: float) -> np.ndarray:
    f1 = X[:, 0]
    g = _zdt_g(X)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


def _zdt2(X: np.ndarray, t: float) -> np.ndarray:
    f1 = X[:, 0]
    g = _zdt_g(X)
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** 2)])


def _zdt3(X: np.ndarray, t: float) -> np.ndarray:
    f1 = X[:, 0]
    g = _zdt_g(X)
    h = 1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1)
    return np.column_stack([f1, g * h])


def _zdt1_front(t: float, n: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, n)
    return np.column_stack([f1, 1.0 - np.sqrt(f1)])


def _zdt2_front(t: float, n: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, n)
    return np.column_stack([f1, 1.0 - f1**2])


def _zdt3_curve(f1: np.ndarray) -> np.ndarray:
    return 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)


def zdt3_segments(resolution: int = 2_000_001) -> list[tuple[float, float]]:
    """Non-dominated ``f1`` intervals of the ZDT3 curve, found on a dense grid."""
    f1 = np.linspace(0.0, 1.0, resolution)
    f2 = _zdt3_curve(f1)
    # sorted by f1, a point is non-dominated iff f2 is below every earlier f2
    running = np.minimum.accumulate(f2)
    keep = np.ones_like(f2, dtype=bool)
    keep[1:] = f2[1:] < running[:-1]
    segments = []
    idx = np.flatnonzero(keep)
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[0], breaks + 1])
    ends = np.concatenate([breaks, [len(idx) - 1]])
    for s, e in zip(starts, ends):
        segments.append((float(f1[idx[s]]), float(f1[idx[e]])))
    return segments


_ZDT3_SEGMENTS: list[tuple[float, float]] | None = None


def _zdt3_front(t: float, n: int) -> np.ndarray:
    global _ZDT3_SEGMENTS
    if _ZDT3_SEGMENTS is None:
        _ZDT3_SEGMENTS = zdt3_segments()
    segs = np.array(_ZDT3_SEGMENTS)
    lengths = segs[:, 1] - segs[:, 0]
    # uniform in f1 over the union of segments, endpoints included
    u = np.linspace(0.0, lengths.sum(), n)
    cum = np.concatenate([[0.0], np.cumsum(lengths)])
    which = np.clip(np.searchsorted(cum, u, side="right") - 1, 0, len(segs) - 1)
    f1 = segs[which, 0] + (u - cum[which])
    f1 = np.minimum(f1, segs[which, 1])
    return np.column_stack([f1, _zdt3_curve(f1)])


# -------------------------------------------------------------------------- DTLZ


def _dtlz_g_rastrigin(Xm: np.ndarray) -> np.ndarray:
    k = Xm.shape[1]
    z = Xm - 0.5
    return 100.0 * (k + np.sum(z**2 - np.cos(20.0 * np.pi * z), axis=1))


def _dtlz_g_sphere(Xm: np.ndarray) -> np.ndarray:
    return np.sum((Xm - 0.5) ** 2, axis=1)


def _dtlz_linear(X: np.ndarray, g: np.ndarray, M: int) -> np.ndarray:
    xp = X[:, : M - 1]
    F = np.empty((X.shape[0], M))
    for i in range(M):
        f = 0.5 * (1.0 + g) * np.prod(xp[:, : M - 1 - i], axis=1)
        if i > 0:
            f = f * (1.0 - xp[:, M - 1 - i])
        F[:, i] = f
    return F


def _dtlz_spherical(X: np.ndarray, g: np.ndarray, M: int) -> np.ndarray:
    theta = X[:, : M - 1] * (np.pi / 2.0)
    F = np.empty((X.shape[0], M))
    for i in range(M):
        f = (1.0 + g) * np.prod(np.cos(theta[:, : M - 1 - i]), axis=1)
        if i > 0:
            f = f * np.sin(theta[:, M - 1 - i])
        F[:, i] = f
    return F


def _make_dtlz(kind: int, M: int) -> ObjectiveFn:
    def fn(X: np.ndarray, t: float) -> np.ndarray:
        Xm = X[:, M - 1 :]
        if kind == 1:
            return _dtlz_linear(X, _dtlz_g_rastrigin(Xm), M)
        if kind == 2:
            return _dtlz_spherical(X, _dtlz_g_sphere(Xm), M)
        return _dtlz_spherical(X, _dtlz_g_rastrigin(Xm), M)

    return fn


def _lattice_divisions(M: int, n: int) -> int:
    """Smallest simplex-lattice division count giving at least ``n`` points."""
    from math import comb

    H = 1
    while comb(H + M - 1, M - 1) < n:
        H += 1
    return H


def _make_dtlz_front(kind: int, M: int) -> FrontFn:
    def fn(t: float, n: int) -> np.ndarray:
        W = das_dennis(M, _lattice_divisions(M, n))
        if kind == 1:
            return 0.5 * W
        return W / np.linalg.norm(W, axis=1, keepdims=True)

    return fn


# ----------------------------------------------------------------- dynamic ones


def dmop1_exponent(t: float) -> float:
    """Front shape exponent of dMOP1 at time ``t``."""
    return 0.75 * np.sin(0.5 * np.pi * t) + 1.25


def _dmop1(X: np.ndarray, t: float) -> np.ndarray:
    H = dmop1_exponent(t)
    f1 = X[:, 0]
    g = 1.0 + 9.0 * np.sum(X[:, 1:] ** 2, axis=1)
    return np.column_stack([f1, g * (1.0 - (f1 / g) ** H)])


def _dmop1_front(t: float, n: int) -> np.ndarray:
    f1 = np.linspace(0.0, 1.0, n)
    return np.column_stack([f1, 1.0 - f1 ** dmop1_exponent(t)])


def g2_optimum(t: float) -> float:
    """Location of the G2 Pareto set in the distance variables at time ``t``."""
    return float(np.sin(0.5 * np.pi * t))


def _g2(X: np.ndarray, t: float) -> np.ndarray:
    f1 = X[:, 0]
    g = 1.0 + np.sum((X[:, 1:] - g2_optimum(t)) ** 2, axis=1)
    return np.column_stack([f1, g * (1.0 - np.sqrt(f1 / g))])


# --------------------------------------------------------------------- registry


@dataclass(frozen=True)
class _Family:
    builder: Callable[[int], Problem]
    min_dim: int
    max_dim: int | None = None


def _unit_box(D: int) -> tuple[np.ndarray, np.ndarray]:
    return np.zeros(D), np.ones(D)


def _zdt(name: str, fn: ObjectiveFn, front: FrontFn) -> Callable[[int], Problem]:
    def build(D: int) -> Problem:
        lo, hi = _unit_box(D)
        return Problem(name, D, 2, lo, hi, False, fn, front)

    return build


def _dtlz(name: str, kind: int, M: int = 3) -> Callable[[int], Problem]:
    def build(D: int) -> Problem:
        lo, hi = _unit_box(D)
        return Problem(name, D, M, lo, hi, False, _make_dtlz(kind, M), _make_dtlz_front(kind, M))

    return build


def _build_dmop1(D: int) -> Problem:
    lo, hi = _unit_box(D)
    return Problem("dmop1", D, 2, lo, hi, True, _dmop1, _dmop1_front)


def _build_g2(D: int) -> Problem:
    lo = np.full(D, -1.0)
    hi = np.ones(D)
    lo[0] = 0.0
    return Problem("g2", D, 2, lo, hi, True, _g2, lambda t, n: _zdt1_front(t, n))


def _build_robot(D: int) -> Problem:
    from mfdmolso.robot import make_robot_problem

    return make_robot_problem()


_REGISTRY: dict[str, _Family] = {
    "zdt1": _Family(_zdt("zdt1", _zdt1, _zdt1_front), 2),
    "zdt2": _Family(_zdt("zdt2", _zdt2, _zdt2_front), 2),
    "zdt3": _Family(_zdt("zdt3", _zdt3, _zdt3_front), 2),
    "dtlz1": _Family(_dtlz("dtlz1", 1), 3),
    "dtlz2": _Family(_dtlz("dtlz2", 2), 3),
    "dtlz3": _Family(_dtlz("dtlz3", 3), 3),
    "dmop1": _Family(_build_dmop1, 2),
    "g2": _Family(_build_g2, 2),
    "robot": _Family(_build_robot, 3, 3),
}

PROBLEM_NAMES: tuple[str, ...] = tuple(_REGISTRY)


def make_problem(name: str, decision_dim: int) -> Problem:
    """Build a registered problem.

    Args:
        name: One of :data:`PROBLEM_NAMES` (case-insensitive).
        decision_dim: Number of decision variables.

    Raises:
        ProblemError: If the name is unknown or the dimension is illegal for the family.
    """
    key = name.lower()
    if key not in _REGISTRY:
        raise ProblemError(f"unknown problem {name!r}; expected one of {', '.join(PROBLEM_NAMES)}")
    family = _REGISTRY[key]
    decision_dim = int(decision_dim)
    if decision_dim < family.min_dim or (family.max_dim is not None and decision_dim > family.max_dim):
        raise ProblemError(f"{key}: illegal decision dimension {decision_dim}")
    return family.builder(decision_dim)
