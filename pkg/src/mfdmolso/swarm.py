"""Lion population: chaotic initialisation, roles and role-specific moves.

The population is held as arrays (:class:`Swarm`) so that each role update is
one vectorised expression. :class:`Lion` is a single-member view used by the
per-lion helpers and tests.

Every update takes an optional ``gamma`` (the standard-normal perturbation) so
that callers and tests can fix it; when omitted it is drawn from ``rng``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from mfdmolso.problems import EnvironmentClock, Problem
from mfdmolso.ranking import constrained_dominates

CUB_LINEAR_PROBABILITY = 0.7
_TENT_FORBIDDEN = (0.0, 0.5, 1.0)


class Role(enum.IntEnum):
    KING = 0
    LIONESS = 1
    CUB = 2


class SwarmConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SwarmConfig:
    """Population parameters.

    ``step_fraction`` sets the per-dimension step coefficient as a fraction of
    each dimension's range unless ``step`` is given explicitly.
    """

    population_size: int = 120
    max_iterations: int = 400
    adult_ratio: float = 0.2
    tent_alpha: float = 0.7
    step_fraction: float = 0.1
    step: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.population_size < 4:
            raise SwarmConfigError("population_size must be at least 4")
        if self.max_iterations < 0:
            raise SwarmConfigError("max_iterations must be non-negative")
        if not 0.0 < self.adult_ratio <= 0.5:
            raise SwarmConfigError("adult_ratio must lie in (0, 0.5]")
        if not 0.0 < self.tent_alpha < 1.0 or self.tent_alpha == 0.5:
            raise SwarmConfigError("tent_alpha must lie in (0, 1) and differ from 0.5")

    def step_for(self, problem: Problem) -> np.ndarray:
        if self.step is not None:
            step = np.asarray(self.step, dtype=float)
            return np.broadcast_to(step, (problem.decision_dim,)).copy()
        return self.step_fraction * problem.span


@dataclass
class Lion:
    position: np.ndarray
    objectives: np.ndarray
    personal_best_position: np.ndarray
    personal_best_objectives: np.ndarray
    role: Role = Role.CUB
    violation: float = 0.0
    personal_best_violation: float = 0.0


@dataclass
class Swarm:
    """Array-of-structures population state.

    Attributes:
        x: Positions ``(N, D)``.
        f: Objectives at ``x`` ``(N, M)``.
        cv: Constraint violation at ``x`` ``(N,)``.
        pbest_x, pbest_f, pbest_cv: Personal-best memory with the same shapes.
        roles: :class:`Role` codes ``(N,)``.
    """

    x: np.ndarray
    f: np.ndarray
    cv: np.ndarray
    pbest_x: np.ndarray
    pbest_f: np.ndarray
    pbest_cv: np.ndarray
    roles: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.roles is None:
            self.roles = np.full(len(self.x), Role.CUB, dtype=int)

    def __len__(self) -> int:
        return len(self.x)

    @classmethod
    def fresh(cls, x: np.ndarray, f: np.ndarray, cv: np.ndarray | None = None) -> Swarm:
        """Population whose personal bests equal the given positions."""
        cv = np.zeros(len(x)) if cv is None else np.asarray(cv, dtype=float)
        return cls(x.copy(), f.copy(), cv.copy(), x.copy(), f.copy(), cv.copy())

    def take(self, idx: np.ndarray) -> Swarm:
        idx = np.asarray(idx, dtype=int)
        return Swarm(
            self.x[idx], self.f[idx], self.cv[idx],
            self.pbest_x[idx], self.pbest_f[idx], self.pbest_cv[idx], self.roles[idx],
        )

    @staticmethod
    def concat(a: Swarm, b: Swarm) -> Swarm:
        return Swarm(*(np.concatenate([getattr(a, k), getattr(b, k)]) for k in
                       ("x", "f", "cv", "pbest_x", "pbest_f", "pbest_cv", "roles")))

    def lion(self, i: int) -> Lion:
        return Lion(
            self.x[i].copy(), self.f[i].copy(), self.pbest_x[i].copy(), self.pbest_f[i].copy(),
            Role(int(self.roles[i])), float(self.cv[i]), float(self.pbest_cv[i]),
        )

    def copy(self) -> Swarm:
        return self.take(np.arange(len(self)))


# ------------------------------------------------------------------ Tent chaos


def tent_next(x: float | np.ndarray, alpha: float) -> float | np.ndarray:
    """One step of the skew tent map with peak at ``alpha``."""
    if not 0.0 < alpha < 1.0 or alpha == 0.5:
        raise SwarmConfigError("tent alpha must lie in (0, 1) and differ from 0.5")
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("tent map input must lie in [0, 1]")
    out = np.where(x < alpha, x / alpha, (1.0 - x) / (1.0 - alpha))
    return float(out) if out.ndim == 0 else out


def _tent_seed(alpha: float, rng: np.random.Generator) -> float:
    while True:
        x = float(rng.random())
        if x not in _TENT_FORBIDDEN and x != alpha:
            return x


def tent_sequence(n: int, alpha: float, rng: np.random.Generator, x0: float | None = None) -> np.ndarray:
    """``n`` successive tent-map iterates starting after ``x0``.

    In floating point the orbit can land on 0 or 1 (both lead to the fixed
    point 0) or on ``alpha``; such iterates are replaced by a fresh random
    seed so the sequence keeps covering the interval.
    """
    x = _tent_seed(alpha, rng) if x0 is None else float(x0)
    out = np.empty(n)
    for i in range(n):
        x = x / alpha if x < alpha else (1.0 - x) / (1.0 - alpha)
        if x in _TENT_FORBIDDEN or x == alpha:
            x = _tent_seed(alpha, rng)
        out[i] = x
    return out


def chaotic_positions(problem: Problem, n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """``n`` positions, one independent tent sequence per dimension, mapped to the bounds."""
    if n == 0:
        return np.empty((0, problem.decision_dim))
    chaos = np.column_stack([tent_sequence(n, alpha, rng) for _ in range(problem.decision_dim)])
    return problem.lower + chaos * problem.span


def evaluate_population(problem: Problem, X: np.ndarray, clock: EnvironmentClock | None) -> tuple[np.ndarray, np.ndarray]:
    return problem.evaluate(X, clock), problem.violation(X)


def init_population(
    problem: Problem,
    config: SwarmConfig,
    seed: int | np.random.Generator,
    clock: EnvironmentClock | None = None,
) -> Swarm:
    """Chaotic initial population with personal bests at the initial positions."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    X = chaotic_positions(problem, config.population_size, config.tent_alpha, rng)
    F, cv = evaluate_population(problem, X, clock)
    return Swarm.fresh(X, F, cv)


# ----------------------------------------------------------------------- roles


def adult_count(N: int, beta: float) -> int:
    return int(math.ceil(beta * N - 1e-9))


def partition_roles(N: int, beta: float, king: int, order: np.ndarray | None = None) -> np.ndarray:
    """Role code per member: one king, ``ceil(beta*N) - 1`` lionesses, the rest cubs.

    Args:
        N: Population size.
        beta: Adult ratio.
        king: Index of the member carrying the global guide.
        order: Member indices from best to worst; the best non-king members
            become lionesses. Defaults to index order.
    """
    if not 0.0 < beta <= 0.5:
        raise SwarmConfigError("adult ratio must lie in (0, 0.5]")
    adults = adult_count(N, beta)
    lionesses = adults - 1
    if lionesses < 1 or N - adults < 1:
        raise SwarmConfigError(f"population of {N} cannot hold a king, lionesses and cubs at ratio {beta}")
    order = np.arange(N) if order is None else np.asarray(order, dtype=int)
    roles = np.full(N, Role.CUB, dtype=int)
    roles[king] = Role.KING
    others = order[order != king]
    roles[others[:lionesses]] = Role.LIONESS
    return roles


# ----------------------------------------------------------------- step sizes


def lioness_factor(t: int, T: int, step: np.ndarray | float) -> np.ndarray:
    return np.asarray(step) * math.exp(-30.0 * (t / T) ** 10) if T > 0 else np.asarray(step, dtype=float)


def step_factors(
    t: int,
    T: int,
    step: np.ndarray | float,
    rng: np.random.Generator,
    n_cubs: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Disturbance factors for lionesses and cubs at iteration ``t`` of ``T``.

    Returns ``alpha_f`` (shape of ``step``) and ``alpha_c`` with one row per
    cub: each cub uses the linear schedule ``step*(T-t)/T`` with probability
    0.7 and the lioness schedule otherwise.
    """
    if not 0 <= t <= T:
        raise ValueError("iteration must lie in [0, T]")
    step = np.asarray(step, dtype=float)
    alpha_f = lioness_factor(t, T, step)
    linear = step * ((T - t) / T if T > 0 else 1.0)
    r = rng.random(n_cubs)
    use_linear = r <= CUB_LINEAR_PROBABILITY
    alpha_c = np.where(use_linear[:, None], np.atleast_1d(linear)[None, :], np.atleast_1d(alpha_f)[None, :])
    return alpha_f, alpha_c


def regulatory_factor(t: int, T: int) -> float:
    """Cub behaviour split; grows from 1/3 at ``t = 0`` to 1 at ``t = T``."""
    return (2.0 * t + T) / (3.0 * T) if T > 0 else 1.0 / 3.0


# ---------------------------------------------------------------- role moves


def _gamma(rng: np.random.Generator | None, gamma: np.ndarray | float | None, shape: tuple[int, ...]) -> np.ndarray:
    if gamma is not None:
        return np.broadcast_to(np.asarray(gamma, dtype=float), shape)
    if rng is None:
        raise ValueError("either rng or gamma is required")
    return rng.standard_normal(shape)


def reflect_into(X: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Mirror out-of-range coordinates back across the violated bound, then clamp."""
    X = np.where(X < lower, 2 * lower - X, X)
    X = np.where(X > upper, 2 * upper - X, X)
    return np.clip(X, lower, upper)


def bounce_into(
    X: np.ndarray,
    origin: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Replace out-of-range coordinates by a uniform point between the violated bound and ``origin``.

    Unlike clamping, no coordinate lands exactly on a bound unless it started there.
    """
    X = np.asarray(X, dtype=float)
    origin = np.clip(np.broadcast_to(origin, X.shape), lower, upper)
    u = rng.random(X.shape)
    low_side = lower + u * (origin - lower)
    high_side = upper - u * (upper - origin)
    X = np.where(X < lower, low_side, X)
    return np.where(X > upper, high_side, X)


def apply_bounds(
    X: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
    mode: str = "clamp",
    origin: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Bring ``X`` inside the box by ``"clamp"``, ``"reflect"`` or ``"bounce"``.

    ``bounce`` needs the pre-move positions ``origin`` and an ``rng``.
    """
    if mode == "clamp":
        return np.clip(X, lower, upper)
    if mode == "reflect":
        return reflect_into(X, lower, upper)
    if mode == "bounce":
        if origin is None or rng is None:
            raise ValueError("bounce mode needs origin and rng")
        return bounce_into(X, origin, lower, upper, rng)
    raise ValueError(f"unknown boundary mode {mode!r}")


def _clamp(X: np.ndarray, lower: np.ndarray | None, upper: np.ndarray | None) -> np.ndarray:
    if lower is None and upper is None:
        return X
    return np.clip(X, lower, upper)


def update_king(
    g: np.ndarray,
    p: np.ndarray,
    rng: np.random.Generator | None = None,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    gamma: np.ndarray | float | None = None,
) -> np.ndarray:
    """Search near the guide: ``g * (1 + gamma * ||p - g||)``."""
    g = np.asarray(g, dtype=float)
    p = np.asarray(p, dtype=float)
    dist = np.linalg.norm(p - g, axis=-1, keepdims=True)
    gam = _gamma(rng, gamma, np.broadcast_shapes(p.shape, g.shape))
    return _clamp(g * (1.0 + gam * dist), lower, upper)


def update_lioness(
    p: np.ndarray,
    partner: np.ndarray,
    alpha_f: np.ndarray | float,
    rng: np.random.Generator | None = None,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    gamma: np.ndarray | float | None = None,
) -> np.ndarray:
    """Cooperative hunt: ``(p + partner) * (1 + alpha_f * gamma) / 2``."""
    p = np.asarray(p, dtype=float)
    partner = np.asarray(partner, dtype=float)
    gam = _gamma(rng, gamma, np.broadcast_shapes(p.shape, partner.shape))
    return _clamp((p + partner) * (1.0 + alpha_f * gam) / 2.0, lower, upper)


def g_bar(low: np.ndarray, high: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Elite-opposite point of the guide within the population's range."""
    return np.asarray(low) + np.asarray(high) - np.asarray(g)


def update_cub(
    p: np.ndarray,
    g: np.ndarray,
    p_m: np.ndarray,
    gbar: np.ndarray,
    alpha_c: np.ndarray | float,
    t: int,
    T: int,
    rng: np.random.Generator | None = None,
    lower: np.ndarray | None = None,
    upper: np.ndarray | None = None,
    gamma: np.ndarray | float | None = None,
    q: np.ndarray | float | None = None,
) -> np.ndarray:
    """Cub move towards the guide, a lioness, or the elite-opposite point.

    With ``eta = (2t + T) / (3T)``, a uniform ``q <= eta/2`` follows the guide,
    ``q <= eta`` follows lioness ``p_m`` and larger ``q`` heads for ``gbar``.
    """
    single = np.ndim(p) == 1
    p = np.atleast_2d(np.asarray(p, dtype=float))
    n, D = p.shape
    if q is None:
        if rng is None:
            raise ValueError("either rng or q is required")
        q = rng.random(n)
    q = np.broadcast_to(np.asarray(q, dtype=float), (n,))
    eta = regulatory_factor(t, T)
    p_m = np.broadcast_to(np.asarray(p_m, dtype=float), (n, D))
    anchors = np.where(
        (q <= eta / 2.0)[:, None],
        np.broadcast_to(g, (n, D)),
        np.where((q <= eta)[:, None], p_m, np.broadcast_to(gbar, (n, D))),
    )
    gam = _gamma(rng, gamma, (n, D))
    alpha_c = np.asarray(alpha_c, dtype=float)
    if alpha_c.ndim == 1 and alpha_c.shape[0] == n and n != D:
        alpha_c = alpha_c[:, None]
    out = _clamp((anchors + p) * (1.0 + alpha_c * gam) / 2.0, lower, upper)
    return out[0] if single else out


# ------------------------------------------------------------- personal best


def update_personal_best(
    lion: Lion,
    new_position: np.ndarray,
    new_objectives: np.ndarray,
    rng: np.random.Generator,
    new_violation: float = 0.0,
) -> Lion:
    """Lion with its position moved and its personal best refreshed.

    The memory is replaced when the new point dominates it, kept when the new
    point is dominated, and replaced with probability 0.5 otherwise.
    """
    new_position = np.asarray(new_position, dtype=float)
    new_objectives = np.asarray(new_objectives, dtype=float)
    old_f, old_cv = lion.personal_best_objectives, lion.personal_best_violation
    if constrained_dominates(new_objectives, new_violation, old_f, old_cv):
        replace_best = True
    elif constrained_dominates(old_f, old_cv, new_objectives, new_violation):
        replace_best = False
    else:
        replace_best = bool(rng.random() < 0.5)
    out = replace(lion, position=new_position.copy(), objectives=new_objectives.copy(), violation=float(new_violation))
    if replace_best:
        out.personal_best_position = new_position.copy()
        out.personal_best_objectives = new_objectives.copy()
        out.personal_best_violation = float(new_violation)
    return out


def personal_best_mask(
    pbest_f: np.ndarray,
    pbest_cv: np.ndarray,
    F: np.ndarray,
    cv: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Vectorised replacement decision of :func:`update_personal_best` for all members."""
    n = len(F)
    feas_new = cv <= 0.0
    feas_old = pbest_cv <= 0.0
    le = np.all(F <= pbest_f, axis=1)
    lt = np.any(F < pbest_f, axis=1)
    ge = np.all(pbest_f <= F, axis=1)
    gt = np.any(pbest_f < F, axis=1)
    both_feas = feas_new & feas_old
    new_dom = np.where(both_feas, le & lt, np.where(feas_new, True, np.where(feas_old, False, cv < pbest_cv)))
    old_dom = np.where(both_feas, ge & gt, np.where(feas_old, True, np.where(feas_new, False, pbest_cv < cv)))
    coin = rng.random(n) < 0.5
    return new_dom | (~old_dom & coin)


def update_personal_bests(swarm: Swarm, rng: np.random.Generator) -> None:
    """Refresh every member's personal best from its current position in place."""
    mask = personal_best_mask(swarm.pbest_f, swarm.pbest_cv, swarm.f, swarm.cv, rng)
    swarm.pbest_x[mask] = swarm.x[mask]
    swarm.pbest_f[mask] = swarm.f[mask]
    swarm.pbest_cv[mask] = swarm.cv[mask]

