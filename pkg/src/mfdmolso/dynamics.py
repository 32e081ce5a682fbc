"""Environment-change detection and the mixed cold/hot restart."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from mfdmolso.archive import Archive, DiversityRule, environmental_selection
from mfdmolso.problems import EnvironmentClock, Problem
from mfdmolso.swarm import Swarm, chaotic_positions

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RestartConfig:
    """Restart parameters.

    ``cauchy_fraction`` scales the Cauchy perturbation by each dimension's
    range unless ``cauchy_scale`` is given.
    """

    sentinel_fraction: float = 0.1
    change_epsilon: float = 1e-10
    cold_fraction: float = 0.5
    cauchy_fraction: float = 0.1
    cauchy_scale: tuple[float, ...] | None = None
    tent_alpha: float = 0.7
    enabled: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.cold_fraction <= 1.0:
            raise ValueError("cold_fraction must lie in [0, 1]")
        if not 0.0 < self.sentinel_fraction <= 1.0:
            raise ValueError("sentinel_fraction must lie in (0, 1]")

    def scale_for(self, problem: Problem) -> np.ndarray:
        if self.cauchy_scale is not None:
            return np.broadcast_to(np.asarray(self.cauchy_scale, dtype=float), (problem.decision_dim,)).copy()
        return self.cauchy_fraction * problem.span


def sentinel_indices(n_archive: int, fraction: float, rng: np.random.Generator) -> np.ndarray:
    if n_archive == 0:
        return np.zeros(0, dtype=int)
    k = max(1, int(round(fraction * n_archive)))
    return np.sort(rng.choice(n_archive, size=min(k, n_archive), replace=False))


def detect_change(
    problem: Problem,
    clock: EnvironmentClock | None,
    sentinel_x: np.ndarray,
    sentinel_f: np.ndarray,
    epsilon: float = 1e-10,
) -> bool:
    """True when any re-evaluated sentinel differs from its stored objectives by more than ``epsilon``."""
    sentinel_x = np.atleast_2d(sentinel_x)
    if sentinel_x.size == 0:
        return False
    fresh = problem.evaluate(sentinel_x, clock)
    return bool(np.any(np.abs(fresh - np.atleast_2d(sentinel_f)) > epsilon))


def cold_start(problem: Problem, n: int, seed: int | np.random.Generator, alpha: float = 0.7) -> np.ndarray:
    """``n`` fresh chaotic positions over the full bounds."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return chaotic_positions(problem, n, alpha, rng)


def hot_start(
    problem: Problem,
    previous_x: np.ndarray,
    n: int,
    scale: np.ndarray | float,
    rng: np.random.Generator,
) -> np.ndarray:
    """``n`` archive members drawn with replacement and Cauchy-perturbed per coordinate."""
    previous_x = np.atleast_2d(previous_x)
    if n == 0:
        return np.empty((0, problem.decision_dim))
    if previous_x.size == 0:
        return cold_start(problem, n, rng)
    picks = previous_x[rng.integers(0, len(previous_x), n)]
    noise = rng.standard_cauchy(picks.shape) * np.asarray(scale, dtype=float)
    return problem.clip(picks + noise)


def adaptive_restart(
    problem: Problem,
    previous_x: np.ndarray,
    N: int,
    config: RestartConfig,
    clock: EnvironmentClock | None,
    rng: np.random.Generator,
    rule: DiversityRule | None = None,
) -> tuple[Swarm, int]:
    """New population of ``N`` built from cold and hot starts.

    ``2N`` candidates are generated, a ``cold_fraction`` share of them chaotic
    and the rest hot-started; all are evaluated under the current environment,
    merged, and the best ``N`` are kept by level and diversity. Returns the
    population and the number of objective evaluations spent.
    """
    n_cold = int(round(config.cold_fraction * 2 * N))
    n_hot = 2 * N - n_cold
    cold = cold_start(problem, n_cold, rng, config.tent_alpha)
    hot = hot_start(problem, previous_x, n_hot, config.scale_for(problem), rng)
    X = np.vstack([cold, hot])
    F = problem.evaluate(X, clock)
    cv = problem.violation(X)
    merged = Swarm.fresh(X, F, cv)
    chosen = environmental_selection(merged.take(np.arange(N)), merged.take(np.arange(N, 2 * N)), N, rule, rng)
    return chosen, len(X)


def reevaluate_archive(problem: Problem, archive: Archive, clock: EnvironmentClock | None) -> tuple[Archive, int]:
    """Archive with objectives recomputed for the current environment."""
    if len(archive) == 0:
        return archive, 0
    f = problem.evaluate(archive.x, clock)
    cv = problem.violation(archive.x)
    return Archive(archive.x.copy(), f, cv, archive.capacity), len(archive)
