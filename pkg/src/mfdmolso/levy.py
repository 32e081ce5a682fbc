"""Levy flight steps and the crowding-triggered elite-learning mutation."""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi, sin

import numpy as np

from mfdmolso.ranking import dominance_matrix
from mfdmolso.swarm import apply_bounds

GUIDE_PROBABILITY = 0.7


def mantegna_sigma(beta: float) -> float:
    """Scale of the numerator normal in Mantegna's Levy-stable step generator."""
    num = gamma(1.0 + beta) * sin(pi * beta / 2.0)
    den = gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def default_lambda(rank: int | np.ndarray) -> np.ndarray:
    """Step ratio per Pareto rank: grows by a quarter per level, capped at 1.5."""
    rank = np.asarray(rank, dtype=float)
    return np.minimum(0.5 * (1.0 + 0.25 * (rank - 1.0)), 1.5)


@dataclass(frozen=True)
class LevyConfig:
    beta: float = 1.5
    clamp_product: float = 1.99
    guide_probability: float = GUIDE_PROBABILITY
    per_dimension: bool = False

    def __post_init__(self) -> None:
        if not 1.0 < self.beta <= 2.0:
            raise ValueError("Levy beta must lie in (1, 2]")
        if not 0.0 < self.clamp_product < 2.0:
            raise ValueError("clamp_product must lie in (0, 2)")

    def lambda_for(self, rank: int | np.ndarray) -> np.ndarray:
        return default_lambda(rank)


def levy_step(beta: float, rng: np.random.Generator, size: int | tuple[int, ...] | None = None) -> np.ndarray | float:
    """Draw Levy flight lengths ``mu / |v|**(1/beta)``."""
    mu = rng.normal(0.0, mantegna_sigma(beta), size)
    v = rng.normal(0.0, 1.0, size)
    return mu / np.abs(v) ** (1.0 / beta)


def step_products(ranks: np.ndarray, L: np.ndarray, config: LevyConfig) -> np.ndarray:
    """``lambda(rank) * |L|`` clipped to ``clamp_product``."""
    return np.minimum(config.lambda_for(ranks) * np.abs(L), config.clamp_product)


def select_mutants(
    F: np.ndarray,
    crowding: np.ndarray,
    threshold: float,
    guide_F: np.ndarray,
    archive_front_F: np.ndarray,
    sort_objective_index: int = 0,
    stride: int = 2,
) -> np.ndarray:
    """Members chosen for Levy mutation.

    Candidates are crowded (``crowding < threshold``) and dominate neither the
    guide nor any archive first-front member. Candidates are ordered by the
    sorting objective and every ``stride``-th one is taken, starting with the first.
    """
    F = np.atleast_2d(F)
    crowded = np.flatnonzero(np.asarray(crowding) < threshold)
    if crowded.size == 0:
        return crowded
    refs = np.vstack([np.atleast_2d(guide_F), np.atleast_2d(archive_front_F).reshape(-1, F.shape[1])])
    both = np.vstack([F[crowded], refs])
    dom = dominance_matrix(both)[: crowded.size, crowded.size :]
    eligible = crowded[~dom.any(axis=1)]
    order = np.argsort(F[eligible, sort_objective_index], kind="stable")
    return eligible[order][::stride]


def levy_mutate(
    X: np.ndarray,
    guide: np.ndarray,
    archive_front_X: np.ndarray,
    ranks: np.ndarray | int,
    lower: np.ndarray,
    upper: np.ndarray,
    config: LevyConfig,
    rng: np.random.Generator,
    L: np.ndarray | None = None,
    boundary: str = "clamp",
) -> np.ndarray:
    """Fly each row of ``X`` towards the guide or a random archive front member.

    With probability ``guide_probability`` the target is ``guide``, otherwise a
    uniformly chosen row of ``archive_front_X`` (the guide when that is empty).
    The new point is ``x + lambda*|L| * (target - x)``, brought back inside the
    bounds by ``boundary`` (``"clamp"`` or ``"reflect"``).
    """
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    n = X.shape[0]
    ranks = np.broadcast_to(np.asarray(ranks), (n,))
    if L is None:
        L = levy_step(config.beta, rng, (n, X.shape[1]) if config.per_dimension else n)
    L = np.asarray(L, dtype=float)
    if L.ndim < 2:
        L = np.broadcast_to(L, (n,))[:, None]
    r = rng.random(n)
    targets = np.broadcast_to(np.asarray(guide, dtype=float), X.shape).copy()
    front = np.atleast_2d(np.asarray(archive_front_X, dtype=float))
    if front.size:
        use_front = r > config.guide_probability
        if use_front.any():
            picks = rng.integers(0, len(front), int(use_front.sum()))
            targets[use_front] = front[picks]
    s = step_products(ranks[:, None], L, config)
    out = apply_bounds(X + s * (targets - X), lower, upper, boundary, origin=X, rng=rng)
    return out[0] if single else out
