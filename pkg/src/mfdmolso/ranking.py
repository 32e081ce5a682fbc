"""Pareto dominance, layered non-dominated sorting and crowding degree."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True if ``a`` Pareto-dominates ``b`` under minimisation."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def constrained_dominates(a: Sequence[float], cv_a: float, b: Sequence[float], cv_b: float) -> bool:
    """Feasibility-first dominance.

    A feasible vector beats an infeasible one, two infeasible vectors compare by
    total violation, and two feasible vectors by Pareto dominance.
    """
    if cv_a <= 0.0 and cv_b <= 0.0:
        return dominates(a, b)
    if cv_a <= 0.0:
        return True
    if cv_b <= 0.0:
        return False
    return cv_a < cv_b


def dominance_matrix(F: np.ndarray, cv: np.ndarray | None = None) -> np.ndarray:
    """Boolean ``(n, n)`` matrix, entry ``[i, j]`` true when ``i`` dominates ``j``."""
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n, M = F.shape
    le = np.ones((n, n), dtype=bool)
    lt = np.zeros((n, n), dtype=bool)
    # one objective at a time keeps the temporaries at (n, n)
    for k in range(M):
        col = F[:, k]
        le &= col[:, None] <= col[None, :]
        lt |= col[:, None] < col[None, :]
    dom = le & lt
    if cv is not None:
        cv = np.asarray(cv, dtype=float)
        feas = cv <= 0.0
        if not feas.all():
            both = feas[:, None] & feas[None, :]
            dom = np.where(both, dom, False)
            dom |= feas[:, None] & ~feas[None, :]
            dom |= (~feas[:, None] & ~feas[None, :]) & (cv[:, None] < cv[None, :])
    return dom


def non_dominated_sort(F: np.ndarray, cv: np.ndarray | None = None) -> np.ndarray:
    """Pareto level of every row of ``F`` (1 is the non-dominated layer).

    Peels off the non-dominated subset of the remaining members repeatedly.
    ``cv`` switches to feasibility-first dominance.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n = F.shape[0]
    if n == 0:
        raise ValueError("cannot sort an empty population")
    dom = dominance_matrix(F, cv)
    count = dom.sum(axis=0, dtype=np.int64)
    ranks = np.zeros(n, dtype=int)
    remaining = np.ones(n, dtype=bool)
    level = 1
    while remaining.any():
        front = remaining & (count == 0)
        ranks[front] = level
        remaining &= ~front
        count -= dom[front].sum(axis=0, dtype=np.int64)
        level += 1
    return ranks


def fronts_from_ranks(ranks: np.ndarray) -> list[np.ndarray]:
    """Member indices grouped by rank, best rank first."""
    return [np.flatnonzero(ranks == r) for r in range(1, int(ranks.max()) + 1)]


def first_front(F: np.ndarray, cv: np.ndarray | None = None) -> np.ndarray:
    """Indices of the non-dominated members."""
    dom = dominance_matrix(F, cv)
    return np.flatnonzero(~dom.any(axis=0))


def crowding_degree(
    X: np.ndarray,
    F: np.ndarray,
    sort_objective_index: int = 0,
    space: str = "decision",
) -> np.ndarray:
    """Neighbour-gap crowding degree, larger means sparser.

    Members are ordered by objective ``sort_objective_index``; each interior
    member gets the Euclidean distance between its two neighbours, measured
    in decision space (``space="decision"``) or objective space
    (``space="objective"``). The first and last members get ``inf``.
    Results are returned in the input order.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    n = F.shape[0]
    C = np.full(n, np.inf)
    if n < 3:
        return C
    if space == "decision":
        P = np.atleast_2d(np.asarray(X, dtype=float))
    elif space == "objective":
        P = F
    else:
        raise ValueError(f"unknown crowding space {space!r}")
    order = np.argsort(F[:, sort_objective_index], kind="stable")
    Ps = P[order]
    gaps = np.linalg.norm(Ps[2:] - Ps[:-2], axis=1)
    C[order[1:-1]] = gaps
    return C


def crowding_threshold(C: Sequence[float]) -> float:
    """Mean of the finite crowding values; ``inf`` when none is finite."""
    C = np.asarray(C, dtype=float)
    finite = C[np.isfinite(C)]
    if finite.size == 0:
        return float("inf")
    return float(finite.mean())


def trim_by_crowding(
    X: np.ndarray,
    F: np.ndarray,
    keep: int,
    sort_objective_index: int = 0,
    space: str = "decision",
) -> np.ndarray:
    """Indices of ``keep`` members left after removing the most crowded one at a time.

    Crowding is recomputed after every removal; ties go to the lowest index.
    """
    n = len(F)
    alive = np.arange(n)
    while len(alive) > keep:
        C = crowding_degree(X[alive], F[alive], sort_objective_index, space)
        alive = np.delete(alive, int(np.argmin(C)))
    return alive
