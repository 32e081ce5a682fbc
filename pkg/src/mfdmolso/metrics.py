"""Performance indicators: generational distance, spread, error rate, set coverage.

Nearest-neighbour distances to the reference front use a k-d tree, so a
dense reference sample costs ``O(n log m)`` per query set.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.spatial import cKDTree

from mfdmolso.ranking import dominance_matrix

ER_THRESHOLD = 0.01


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricReport:
    gd: float
    delta: float
    er: float
    n_known: int
    reference_size: int

    def as_dict(self) -> dict:
        return asdict(self)


def _as_set(points: np.ndarray, name: str) -> np.ndarray:
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.size == 0:
        raise MetricError(f"{name} is empty")
    return P


def nearest_distances(known: np.ndarray, true_pf: np.ndarray | cKDTree) -> np.ndarray:
    """Euclidean distance from each known point to its nearest reference point."""
    tree = true_pf if isinstance(true_pf, cKDTree) else cKDTree(_as_set(true_pf, "true front"))
    d, _ = tree.query(_as_set(known, "known set"))
    return np.asarray(d, dtype=float)


def generational_distance(known: np.ndarray, true_pf: np.ndarray | cKDTree, p: float = 2.0) -> float:
    """``(sum d_i**p)**(1/p) / n`` over the ``n`` known points."""
    d = nearest_distances(known, true_pf)
    return float(np.sum(d**p) ** (1.0 / p) / len(d))


def spread_delta(known: np.ndarray) -> float:
    """Sample standard deviation of nearest-neighbour L1 gaps within ``known``."""
    P = _as_set(known, "known set")
    n = len(P)
    if n < 2:
        raise MetricError("spread needs at least two points")
    L1 = np.sum(np.abs(P[:, None, :] - P[None, :, :]), axis=2)
    np.fill_diagonal(L1, np.inf)
    d = L1.min(axis=1)
    return float(np.sqrt(np.sum((d.mean() - d) ** 2) / (n - 1)))


def error_rate(
    known: np.ndarray,
    true_pf: np.ndarray | cKDTree,
    threshold: float = ER_THRESHOLD,
    mode: str = "known",
) -> float:
    """Share of points farther than ``threshold`` from the other set.

    ``mode="known"`` (default) is the fraction of known points more than
    ``threshold`` from the reference front. ``mode="front"`` is
    ``1 - |S cap P| / |P|`` read over the reference front: the fraction of
    reference points with no known point within ``threshold``.
    """
    if mode == "known":
        d = nearest_distances(known, true_pf)
        return float(np.mean(d > threshold))
    if mode == "front":
        ref = true_pf.data if isinstance(true_pf, cKDTree) else _as_set(true_pf, "true front")
        d = nearest_distances(ref, _as_set(known, "known set"))
        return float(np.mean(d > threshold))
    raise MetricError(f"unknown error-rate mode {mode!r}")


def set_coverage(A: np.ndarray, B: np.ndarray) -> float:
    """Fraction of ``B`` dominated by at least one member of ``A``."""
    B = _as_set(B, "B")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.size == 0:
        return 0.0
    both = np.vstack([A, B])
    dom = dominance_matrix(both)[: len(A), len(A) :]
    return float(np.mean(dom.any(axis=0)))


def report(known: np.ndarray, true_pf: np.ndarray, p: float = 2.0, threshold: float = ER_THRESHOLD) -> MetricReport:
    tree = cKDTree(_as_set(true_pf, "true front"))
    known = _as_set(known, "known set")
    delta = spread_delta(known) if len(known) >= 2 else 0.0
    return MetricReport(
        gd=generational_distance(known, tree, p),
        delta=delta,
        er=error_rate(known, tree, threshold),
        n_known=len(known),
        reference_size=len(true_pf),
    )
