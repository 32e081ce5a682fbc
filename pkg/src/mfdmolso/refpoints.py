"""Reference-point machinery for problems with three or more objectives.

Simplex-lattice reference directions, adaptive normalisation against an ideal
point and hyperplane intercepts, perpendicular-distance association, niche
preserving selection of a partially admitted front, and the guide rule that
prefers sparse reference lines and then proximity to the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

ASF_EPS = 1e-6


def das_dennis(M: int, H: int) -> np.ndarray:
    """All points of the simplex lattice with ``H`` divisions in ``M`` dimensions.

    Uses stars and bars: each combination of ``M - 1`` bar positions among
    ``H + M - 1`` slots gives one composition of ``H`` into ``M`` parts.
    """
    if M < 2 or H < 1:
        raise ValueError("need M >= 2 and H >= 1")
    n = comb(H + M - 1, M - 1)
    bars = np.array(list(combinations(range(H + M - 1), M - 1)), dtype=np.int64).reshape(n, M - 1)
    padded = np.hstack([np.full((n, 1), -1), bars, np.full((n, 1), H + M - 1)])
    counts = np.diff(padded, axis=1) - 1
    return counts / H


@dataclass
class ReferencePointSet:
    """Reference directions on the unit simplex plus per-direction niche counts."""

    directions: np.ndarray
    divisions: int
    niche_count: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.niche_count is None:
            self.niche_count = np.zeros(len(self.directions), dtype=int)

    def __len__(self) -> int:
        return len(self.directions)

    @property
    def objective_dim(self) -> int:
        return self.directions.shape[1]


def generate_reference_points(M: int, H: int) -> ReferencePointSet:
    return ReferencePointSet(das_dennis(M, H), H)


def default_divisions(M: int) -> int:
    """Lattice divisions used when none are configured (91 directions for M = 3)."""
    return {3: 12, 4: 8}.get(M, 6)


@dataclass
class NormalizationState:
    """Running ideal point and the most recent extreme points and intercepts.

    ``ideal_point`` is the historical per-objective minimum. ``intercepts`` are
    expressed in the original objective coordinates, so ``intercepts > ideal_point``.
    """

    ideal_point: np.ndarray | None = None
    intercepts: np.ndarray | None = None
    extreme_points: np.ndarray | None = None

    def update_ideal(self, F: np.ndarray) -> None:
        fmin = np.min(np.atleast_2d(F), axis=0)
        self.ideal_point = fmin if self.ideal_point is None else np.minimum(self.ideal_point, fmin)

    def reset(self) -> None:
        self.ideal_point = None
        self.intercepts = None
        self.extreme_points = None


def _axis_weights(M: int) -> np.ndarray:
    W = np.full((M, M), ASF_EPS)
    np.fill_diagonal(W, 1.0)
    return W


def find_extreme_points(Ft: np.ndarray) -> np.ndarray:
    """Translated extreme point per axis: the member minimising the axis ASF."""
    M = Ft.shape[1]
    W = _axis_weights(M)
    asf = np.max(Ft[None, :, :] / W[:, None, :], axis=2)  # (M, n)
    return Ft[np.argmin(asf, axis=1)]


def hyperplane_intercepts(extremes: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    """Axis intercepts (translated coordinates) of the plane through ``extremes``.

    Falls back to ``fallback`` when the system is singular or an intercept is
    not positive.
    """
    M = extremes.shape[1]
    try:
        b = np.linalg.solve(extremes, np.ones(M))
        with np.errstate(divide="ignore"):
            a = 1.0 / b
        if not np.all(np.isfinite(a)) or np.any(a <= 1e-10):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        a = np.asarray(fallback, dtype=float).copy()
    a[a <= 1e-10] = 1.0
    return a


def normalize(F: np.ndarray, state: NormalizationState, update: bool = True) -> np.ndarray:
    """Normalise objective vectors by the ideal point and hyperplane intercepts.

    With ``update`` the ideal point is merged with ``F`` first and the extreme
    points and intercepts are recomputed from ``F``; otherwise the stored
    state is applied as is.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if update or state.ideal_point is None:
        state.update_ideal(F)
    Ft = F - state.ideal_point
    if update or state.intercepts is None:
        extremes = find_extreme_points(Ft)
        a = hyperplane_intercepts(extremes, Ft.max(axis=0))
        state.extreme_points = extremes + state.ideal_point
        state.intercepts = state.ideal_point + a
    return Ft / (state.intercepts - state.ideal_point)


def perpendicular_distances(Fn: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """Distance of every point to every reference line through the origin, ``(n, R)``."""
    Fn = np.atleast_2d(Fn)
    W = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    proj = Fn @ W.T  # (n, R)
    # residual vectors rather than |f|^2 - proj^2, which cancels badly near a line
    resid = Fn[:, None, :] - proj[:, :, None] * W[None, :, :]
    return np.linalg.norm(resid, axis=2)


def associate(Fn: np.ndarray, refs: ReferencePointSet | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest reference line index and its perpendicular distance per point.

    Ties go to the lowest direction index.
    """
    directions = refs.directions if isinstance(refs, ReferencePointSet) else refs
    D = perpendicular_distances(Fn, directions)
    idx = np.argmin(D, axis=1)
    return idx, D[np.arange(len(idx)), idx]


def niche_select(
    admitted_Fn: np.ndarray,
    last_Fn: np.ndarray,
    refs: ReferencePointSet,
    K: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Choose ``K`` members of the last front by niche count.

    Args:
        admitted_Fn: Normalised objectives of members already admitted.
        last_Fn: Normalised objectives of the partially admitted front.
        refs: Reference directions; ``refs.niche_count`` is overwritten with the
            final counts.
        K: Number of members to admit from the last front.
        rng: Source for tie breaking and random picks.

    Returns:
        Indices into ``last_Fn`` of the admitted members, in admission order.
    """
    n_last = len(last_Fn)
    if K > n_last:
        raise ValueError(f"cannot admit {K} members from a front of {n_last}")
    R = len(refs)
    rho = np.zeros(R, dtype=int)
    if len(admitted_Fn):
        adm_idx, _ = associate(admitted_Fn, refs)
        rho += np.bincount(adm_idx, minlength=R)
    if K == n_last:
        chosen = np.arange(n_last)
        if n_last:
            idx, _ = associate(last_Fn, refs)
            rho += np.bincount(idx, minlength=R)
        refs.niche_count = rho
        return chosen
    last_idx, last_d = associate(last_Fn, refs)
    available = np.ones(n_last, dtype=bool)
    active = np.ones(R, dtype=bool)
    chosen: list[int] = []
    while len(chosen) < K:
        rho_active = np.where(active, rho, np.iinfo(np.int64).max)
        candidates = np.flatnonzero(rho_active == rho_active.min())
        j = int(rng.choice(candidates))
        members = np.flatnonzero(available & (last_idx == j))
        if members.size == 0:
            active[j] = False
            continue
        if rho[j] == 0:
            pick = int(members[np.argmin(last_d[members])])
        else:
            pick = int(rng.choice(members))
        chosen.append(pick)
        available[pick] = False
        rho[j] += 1
    refs.niche_count = rho
    return np.array(chosen, dtype=int)


def convergence_measure(Fn: np.ndarray) -> np.ndarray:
    """Euclidean distance of normalised objective vectors to the origin."""
    return np.sqrt(np.sum(np.atleast_2d(Fn) ** 2, axis=1))


def select_global_best_multi(
    front_Fn: np.ndarray,
    refs: ReferencePointSet,
    convergence_F: np.ndarray | None = None,
) -> int:
    """Index of the guide among normalised first-front members.

    Counts members per reference line, keeps members on the least populated
    occupied lines, and returns the one nearest the origin (lowest index on
    ties). Distances are measured on ``convergence_F`` when given (for
    instance ideal-translated raw objectives), else on ``front_Fn``.
    """
    front_Fn = np.atleast_2d(front_Fn)
    if len(front_Fn) == 0:
        raise ValueError("empty front")
    idx, _ = associate(front_Fn, refs)
    phi = np.bincount(idx, minlength=len(refs))
    refs.niche_count = phi
    member_phi = phi[idx]
    pool = np.flatnonzero(member_phi == member_phi.min())
    basis = front_Fn if convergence_F is None else np.atleast_2d(convergence_F)
    sigma = convergence_measure(basis[pool])
    return int(pool[np.argmin(sigma)])
