"""External archive, environmental selection and the two-objective guide rule."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mfdmolso.ranking import crowding_degree, fronts_from_ranks, non_dominated_sort, trim_by_crowding
from mfdmolso.refpoints import NormalizationState, ReferencePointSet, niche_select, normalize
from mfdmolso.swarm import Swarm


@dataclass
class DiversityRule:
    """How the last admitted front is thinned.

    Without ``refs`` the neighbour-gap crowding of ``space`` is used (two
    objectives); with ``refs`` selection goes through reference-point niching.
    """

    space: str = "decision"
    sort_objective_index: int = 0
    refs: ReferencePointSet | None = None
    norm: NormalizationState = field(default_factory=NormalizationState)


@dataclass
class Archive:
    """Capacity-bounded solution store.

    Attributes:
        x: Positions ``(n, D)``.
        f: Objectives ``(n, M)``.
        cv: Constraint violations ``(n,)``.
        capacity: Maximum size after an update.
        ranks: Pareto level of each member from the last update.
        guide: Index of the current global guide, or ``None``.
    """

    x: np.ndarray
    f: np.ndarray
    cv: np.ndarray
    capacity: int
    ranks: np.ndarray = field(default=None)  # type: ignore[assignment]
    guide: int | None = None

    def __post_init__(self) -> None:
        if self.capacity < 1:
            raise ValueError("archive capacity must be positive")
        if self.ranks is None:
            self.ranks = non_dominated_sort(self.f, self._cv_or_none()) if len(self.f) else np.zeros(0, dtype=int)

    @classmethod
    def empty(cls, D: int, M: int, capacity: int) -> Archive:
        return cls(np.empty((0, D)), np.empty((0, M)), np.empty(0), capacity)

    def __len__(self) -> int:
        return len(self.x)

    def _cv_or_none(self) -> np.ndarray | None:
        return self.cv if np.any(self.cv > 0) else None

    @property
    def front_index(self) -> np.ndarray:
        return np.flatnonzero(self.ranks == 1)

    @property
    def front_x(self) -> np.ndarray:
        return self.x[self.front_index]

    @property
    def front_f(self) -> np.ndarray:
        return self.f[self.front_index]

    @property
    def feasible_front_f(self) -> np.ndarray:
        idx = self.front_index
        return self.f[idx[self.cv[idx] <= 0.0]]

    @property
    def guide_x(self) -> np.ndarray:
        if self.guide is None:
            raise ValueError("no guide selected")
        return self.x[self.guide]

    @property
    def guide_f(self) -> np.ndarray:
        if self.guide is None:
            raise ValueError("no guide selected")
        return self.f[self.guide]


def unique_rows(X: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of every distinct row, in original order."""
    if len(X) == 0:
        return np.zeros(0, dtype=int)
    _, first = np.unique(X, axis=0, return_index=True)
    return np.sort(first)


def _fill_by_fronts(
    x: np.ndarray,
    f: np.ndarray,
    cv: np.ndarray,
    keep: int,
    rule: DiversityRule,
    rng: np.random.Generator | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Indices of the ``keep`` best members plus the ranks of all members.

    Whole fronts are admitted while they fit; the first front that does not
    fit is thinned by ``rule``.
    """
    ranks = non_dominated_sort(f, cv if np.any(cv > 0) else None)
    if len(f) <= keep:
        return np.arange(len(f)), ranks
    chosen: list[np.ndarray] = []
    count = 0
    for front in fronts_from_ranks(ranks):
        if count + len(front) <= keep:
            chosen.append(front)
            count += len(front)
            if count == keep:
                break
            continue
        k = keep - count
        if rule.refs is None:
            sub = trim_by_crowding(x[front], f[front], k, rule.sort_objective_index, rule.space)
        else:
            admitted = np.concatenate(chosen) if chosen else np.zeros(0, dtype=int)
            pool = np.concatenate([admitted, front])
            Fn = normalize(f[pool], rule.norm)
            if rng is None:
                rng = np.random.default_rng(0)
            sub = niche_select(Fn[: len(admitted)], Fn[len(admitted) :], rule.refs, k, rng)
        chosen.append(front[np.sort(sub)])
        break
    return np.concatenate(chosen), ranks


def update_archive(
    archive: Archive,
    x: np.ndarray,
    f: np.ndarray,
    cv: np.ndarray | None = None,
    rule: DiversityRule | None = None,
    rng: np.random.Generator | None = None,
) -> Archive:
    """Merge new solutions into the archive and trim back to capacity.

    The union is deduplicated by position and by objective vector (existing
    members first), sorted
    into Pareto levels, and while it exceeds capacity members are deleted
    from the worst level, most crowded first.
    """
    rule = rule or DiversityRule()
    cv = np.zeros(len(x)) if cv is None else np.asarray(cv, dtype=float)
    ux = np.vstack([archive.x, x])
    uf = np.vstack([archive.f, f])
    ucv = np.concatenate([archive.cv, cv])
    keep = unique_rows(ux)
    keep = keep[unique_rows(uf[keep])]
    ux, uf, ucv = ux[keep], uf[keep], ucv[keep]
    idx, _ = _fill_by_fronts(ux, uf, ucv, archive.capacity, rule, rng)
    idx = np.sort(idx)
    nx, nf, ncv = ux[idx], uf[idx], ucv[idx]
    return Archive(nx, nf, ncv, archive.capacity, non_dominated_sort(nf, ncv if np.any(ncv > 0) else None))


def select_global_best_2d(
    archive: Archive,
    rng: np.random.Generator,
    space: str = "decision",
    sort_objective_index: int = 0,
) -> int:
    """Archive index of the least crowded first-front member.

    Takes the largest finite crowding value; when every value is infinite
    (three or fewer members) a member is drawn uniformly.
    """
    front = archive.front_index
    if front.size == 0:
        raise ValueError("archive is empty")
    C = crowding_degree(archive.x[front], archive.f[front], sort_objective_index, space)
    finite = np.isfinite(C)
    if not finite.any():
        return int(front[rng.integers(len(front))])
    best = np.flatnonzero(finite)[np.argmax(C[finite])]
    return int(front[best])


def environmental_selection(
    parents: Swarm,
    offspring: Swarm,
    N: int,
    rule: DiversityRule | None = None,
    rng: np.random.Generator | None = None,
) -> Swarm:
    """Best ``N`` members of ``parents`` plus ``offspring`` by level and diversity.

    Members repeating an earlier position or objective vector are considered
    only when fewer than ``N`` distinct members exist.
    """
    rule = rule or DiversityRule()
    union = Swarm.concat(parents, offspring)
    distinct = unique_rows(union.x)
    distinct = distinct[unique_rows(union.f[distinct])]
    if len(distinct) < N:
        rest = np.setdiff1d(np.arange(len(union)), distinct)
        distinct = np.concatenate([distinct, rest[: N - len(distinct)]])
    pool = union.take(distinct)
    idx, _ = _fill_by_fronts(pool.x, pool.f, pool.cv, N, rule, rng)
    return pool.take(idx)


def write_archive_csv(path: str | Path, snapshots: list[tuple[int, Archive]]) -> None:
    """Write ``(generation, archive)`` snapshots with columns generation, rank, f1..fM, x1..xD."""
    rows = []
    header: list[str] | None = None
    for gen, arc in snapshots:
        if header is None and len(arc):
            header = (["generation", "rank"] + [f"f{i + 1}" for i in range(arc.f.shape[1])]
                      + [f"x{i + 1}" for i in range(arc.x.shape[1])])
        for r, fv, xv in zip(arc.ranks, arc.f, arc.x):
            rows.append([gen, int(r), *fv.tolist(), *xv.tolist()])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header or ["generation", "rank"])
        writer.writerows(rows)
