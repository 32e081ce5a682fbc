"""Experiment orchestration: the lion swarm loop, the MOPSO baseline and suites.

Randomness: every run derives independent generators from its master seed
and a named stream (initialisation, per-generation updates, restarts), so a
run is reproducible bit for bit from ``(config, seed)``.
"""

from __future__ import annotations

import csv
import json
import logging
import time
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from mfdmolso.archive import (
    Archive,
    DiversityRule,
    environmental_selection,
    select_global_best_2d,
    update_archive,
    write_archive_csv,
)
from mfdmolso.config import ExperimentConfig
from mfdmolso.dynamics import RestartConfig, adaptive_restart, detect_change, reevaluate_archive, sentinel_indices
from mfdmolso.levy import LevyConfig, levy_mutate, select_mutants
from mfdmolso.metrics import MetricReport, error_rate, generational_distance, set_coverage, spread_delta
from mfdmolso.problems import EnvironmentClock, Problem, make_problem, sample_true_pf
from mfdmolso.robot import WaypointSet, profile, solve_353, write_trajectory_csv
from mfdmolso.ranking import crowding_degree, crowding_threshold, dominance_matrix, non_dominated_sort
from mfdmolso.refpoints import (
    NormalizationState,
    default_divisions,
    generate_reference_points,
    normalize,
    select_global_best_multi,
)
from mfdmolso.swarm import (
    Role,
    Swarm,
    SwarmConfig,
    apply_bounds,
    g_bar,
    init_population,
    partition_roles,
    step_factors,
    update_cub,
    update_king,
    update_lioness,
    update_personal_bests,
)

log = logging.getLogger(__name__)

STREAM_INIT = 0
STREAM_GENERATION = 1
STREAM_RESTART = 2
STREAM_MOPSO = 3

# metric reference sizes: 2-objective curves and 3-objective surfaces
PF_POINTS_2D = 10_000
PF_POINTS_3D = 200_000


def stream(seed: int, name: int, index: int = 0) -> np.random.Generator:
    return np.random.default_rng([int(seed), name, index])


@dataclass
class EnvironmentResult:
    time_value: float
    evaluations: int
    metrics: MetricReport | None


@dataclass
class RunRecord:
    """Outcome of one ``(config, seed)`` run."""

    algorithm: str
    problem: str
    dim: int
    seed: int
    archive: Archive
    metrics: MetricReport | None
    evaluations: int
    generations: int
    wall_clock: float
    environments: list[EnvironmentResult] = field(default_factory=list)
    snapshots: list[tuple[int, Archive]] = field(default_factory=list)
    restarts: list[dict] = field(default_factory=list)
    missed_changes: int = 0

    @property
    def front(self) -> np.ndarray:
        """Feasible first-front objective vectors of the final archive."""
        return self.archive.feasible_front_f

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "problem": self.problem,
            "dim": self.dim,
            "seed": self.seed,
            "evaluations": self.evaluations,
            "generations": self.generations,
            "wall_clock": self.wall_clock,
            "metrics": self.metrics.as_dict() if self.metrics else None,
            "environments": [
                {"T": e.time_value, "evaluations": e.evaluations,
                 "metrics": e.metrics.as_dict() if e.metrics else None}
                for e in self.environments
            ],
            "restarts": self.restarts,
            "missed_changes": self.missed_changes,
            "front_size": int(len(self.front)),
        }


# ----------------------------------------------------------------- metrics


def reference_front(problem: Problem, clock: EnvironmentClock | None, n: int | None = None) -> np.ndarray | None:
    if problem.front_fn is None:
        return None
    if n is None:
        n = PF_POINTS_2D if problem.objective_dim == 2 else PF_POINTS_3D
    return sample_true_pf(problem, clock, n)


def measure(front: np.ndarray, reference: np.ndarray | None, config: ExperimentConfig) -> MetricReport | None:
    if reference is None or len(front) == 0:
        return None
    tree = cKDTree(reference)
    return MetricReport(
        gd=generational_distance(front, tree, config.gd_p),
        delta=spread_delta(front) if len(front) >= 2 else 0.0,
        er=error_rate(front, tree if config.er_mode == "known" else reference, config.er_threshold, config.er_mode),
        n_known=len(front),
        reference_size=len(reference),
    )


def _make_clock(config: ExperimentConfig, problem: Problem) -> EnvironmentClock:
    if problem.time_dependent and config.dynamic_times:
        return EnvironmentClock.stepped(config.dynamic_times, config.evaluations_per_time)
    return EnvironmentClock()


def _budget(config: ExperimentConfig, problem: Problem) -> int | None:
    """Total evaluation budget for dynamic runs, ``None`` for generation-limited runs."""
    if problem.time_dependent and config.dynamic_times:
        return len(config.dynamic_times) * config.evaluations_per_time
    return None


# ------------------------------------------------------------- lion swarm


@dataclass
class _Selectors:
    """Diversity rules for the current objective count."""

    env: DiversityRule
    archive: DiversityRule
    guide_norm: NormalizationState

    def reset_normalization(self) -> None:
        self.env.norm.reset()
        self.archive.norm.reset()
        self.guide_norm.reset()


def _selectors(config: ExperimentConfig, M: int) -> _Selectors:
    if M == 2:
        env = DiversityRule(config.crowding_space, config.crowding_objective)
        arc = DiversityRule(config.crowding_space, config.crowding_objective)
    else:
        H = config.ref_divisions or default_divisions(M)
        env = DiversityRule(config.crowding_space, config.crowding_objective, generate_reference_points(M, H))
        arc = DiversityRule(config.crowding_space, config.crowding_objective, generate_reference_points(M, H))
    return _Selectors(env, arc, NormalizationState())


def _choose_guide(archive: Archive, sel: _Selectors, config: ExperimentConfig, rng: np.random.Generator) -> int:
    if sel.archive.refs is None:
        return select_global_best_2d(archive, rng, config.crowding_space, config.crowding_objective)
    front = archive.front_index
    Fn = normalize(archive.f[front], sel.guide_norm)
    raw = None
    if config.guide_distance == "raw":
        raw = archive.f[front] - sel.guide_norm.ideal_point
    return int(front[select_global_best_multi(Fn, sel.archive.refs, raw)])


def _quality_order(swarm: Swarm, config: ExperimentConfig) -> np.ndarray:
    """Members from best to worst: Pareto level, then larger crowding first."""
    cv = swarm.cv if np.any(swarm.cv > 0) else None
    ranks = non_dominated_sort(swarm.pbest_f, cv)
    C = crowding_degree(swarm.pbest_x, swarm.pbest_f, config.crowding_objective, config.crowding_space)
    return np.lexsort((-C, ranks))


def lion_generation(
    swarm: Swarm,
    archive: Archive,
    guide: int,
    problem: Problem,
    config: ExperimentConfig,
    swarm_config: SwarmConfig,
    progress: tuple[int, int],
    clock: EnvironmentClock,
    rng: np.random.Generator,
) -> tuple[Swarm, int]:
    """Role updates, evaluation, personal bests and Levy mutation for one generation.

    Returns the offspring population (personal bests inherited from the
    parents and refreshed) and the number of objective evaluations used.
    """
    N, D = swarm.x.shape
    t, T = progress
    g = archive.x[guide]
    lo, hi = problem.lower, problem.upper

    king = int(np.argmin(np.linalg.norm(swarm.pbest_x - g, axis=1)))
    roles = partition_roles(N, swarm_config.adult_ratio, king, _quality_order(swarm, config))
    lionesses = np.flatnonzero(roles == Role.LIONESS)
    cubs = np.flatnonzero(roles == Role.CUB)

    def draw_gamma(n: int) -> np.ndarray:
        # one normal draw per lion, or one per coordinate
        return rng.standard_normal((n, 1) if config.gamma_mode == "lion" else (n, D))

    step = swarm_config.step_for(problem)
    alpha_f, alpha_c = step_factors(t, T, step, rng, len(cubs))
    new_x = np.empty_like(swarm.x)

    new_x[king] = update_king(g, swarm.pbest_x[king], rng, gamma=draw_gamma(1)[0])

    if len(lionesses) >= 2:
        # uniform partner among the other lionesses
        shift = rng.integers(1, len(lionesses), len(lionesses))
        partners = lionesses[(np.arange(len(lionesses)) + shift) % len(lionesses)]
        partner_x = swarm.pbest_x[partners]
    else:
        partner_x = np.broadcast_to(swarm.pbest_x[king], (len(lionesses), D))
    new_x[lionesses] = update_lioness(swarm.pbest_x[lionesses], partner_x, alpha_f, rng,
                                       gamma=draw_gamma(len(lionesses)))

    if len(cubs):
        mothers = swarm.pbest_x[lionesses[rng.integers(0, len(lionesses), len(cubs))]]
        if config.opposite_range == "bounds":
            opposite = g_bar(lo, hi, g)
        else:
            opposite = g_bar(swarm.x.min(axis=0), swarm.x.max(axis=0), g)
        new_x[cubs] = update_cub(swarm.pbest_x[cubs], g, mothers, opposite, alpha_c, t, T, rng,
                                 gamma=draw_gamma(len(cubs)))

    new_x = apply_bounds(new_x, lo, hi, config.boundary, origin=swarm.pbest_x, rng=rng)
    new_f = problem.evaluate(new_x, clock)
    new_cv = problem.violation(new_x)
    evaluations = N
    offspring = Swarm(new_x, new_f, new_cv, swarm.pbest_x.copy(), swarm.pbest_f.copy(), swarm.pbest_cv.copy(), roles)
    update_personal_bests(offspring, rng)

    # Levy flight for crowded members
    cv = offspring.cv if np.any(offspring.cv > 0) else None
    ranks = non_dominated_sort(offspring.f, cv)
    C = crowding_degree(offspring.x, offspring.f, config.crowding_objective, config.crowding_space)
    mutants = select_mutants(
        offspring.f, C, crowding_threshold(C), archive.f[guide], archive.front_f,
        config.crowding_objective, config.mutation_stride,
    )
    if mutants.size:
        levy_cfg = LevyConfig(config.levy_beta, config.levy_clamp, per_dimension=config.levy_per_dimension)
        mx = levy_mutate(offspring.x[mutants], g, archive.front_x, ranks[mutants], lo, hi, levy_cfg, rng,
                          boundary=config.levy_boundary)
        offspring.x[mutants] = mx
        offspring.f[mutants] = problem.evaluate(mx, clock)
        offspring.cv[mutants] = problem.violation(mx)
        evaluations += len(mutants)
        sub = offspring.take(mutants)
        update_personal_bests(sub, rng)
        offspring.pbest_x[mutants] = sub.pbest_x
        offspring.pbest_f[mutants] = sub.pbest_f
        offspring.pbest_cv[mutants] = sub.pbest_cv
    return offspring, evaluations


def run_mf_dmolso(config: ExperimentConfig, seed: int | None = None, problem: Problem | None = None) -> RunRecord:
    """Run the lion swarm optimiser for one seed.

    Static problems run ``config.iterations`` generations. Dynamic problems
    with ``dynamic_times`` run until ``evaluations_per_time`` evaluations
    have been spent on every listed time; metrics are taken from the archive
    just before each change and at the end.
    """
    seed = config.seeds[0] if seed is None else seed
    problem = problem or make_problem(config.problem, config.dim)
    M = problem.objective_dim
    N = config.resolved_population()
    started = time.perf_counter()

    swarm_config = SwarmConfig(N, max(config.iterations, 1), config.adult_ratio, config.tent_alpha, config.step_fraction)
    restart_config = RestartConfig(
        config.sentinel_fraction, config.change_epsilon, config.cold_fraction, config.cauchy_fraction,
        None, config.tent_alpha, config.restart_enabled,
    )
    sel = _selectors(config, M)
    clock = _make_clock(config, problem)
    budget = _budget(config, problem)

    swarm = init_population(problem, swarm_config, stream(seed, STREAM_INIT), clock)
    clock.advance(N)
    archive = update_archive(Archive.empty(problem.decision_dim, M, config.resolved_archive()),
                             swarm.x, swarm.f, swarm.cv, sel.archive, stream(seed, STREAM_INIT, 1))

    record = RunRecord(config.algorithm, problem.name, problem.decision_dim, seed, archive, None, 0, 0, 0.0)
    env_time = clock.time_value
    env_start = 0
    generation = 0
    env_generation = 0

    def close_environment(T_value: float) -> None:
        ref = reference_front(problem, EnvironmentClock(initial_time=T_value), config.metric_points)
        metrics = measure(archive.feasible_front_f, ref, config)
        record.environments.append(EnvironmentResult(T_value, clock.evaluation_counter, metrics))

    while True:
        if budget is None:
            if generation >= config.iterations:
                break
            progress = (generation, config.iterations)
        else:
            if clock.evaluation_counter >= budget:
                break
            progress = (min(clock.evaluation_counter - env_start, config.evaluations_per_time),
                        config.evaluations_per_time)

        rng = stream(seed, STREAM_GENERATION, generation)

        if problem.time_dependent and restart_config.enabled and len(archive):
            idx = sentinel_indices(len(archive), restart_config.sentinel_fraction, rng)
            changed = detect_change(problem, clock, archive.x[idx], archive.f[idx], restart_config.change_epsilon)
            clock.advance(len(idx))
            if changed:
                previous_T = env_time
                close_environment(previous_T)
                env_time = clock.time_value
                env_start = clock.evaluation_counter
                env_generation = 0
                sel.reset_normalization()
                archive, used = reevaluate_archive(problem, archive, clock)
                clock.advance(used)
                rrng = stream(seed, STREAM_RESTART, generation)
                swarm, used = adaptive_restart(problem, archive.front_x, N, restart_config, clock, rrng, sel.env)
                clock.advance(used)
                archive = update_archive(archive, swarm.x, swarm.f, swarm.cv, sel.archive, rrng)
                record.restarts.append({"generation": generation, "T_before": previous_T, "T_after": env_time,
                                        "evaluations": clock.evaluation_counter})
                log.info("restart at generation %d: T %.3g -> %.3g", generation, previous_T, env_time)
                progress = (0, config.evaluations_per_time)
        if problem.time_dependent and budget is not None and clock.time_value != env_time:
            # change not detected (or detection off): measurement still follows the schedule
            log.info("generation %d: T %.3g -> %.3g without restart", generation, env_time, clock.time_value)
            record.missed_changes += 1
            close_environment(env_time)
            env_time = clock.time_value
            env_start = clock.evaluation_counter
            progress = (0, config.evaluations_per_time)

        guide = _choose_guide(archive, sel, config, rng)
        archive.guide = guide
        offspring, used = lion_generation(swarm, archive, guide, problem, config, swarm_config,
                                          progress, clock, rng)
        clock.advance(used)
        archive = update_archive(archive, offspring.x, offspring.f, offspring.cv, sel.archive, rng)
        if config.select_from_archive:
            offspring = Swarm.concat(offspring, Swarm.fresh(archive.x, archive.f, archive.cv))
        swarm = environmental_selection(swarm, offspring, N, sel.env, rng)
        generation += 1
        env_generation += 1
        if config.snapshot_every and generation % config.snapshot_every == 0:
            record.snapshots.append((generation, archive))

    if problem.time_dependent and budget is not None:
        close_environment(env_time)

    record.archive = archive
    record.generations = generation
    record.evaluations = clock.evaluation_counter
    ref = reference_front(problem, EnvironmentClock(initial_time=env_time), config.metric_points)
    record.metrics = measure(archive.feasible_front_f, ref, config)
    record.wall_clock = time.perf_counter() - started
    if not record.snapshots or record.snapshots[-1][0] != generation:
        record.snapshots.append((generation, archive))
    return record


# ------------------------------------------------------------------- MOPSO


def _grid_cells(F: np.ndarray, n_grid: int, inflation: float) -> np.ndarray:
    """Hypercube index of every repository member."""
    lo, hi = F.min(axis=0), F.max(axis=0)
    span = hi - lo
    lo = lo - inflation * span
    hi = hi + inflation * span
    width = np.where(hi > lo, (hi - lo) / n_grid, 1.0)
    sub = np.clip(((F - lo) / width).astype(int), 0, n_grid - 1)
    return np.ravel_multi_index(sub.T, (n_grid,) * F.shape[1])


def _roulette(weights: np.ndarray, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    p = weights / weights.sum()
    return rng.choice(len(p), size=size, p=p)


def _repository(x: np.ndarray, f: np.ndarray, cv: np.ndarray) -> np.ndarray:
    """Indices of the non-dominated, position-distinct members."""
    dom = dominance_matrix(f, cv if np.any(cv > 0) else None)
    nd = np.flatnonzero(~dom.any(axis=0))
    _, first = np.unique(x[nd], axis=0, return_index=True)
    return nd[np.sort(first)]


def run_mopso(config: ExperimentConfig, seed: int | None = None, problem: Problem | None = None) -> RunRecord:
    """Grid-repository MOPSO baseline without mutation."""
    seed = config.seeds[0] if seed is None else seed
    problem = problem or make_problem(config.problem, config.dim)
    N = config.resolved_population()
    capacity = config.resolved_archive()
    rng = stream(seed, STREAM_MOPSO)
    started = time.perf_counter()
    clock = _make_clock(config, problem)
    budget = _budget(config, problem)
    lo, hi = problem.lower, problem.upper

    X = lo + rng.random((N, problem.decision_dim)) * problem.span
    V = np.zeros_like(X)
    F, cv = problem.evaluate(X, clock), problem.violation(X)
    clock.advance(N)
    swarm = Swarm.fresh(X, F, cv)
    rep = _repository(X, F, cv)
    rep_x, rep_f, rep_cv = X[rep], F[rep], cv[rep]
    w = config.mopso_w
    generation = 0
    record = RunRecord("mopso", problem.name, problem.decision_dim, seed, Archive.empty(problem.decision_dim, problem.objective_dim, capacity), None, 0, 0, 0.0)
    env_time = clock.time_value

    while (generation < config.iterations) if budget is None else (clock.evaluation_counter < budget):
        if problem.time_dependent and clock.time_value != env_time:
            ref = reference_front(problem, EnvironmentClock(initial_time=env_time), config.metric_points)
            record.environments.append(EnvironmentResult(env_time, clock.evaluation_counter, measure(rep_f[rep_cv <= 0], ref, config)))
            env_time = clock.time_value
            rep_f = problem.evaluate(rep_x, clock)
            rep_cv = problem.violation(rep_x)
            swarm.pbest_f = problem.evaluate(swarm.pbest_x, clock)
            swarm.pbest_cv = problem.violation(swarm.pbest_x)
            clock.advance(len(rep_x) + N)
            keep = _repository(rep_x, rep_f, rep_cv)
            rep_x, rep_f, rep_cv = rep_x[keep], rep_f[keep], rep_cv[keep]

        cells = _grid_cells(rep_f, config.mopso_grid, config.mopso_grid_inflation)
        occupied, counts = np.unique(cells, return_counts=True)
        chosen_cells = occupied[_roulette(np.exp(-config.mopso_leader_pressure * counts), rng, N)]
        leaders = np.empty(N, dtype=int)
        for i, c in enumerate(chosen_cells):
            members = np.flatnonzero(cells == c)
            leaders[i] = members[rng.integers(len(members))]

        r1 = rng.random(X.shape)
        r2 = rng.random(X.shape)
        V = w * V + config.mopso_c1 * r1 * (swarm.pbest_x - X) + config.mopso_c2 * r2 * (rep_x[leaders] - X)
        X = X + V
        out = (X < lo) | (X > hi)
        V = np.where(out, -V, V)
        X = np.clip(X, lo, hi)
        F, cv = problem.evaluate(X, clock), problem.violation(X)
        clock.advance(N)
        swarm.x, swarm.f, swarm.cv = X, F, cv
        update_personal_bests(swarm, rng)

        ux = np.vstack([rep_x, X])
        uf = np.vstack([rep_f, F])
        ucv = np.concatenate([rep_cv, cv])
        keep = _repository(ux, uf, ucv)
        rep_x, rep_f, rep_cv = ux[keep], uf[keep], ucv[keep]
        while len(rep_x) > capacity:
            cells = _grid_cells(rep_f, config.mopso_grid, config.mopso_grid_inflation)
            occupied, counts = np.unique(cells, return_counts=True)
            c = occupied[_roulette(np.exp(config.mopso_deletion_pressure * counts), rng)]
            members = np.flatnonzero(cells == c)
            drop = members[rng.integers(len(members))]
            rep_x, rep_f, rep_cv = np.delete(rep_x, drop, 0), np.delete(rep_f, drop, 0), np.delete(rep_cv, drop)
        w *= config.mopso_w_damp
        generation += 1
        if config.snapshot_every and generation % config.snapshot_every == 0:
            record.snapshots.append((generation, Archive(rep_x.copy(), rep_f.copy(), rep_cv.copy(), capacity)))

    archive = Archive(rep_x, rep_f, rep_cv, capacity)
    if problem.time_dependent and budget is not None:
        ref = reference_front(problem, EnvironmentClock(initial_time=env_time), config.metric_points)
        record.environments.append(EnvironmentResult(env_time, clock.evaluation_counter, measure(archive.feasible_front_f, ref, config)))
    ref = reference_front(problem, EnvironmentClock(initial_time=env_time), config.metric_points)
    record.archive = archive
    record.metrics = measure(archive.feasible_front_f, ref, config)
    record.generations = generation
    record.evaluations = clock.evaluation_counter
    record.wall_clock = time.perf_counter() - started
    if not record.snapshots or record.snapshots[-1][0] != generation:
        record.snapshots.append((generation, archive))
    return record


ALGORITHM_RUNNERS = {"mf-dmolso": run_mf_dmolso, "mopso": run_mopso}


def run(config: ExperimentConfig, seed: int | None = None) -> RunRecord:
    return ALGORITHM_RUNNERS[config.algorithm](config, seed)


# ------------------------------------------------------------------- suites


SUMMARY_FIELDS = ["algorithm", "problem", "dim", "seed", "gd", "delta", "er", "n_known",
                  "evaluations", "generations", "wall_clock", "error"]


def run_suite(configs: Iterable[ExperimentConfig], output_dir: str | Path) -> list[dict]:
    """Run every ``(config, seed)``, write per-run outputs and the aggregate CSV.

    Per run: ``<tag>_metrics.json`` and ``<tag>_archive.csv``. Aggregates:
    ``aggregate.csv`` (one row per run) and ``summary.json`` (means per config).
    A failing run is recorded with its error message and the suite continues.
    """
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows: list[dict] = []
    summary: list[dict] = []
    for ci, config in enumerate(configs):
        config_rows = []
        for seed in config.seeds:
            tag = f"c{ci:02d}_{config.algorithm}_{config.problem}_d{config.dim}_s{seed}"
            row = {"algorithm": config.algorithm, "problem": config.problem, "dim": config.dim, "seed": seed}
            try:
                rec = run(config, seed)
                m = rec.metrics
                row.update(gd=m.gd if m else None, delta=m.delta if m else None, er=m.er if m else None,
                           n_known=m.n_known if m else len(rec.front), evaluations=rec.evaluations,
                           generations=rec.generations, wall_clock=rec.wall_clock, error="")
                try:
                    (out / f"{tag}_metrics.json").write_text(json.dumps(rec.to_json(), indent=2))
                    write_archive_csv(out / f"{tag}_archive.csv", rec.snapshots)
                except OSError as exc:
                    row["error"] = f"write failed: {exc}"
            except Exception as exc:  # noqa: BLE001 - a failing run must not abort the suite
                log.exception("run %s failed", tag)
                row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)
            config_rows.append(row)
        ok = [r for r in config_rows if r.get("gd") is not None]
        summary.append({
            "algorithm": config.algorithm, "problem": config.problem, "dim": config.dim,
            "runs": len(config_rows),
            "mean_gd": float(np.mean([r["gd"] for r in ok])) if ok else None,
            "mean_delta": float(np.mean([r["delta"] for r in ok])) if ok else None,
            "mean_er": float(np.mean([r["er"] for r in ok])) if ok else None,
        })
    with open(out / "aggregate.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: r.get(k, "") for k in SUMMARY_FIELDS})
    (out / "summary.json").write_text(json.dumps(summary, indent=2))
    return rows


# -------------------------------------------------------------- robot case


@dataclass
class RobotCaseResult:
    lion: RunRecord
    mopso: RunRecord | None
    knee_durations: np.ndarray
    knee_objectives: np.ndarray
    coverage_lion_over_mopso: float | None
    coverage_mopso_over_lion: float | None


def knee_point(F: np.ndarray) -> int:
    """Index of the front member farthest from the chord joining its two extremes.

    Objectives are scaled to [0, 1] first; fronts of one or two points
    return the member with the smallest first objective.
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if len(F) < 3:
        return int(np.argmin(F[:, 0]))
    span = np.ptp(F, axis=0)
    Fn = (F - F.min(axis=0)) / np.where(span > 0, span, 1.0)
    a, b = Fn[np.argmin(Fn[:, 0])], Fn[np.argmax(Fn[:, 0])]
    chord = b - a
    length = np.linalg.norm(chord)
    if length == 0:
        return int(np.argmin(F[:, 0]))
    rel = Fn - a
    dist = np.abs(rel[:, 0] * chord[1] - rel[:, 1] * chord[0]) / length
    return int(np.argmax(dist))


def run_robot_case(
    config: ExperimentConfig,
    seed: int | None = None,
    output_dir: str | Path | None = None,
    compare: bool = True,
    sample_dt: float = 0.01,
) -> RobotCaseResult:
    """Optimise the SR-1400 segment durations and export the knee trajectory.

    With ``compare`` the MOPSO baseline runs on the same settings and set
    coverage is reported in both directions. Files written to ``output_dir``:
    ``robot_archive.csv``, ``robot_trajectory.csv`` and, when compared,
    ``robot_mopso_archive.csv`` plus ``robot_summary.json``.
    """
    seed = config.seeds[0] if seed is None else seed
    config = config.replace(problem="robot", dim=3)
    lion = run_mf_dmolso(config.replace(algorithm="mf-dmolso"), seed)
    base = run_mopso(config.replace(algorithm="mopso"), seed) if compare else None

    front_idx = lion.archive.front_index
    feasible = front_idx[lion.archive.cv[front_idx] <= 0]
    if feasible.size == 0:
        raise RuntimeError("robot run found no feasible duration triple")
    k = feasible[knee_point(lion.archive.f[feasible])]
    durations = lion.archive.x[k].copy()

    c_ab = c_ba = None
    if base is not None and len(base.front) and len(lion.front):
        c_ab = set_coverage(lion.front, base.front)
        c_ba = set_coverage(base.front, lion.front)

    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_archive_csv(out / "robot_archive.csv", [(lion.generations, lion.archive)])
        write_trajectory_csv(profile(solve_353(WaypointSet(), tuple(durations.tolist())), sample_dt), out / "robot_trajectory.csv")
        summary = {
            "seed": seed,
            "knee_durations_s": durations.tolist(),
            "knee_total_time_s": float(lion.archive.f[k, 0]),
            "knee_max_acceleration_degps2": float(lion.archive.f[k, 1]),
            "coverage_lion_over_mopso": c_ab,
            "coverage_mopso_over_lion": c_ba,
            "front_size": int(len(lion.front)),
        }
        if base is not None:
            write_archive_csv(out / "robot_mopso_archive.csv", [(base.generations, base.archive)])
        (out / "robot_summary.json").write_text(json.dumps(summary, indent=2))

    return RobotCaseResult(lion, base, durations, lion.archive.f[k].copy(), c_ab, c_ba)

