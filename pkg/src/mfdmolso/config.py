"""Experiment configuration and its INI file form.

A config file has an ``[experiment]`` section plus optional ``[swarm]``,
``[levy]``, ``[restart]``, ``[mopso]`` and ``[metrics]`` sections; keys match the
field names of :class:`ExperimentConfig` (section names are only grouping).
List values are comma separated.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any

from mfdmolso.problems import make_problem

ALGORITHMS = ("mf-dmolso", "mopso")
DYNAMIC_PROBLEMS = ("dmop1", "g2")
# environment times used when a dynamic problem is configured without any
DEFAULT_DYNAMIC_TIMES = (0.0, 1.0, 2.0, 3.0)


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a run; unset sizes follow the problem's objective count."""

    problem: str = "zdt1"
    dim: int = 30
    algorithm: str = "mf-dmolso"
    population_size: int | None = None
    iterations: int = 400
    archive_capacity: int | None = None
    seeds: list[int] = field(default_factory=lambda: [0])

    # swarm
    adult_ratio: float = 0.2
    tent_alpha: float = 0.7
    step_fraction: float = 0.1
    opposite_range: str = "bounds"
    boundary: str = "clamp"
    gamma_mode: str = "dimension"
    select_from_archive: bool = True
    guide_distance: str = "normalized"

    # crowding, mutation and reference points
    crowding_space: str = "decision"
    crowding_objective: int = 0
    levy_beta: float = 1.5
    levy_clamp: float = 1.99
    mutation_stride: int = 2
    levy_boundary: str = "clamp"
    levy_per_dimension: bool = False
    ref_divisions: int | None = None

    # dynamic environments
    dynamic_times: list[float] = field(default_factory=list)
    evaluations_per_time: int = 15_000
    restart_enabled: bool = True
    cold_fraction: float = 0.5
    cauchy_fraction: float = 0.1
    sentinel_fraction: float = 0.1
    change_epsilon: float = 1e-10

    # MOPSO baseline
    mopso_w: float = 0.9
    mopso_w_damp: float = 0.55
    mopso_c1: float = 1.0
    mopso_c2: float = 2.0
    mopso_grid: int = 7
    mopso_grid_inflation: float = 0.1
    mopso_leader_pressure: float = 2.0
    mopso_deletion_pressure: float = 2.0

    # metrics and output
    metric_points: int | None = None
    gd_p: float = 2.0
    er_threshold: float = 0.01
    er_mode: str = "known"
    snapshot_every: int = 0

    def __post_init__(self) -> None:
        self.problem = self.problem.lower()
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.problem in DYNAMIC_PROBLEMS and not self.dynamic_times:
            self.dynamic_times = list(DEFAULT_DYNAMIC_TIMES)

    @property
    def n_objectives(self) -> int:
        return make_problem(self.problem, self.dim).objective_dim

    def resolved_population(self) -> int:
        if self.population_size is not None:
            return self.population_size
        return 120 if self.n_objectives == 2 else 500

    def resolved_archive(self) -> int:
        if self.archive_capacity is not None:
            return self.archive_capacity
        return 100 if self.n_objectives == 2 else 500

    def replace(self, **changes: Any) -> ExperimentConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


def _coerce(raw: str, name: str) -> Any:
    raw = raw.strip()
    hint = {f.name: f.type for f in fields(ExperimentConfig)}[name]
    if raw.lower() in ("none", "") and "None" in str(hint):
        return None
    if "list[int]" in str(hint):
        return [int(v) for v in raw.split(",") if v.strip()]
    if "list[float]" in str(hint):
        return [float(v) for v in raw.split(",") if v.strip()]
    if "bool" in str(hint):
        return raw.lower() in ("1", "true", "yes", "on")
    if "int" in str(hint):
        return int(raw)
    if "float" in str(hint):
        return float(raw)
    return raw


def load_config(path: str | Path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Read an INI experiment file on top of ``base`` (defaults when omitted)."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(path)
    known = {f.name for f in fields(ExperimentConfig)}
    values = dataclasses.asdict(base or ExperimentConfig())
    for section in parser.sections():
        for key, raw in parser.items(section):
            if key not in known:
                raise ValueError(f"{path}: unknown key {key!r} in [{section}]")
            values[key] = _coerce(raw, key)
    return ExperimentConfig(**values)


def dump_config(config: ExperimentConfig) -> str:
    """INI text for ``config`` (single ``[experiment]`` section)."""
    parser = configparser.ConfigParser()
    out = {}
    for k, v in config.to_dict().items():
        if isinstance(v, list):
            out[k] = ", ".join(str(x) for x in v)
        else:
            out[k] = "none" if v is None else str(v)
    parser["experiment"] = out
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
