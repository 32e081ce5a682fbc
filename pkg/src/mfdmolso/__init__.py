"""Multi-strategy dynamic multi-objective lion swarm optimisation."""

from mfdmolso.config import ExperimentConfig, dump_config, load_config
from mfdmolso.metrics import error_rate, generational_distance, set_coverage, spread_delta
from mfdmolso.problems import EnvironmentClock, Problem, make_problem, sample_true_pf
from mfdmolso.runner import RunRecord, run, run_mf_dmolso, run_mopso, run_robot_case, run_suite

__all__ = [
    "EnvironmentClock",
    "ExperimentConfig",
    "Problem",
    "RunRecord",
    "dump_config",
    "error_rate",
    "generational_distance",
    "load_config",
    "make_problem",
    "run",
    "run_mf_dmolso",
    "run_mopso",
    "run_robot_case",
    "run_suite",
    "sample_true_pf",
    "set_coverage",
    "spread_delta",
]

__version__ = "0.1.0"
