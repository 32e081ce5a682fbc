"""Command line entry point: ``python -m mfdmolso {run,suite,robot}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from mfdmolso.archive import write_archive_csv
from mfdmolso.config import ALGORITHMS, ExperimentConfig, load_config
from mfdmolso.problems import PROBLEM_NAMES
from mfdmolso.runner import run, run_robot_case, run_suite


def _base_config(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {
        "problem": args.problem,
        "dim": args.dim,
        "population_size": args.pop,
        "iterations": args.iters,
        "archive_capacity": args.archive,
        "algorithm": args.algo,
    }
    if args.seed is not None:
        overrides["seeds"] = list(args.seed)
    return config.replace(**{k: v for k, v in overrides.items() if v is not None})


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="INI experiment file; flags override its values")
    p.add_argument("--problem", choices=PROBLEM_NAMES)
    p.add_argument("--dim", type=int, help="decision-space dimension")
    p.add_argument("--pop", type=int, help="population size")
    p.add_argument("--iters", type=int, help="generations (static problems)")
    p.add_argument("--archive", type=int, help="archive capacity")
    p.add_argument("--seed", type=int, nargs="+", help="one or more seeds")
    p.add_argument("--algo", choices=ALGORITHMS)
    p.add_argument("--out", type=Path, default=Path("results"), help="output directory")


def _cmd_run(args: argparse.Namespace) -> int:
    config = _base_config(args)
    args.out.mkdir(parents=True, exist_ok=True)
    for seed in config.seeds:
        record = run(config, seed)
        tag = f"{config.algorithm}_{config.problem}_d{config.dim}_s{seed}"
        (args.out / f"{tag}_metrics.json").write_text(json.dumps(record.to_json(), indent=2))
        write_archive_csv(args.out / f"{tag}_archive.csv", record.snapshots)
        m = record.metrics
        if m is None:
            print(f"seed {seed}: {len(record.front)} front members, {record.wall_clock:.1f}s")
        else:
            print(f"seed {seed}: GD={m.gd:.4e} Delta={m.delta:.4e} ER={m.er:.4f} "
                  f"n={m.n_known} ({record.wall_clock:.1f}s)")
    return 0


def _cmd_suite(args: argparse.Namespace) -> int:
    configs = [load_config(path) for path in args.configs]
    rows = run_suite(configs, args.out)
    failed = [r for r in rows if r.get("error")]
    print(f"{len(rows)} runs, {len(failed)} failed; aggregate written to {args.out / 'aggregate.csv'}")
    return 1 if failed else 0


def _cmd_robot(args: argparse.Namespace) -> int:
    config = _base_config(args)
    defaults = {"population_size": 400, "archive_capacity": 200, "iterations": 200}
    config = config.replace(**{k: v for k, v in defaults.items() if getattr(args, _FLAG[k]) is None and not args.config})
    result = run_robot_case(config, config.seeds[0], args.out, compare=not args.no_compare)
    t1, t2, t3 = result.knee_durations
    total, acc = result.knee_objectives
    print(f"knee durations: {t1:.4f} {t2:.4f} {t3:.4f} s; total {total:.4f} s; max acceleration {acc:.3f} deg/s^2")
    if result.coverage_lion_over_mopso is not None:
        print(f"C(MF-DMOLSO, MOPSO) = {result.coverage_lion_over_mopso:.4f}; "
              f"C(MOPSO, MF-DMOLSO) = {result.coverage_mopso_over_lion:.4f}")
    return 0


_FLAG = {"population_size": "pop", "archive_capacity": "archive", "iterations": "iters"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfdmolso", description="Lion swarm multi-objective optimiser")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration for its seeds")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_suite = sub.add_parser("suite", help="run several configuration files and aggregate")
    p_suite.add_argument("configs", nargs="*", type=Path)
    p_suite.add_argument("--out", type=Path, default=Path("results"))
    p_suite.set_defaults(func=_cmd_suite)

    p_robot = sub.add_parser("robot", help="SR-1400 trajectory case with MOPSO comparison")
    _add_common(p_robot)
    p_robot.add_argument("--no-compare", action="store_true", help="skip the MOPSO baseline")
    p_robot.set_defaults(func=_cmd_robot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
