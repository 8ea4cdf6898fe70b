"""Command line entry point: ``mmopt {run,score,refset,report,sweep}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from pathlib import Path

from mmopt.bench.config import (
    BENCHMARK_ALGORITHMS,
    BENCHMARK_PROBLEMS,
    AlgorithmSpec,
    ExperimentConfig,
    ProblemSpec,
    load_config,
)
from mmopt.bench.export import comparison_table, export
from mmopt.bench.runner import load_records, run_experiment
from mmopt.bench.stats import summarize
from mmopt.core import ConfigurationError
from mmopt.indicators import evaluate_archive
from mmopt.problems import cached_reference_set, make_problem, read_points, sample_reference_set, write_reference_set


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="TOML experiment config")
    p.add_argument("--seed", type=int, help="base seed (run k uses seed + k)")
    p.add_argument("--runs", type=int, help="independent runs per cell")
    p.add_argument("--budget", type=int, help="evaluations per run")
    p.add_argument("--pop", type=int, help="population size N")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--jobs", type=int, help="worker processes")
    p.add_argument("--baseline", help="algorithm id the significance marks compare against")


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    changes = {k: v for k, v in {
        "base_seed": args.seed, "runs": args.runs, "budget": args.budget, "population": args.pop,
        "output_dir": None if args.out is None else str(args.out), "jobs": args.jobs, "baseline": args.baseline,
    }.items() if v is not None}
    cfg = replace(cfg, **changes)
    cfg.validate()
    return cfg


def _report(cfg_out: Path, baseline: str, records=None) -> None:
    records = load_records(cfg_out) if records is None else records
    summary = summarize(records, baseline)
    paths = export(summary, records, cfg_out)
    for ind in ("igdx", "igd_plus"):
        print(f"\n{ind} (mean over runs, marks vs {baseline}):")
        for row in comparison_table(summary, ind):
            print("  " + "\t".join(row))
    print(f"\nwrote {len(paths)} files under {cfg_out / 'report'}")


def cmd_run(args) -> None:
    if args.config:
        cfg = load_config(args.config)
    else:
        algs = [AlgorithmSpec.parse(a) for a in args.algorithm] if args.algorithm else list(BENCHMARK_ALGORITHMS)
        if args.mu is not None or args.scalarizer is not None:
            algs = [replace(a, mu=args.mu or a.mu, scalarizer=args.scalarizer or a.scalarizer)
                    if a.kind == "moead-mm" else a for a in algs]
        probs = [ProblemSpec.parse(p) for p in args.problem] if args.problem else list(BENCHMARK_PROBLEMS)
        cfg = ExperimentConfig(problems=probs, algorithms=algs)
        if not any(a.id == cfg.baseline for a in algs):
            cfg.baseline = algs[0].id
    cfg = _apply_overrides(cfg, args)
    records = run_experiment(cfg)
    _report(Path(cfg.output_dir), cfg.baseline, records)


def cmd_sweep(args) -> None:
    dims = args.dims or [2, 4, 6, 8, 10]
    mus = args.mu or [2, 3, 4, 5, 6]
    cfg = ExperimentConfig(
        problems=[ProblemSpec("polygon", d) for d in dims],
        algorithms=[],
        mu_sweep=mus,
        baseline=f"moead-mm-{args.scalarizer}-mu{4 if 4 in mus else mus[0]}",
        output_dir="results/mu_sweep",
    )
    if args.scalarizer != "tch":
        cfg.algorithms = [AlgorithmSpec("moead-mm", args.scalarizer, mu, label=f"moead-mm-{args.scalarizer}-mu{mu}")
                          for mu in mus]
        cfg.mu_sweep = []
    cfg = _apply_overrides(cfg, args)
    records = run_experiment(cfg)
    _report(Path(cfg.output_dir), cfg.baseline, records)


def cmd_report(args) -> None:
    out = args.out or (Path(load_config(args.config).output_dir) if args.config else Path("results"))
    baseline = args.baseline or (load_config(args.config).baseline if args.config else "moead-mm-tch")
    _report(out, baseline)


def cmd_refset(args) -> None:
    problem = make_problem(args.problem, args.dim)
    seed = args.seed if args.seed is not None else 1
    if args.out:
        ref = cached_reference_set(problem, args.n, seed, args.out)
        print(Path(args.out) / f"{problem.name}_n{args.n}_s{seed}.txt")
    else:
        ref = sample_reference_set(problem, args.n, seed=seed)
        write_reference_set("/dev/stdout", ref)


def cmd_score(args) -> None:
    header, X, F = read_points(args.archive)
    name = args.problem or header.get("problem")
    if not name:
        raise ConfigurationError("archive has no problem in its header; pass --problem")
    problem = make_problem(name, args.dim)
    seed = args.seed if args.seed is not None else 1
    if args.refset:
        _, RX, RF = read_points(args.refset)
    else:
        ref = sample_reference_set(problem, args.n, seed=seed)
        RX, RF = ref.decision_points, ref.objective_points
    print(json.dumps(asdict(evaluate_archive(X, F, RX, RF))))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmopt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an experiment")
    _add_common(p)
    p.add_argument("--problem", action="append", help="problem id (repeatable), e.g. suf3, polygon-d4")
    p.add_argument("--algorithm", action="append", help="algorithm id (repeatable), e.g. moead-mm-tch")
    p.add_argument("--mu", type=int, help="sub-population size for MOEA/D-MM")
    p.add_argument("--scalarizer", choices=("tch", "pbi"), help="scalarizer for MOEA/D-MM")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sub-population size sweep on multi-polygon problems")
    _add_common(p)
    p.add_argument("--mu", type=int, nargs="+", help="mu values (default 2 3 4 5 6)")
    p.add_argument("--dims", type=int, nargs="+", help="decision dimensions (default 2 4 6 8 10)")
    p.add_argument("--scalarizer", choices=("tch", "pbi"), default="tch")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="summary and significance tables from stored records")
    _add_common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("refset", help="generate (and cache) a reference set")
    p.add_argument("--problem", required=True)
    p.add_argument("--dim", type=int)
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, help="cache directory; prints to stdout when omitted")
    p.set_defaults(func=cmd_refset)

    p = sub.add_parser("score", help="indicators for an archive file")
    p.add_argument("archive", type=Path)
    p.add_argument("--problem")
    p.add_argument("--dim", type=int)
    p.add_argument("--refset", type=Path, help="reference-set file (sampled when omitted)")
    p.add_argument("-n", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        args.func(args)
    except ConfigurationError as exc:
        print(f"mmopt: configuration error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
