"""Experiment execution: every (algorithm, problem, run) cell, resumable."""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from mmopt.baselines import MoeadAdConfig, MoeadConfig, moead_ad_run, moead_run
from mmopt.bench.config import AlgorithmSpec, ExperimentConfig, ProblemSpec
from mmopt.core import Problem, Solution
from mmopt.indicators import evaluate_archive
from mmopt.moeadmm import MoeadMmConfig
from mmopt.moeadmm import run as moeadmm_run
from mmopt.problems import ReferenceSet, cached_reference_set, read_points, write_points

log = logging.getLogger(__name__)


@dataclass
class RunRecord:
    algorithm: str
    problem: str
    run: int
    seed: int
    igd_plus: float
    igdx: float
    hv: float
    archive_size: int
    seconds: float
    archive_path: str

    @classmethod
    def load(cls, path: str | Path) -> RunRecord:
        with open(path) as fh:
            return cls(**json.load(fh))


def run_algorithm(spec: AlgorithmSpec, problem: Problem, population: int, budget: int, seed: int) -> list[Solution]:
    if spec.kind == "moead-mm":
        cfg = MoeadMmConfig(N=population, mu=spec.mu, scalarizer=spec.scalarizer, theta=spec.theta,
                            budget=budget, seed=seed)
        return moeadmm_run(cfg, problem)
    if spec.kind == "moead":
        cfg = MoeadConfig(N=population, T=spec.T, scalarizer=spec.scalarizer, theta=spec.theta,
                          budget=budget, seed=seed)
        return moead_run(cfg, problem)
    cfg = MoeadAdConfig(n_weights=population, scalarizer=spec.scalarizer, theta=spec.theta, budget=budget, seed=seed)
    return moead_ad_run(cfg, problem)


def _cell_paths(out: Path, alg: str, problem: str, run: int) -> tuple[Path, Path]:
    stem = f"run{run:03d}"
    return out / "records" / alg / problem / f"{stem}.json", out / "archives" / alg / problem / f"{stem}.txt"


def refset_dir(out: Path) -> Path:
    return out / "refsets"


def reference_for(cfg: ExperimentConfig, spec: ProblemSpec) -> ReferenceSet:
    return cached_reference_set(spec.build(), cfg.reference_size, cfg.base_seed, refset_dir(Path(cfg.output_dir)))


def run_cell(alg: AlgorithmSpec, pspec: ProblemSpec, run: int, cfg: ExperimentConfig) -> RunRecord:
    """Execute and score one cell, writing its archive and then its record."""
    out = Path(cfg.output_dir)
    problem = pspec.build()
    ref = reference_for(cfg, pspec)
    seed = cfg.seed_for(run)
    start = time.perf_counter()
    archive = run_algorithm(alg, problem, cfg.population, cfg.budget, seed)
    seconds = time.perf_counter() - start
    X = np.array([s.x for s in archive])
    F = np.array([s.f for s in archive])
    rec_path, arc_path = _cell_paths(out, alg.id, problem.name, run)
    write_points(arc_path, X, F, algorithm=alg.id, problem=problem.name, run=run, seed=seed)
    # score what was written so the archive file reproduces the record exactly
    _, X, F = read_points(arc_path)
    report = evaluate_archive(X, F, ref.decision_points, ref.objective_points)
    record = RunRecord(alg.id, problem.name, run, seed, report.igd_plus, report.igdx, report.hv,
                       report.archive_size, seconds, str(arc_path.relative_to(out)))
    rec_path.parent.mkdir(parents=True, exist_ok=True)
    tmp = rec_path.with_suffix(".tmp")
    tmp.write_text(json.dumps(asdict(record), indent=1))
    os.replace(tmp, rec_path)
    log.info("%s on %s run %d: IGDX %.4g IGD+ %.4g (%.1fs)", alg.id, problem.name, run,
             record.igdx, record.igd_plus, seconds)
    return record


def _run_cell_args(args) -> RunRecord:
    return run_cell(*args)


def run_experiment(cfg: ExperimentConfig) -> list[RunRecord]:
    """Run every missing cell of ``cfg`` and return all records in grid order.

    Cells whose record file already exists are loaded instead of rerun, so an
    interrupted experiment resumes where it stopped.
    """
    cfg.validate()
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for pspec in cfg.problems:
        reference_for(cfg, pspec)

    grid = [(a, p, r) for a in cfg.all_algorithms() for p in cfg.problems for r in range(cfg.runs)]
    todo = [(a, p, r, cfg) for a, p, r in grid if not _cell_paths(out, a.id, p.id, r)[0].exists()]
    log.info("%d cells, %d to run", len(grid), len(todo))
    if cfg.jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            list(pool.map(_run_cell_args, todo))
    else:
        for args in todo:
            run_cell(*args)
    return [RunRecord.load(_cell_paths(out, a.id, p.id, r)[0]) for a, p, r in grid]


def load_records(output_dir: str | Path) -> list[RunRecord]:
    root = Path(output_dir) / "records"
    paths = sorted(root.glob("*/*/run*.json"))
    return [RunRecord.load(p) for p in paths]
