"""Tables, long-format records, visualization archives and mu-sweep curves."""

from __future__ import annotations

import csv
import json
import re
import shutil
from dataclasses import asdict
from pathlib import Path

import numpy as np

from mmopt.bench.stats import INDICATORS, MARK_BETTER, MARK_SAME, MARK_WORSE, StatsSummary
from mmopt.problems import make_problem

_MU_SUFFIX = re.compile(r"-mu(\d+)$")


def sci(value: float) -> str:
    """``1.2359e-2`` style: four decimals, unpadded signed exponent."""
    mantissa, exp = f"{value:.4e}".split("e")
    return f"{mantissa}e{int(exp):+d}"


def _problem_dims(problem_id: str) -> tuple[str, int, int]:
    p = make_problem(problem_id)
    family = "polygon" if problem_id.startswith("polygon") else problem_id
    return family, p.n_obj, p.n_var


def comparison_table(summary: StatsSummary, indicator: str) -> list[list[str]]:
    """Comparison table rows: problem, M, D, then one column per algorithm (baseline first)."""
    algs = [summary.baseline] + [a for a in summary.algorithms if a != summary.baseline]
    rows = [["problem", "M", "D", *algs]]
    for p in summary.problems:
        family, m, d = _problem_dims(p)
        row = [family, str(m), str(d)]
        for a in algs:
            cell = sci(summary.cells[(a, p)].mean[indicator])
            if a != summary.baseline:
                cell += " " + summary.marks[(a, p, indicator)]
            if summary.best[(p, indicator)] == a:
                cell += " *"
            row.append(cell)
        rows.append(row)
    tally = ["+/−/≈", "", "", "baseline"]
    for a in algs[1:]:
        c = summary.counts(a, indicator)
        tally.append(f"{c[MARK_BETTER]}/{c[MARK_WORSE]}/{c[MARK_SAME]}")
    rows.append(tally)
    return rows


def _write_tsv(path: Path, rows) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, delimiter="\t", lineterminator="\n").writerows(rows)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def median_run(records, key: str):
    """Record holding the (lower) median of ``key``; ties broken by run index."""
    ordered = sorted(records, key=lambda r: (getattr(r, key), r.run))
    return ordered[(len(ordered) - 1) // 2]


def sweep_curves(summary: StatsSummary) -> list[list[str]]:
    rows = [["problem", "D", "mu", "median_igdx", "median_igd_plus", "mean_igdx", "mean_igd_plus"]]
    for a in summary.algorithms:
        m = _MU_SUFFIX.search(a)
        if not m:
            continue
        for p in summary.problems:
            c = summary.cells[(a, p)]
            _, _, d = _problem_dims(p)
            rows.append([p, str(d), m.group(1), repr(c.median["igdx"]), repr(c.median["igd_plus"]),
                         repr(c.mean["igdx"]), repr(c.mean["igd_plus"])])
    return rows


def export(summary: StatsSummary, records, output_dir: str | Path) -> list[Path]:
    """Write every report artefact under ``output_dir/report``; return the paths."""
    out = Path(output_dir)
    report = out / "report"
    report.mkdir(parents=True, exist_ok=True)
    written = []

    for ind in INDICATORS:
        path = report / f"table_{ind}.tsv"
        _write_tsv(path, comparison_table(summary, ind))
        written.append(path)

    long_rows = [["algorithm", "problem", "run", "seed", "indicator", "value"]]
    for r in sorted(records, key=lambda r: (r.algorithm, r.problem, r.run)):
        for ind in INDICATORS:
            long_rows.append([r.algorithm, r.problem, r.run, r.seed, ind, repr(getattr(r, ind))])
    _write_tsv(report / "runs_long.tsv", long_rows)
    written.append(report / "runs_long.tsv")

    with open(report / "runs.jsonl", "w") as fh:
        for r in sorted(records, key=lambda r: (r.algorithm, r.problem, r.run)):
            fh.write(json.dumps(asdict(r)) + "\n")
    written.append(report / "runs.jsonl")

    vis_rows = [["algorithm", "problem", "median_hv_run", "median_igdx_run", "archive"]]
    for a in summary.algorithms:
        for p in summary.problems:
            cell = [r for r in records if r.algorithm == a and r.problem == p]
            by_hv, by_igdx = median_run(cell, "hv"), median_run(cell, "igdx")
            dest = report / "archives" / f"{a}__{p}__median_hv.txt"
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(out / by_hv.archive_path, dest)
            vis_rows.append([a, p, by_hv.run, by_igdx.run, str(dest.relative_to(out))])
            written.append(dest)
    _write_tsv(report / "visualization.tsv", vis_rows)
    written.append(report / "visualization.tsv")

    sweep = sweep_curves(summary)
    if len(sweep) > 1:
        _write_tsv(report / "mu_sweep.tsv", sweep)
        written.append(report / "mu_sweep.tsv")
    return written

