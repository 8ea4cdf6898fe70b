"""Sub-population size sweep on the multi-polygon problems.

    python scripts/mu_sweep.py [--runs 31] [--dims 2 4 6 8 10] [--plot sweep.png]

Writes ``results/mu_sweep/report/mu_sweep.tsv`` (median IGDX and IGD+ per
mu and D) and optionally a two-panel plot of it.
"""

from __future__ import annotations

import argparse
import csv
import logging
from pathlib import Path

from mmopt.bench import ExperimentConfig, ProblemSpec, export, run_experiment, summarize


def plot(tsv: Path, dest: Path) -> None:
    import matplotlib.pyplot as plt

    rows = list(csv.DictReader(open(tsv), delimiter="\t"))
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    for d in sorted({int(r["D"]) for r in rows}):
        sub = sorted((r for r in rows if int(r["D"]) == d), key=lambda r: int(r["mu"]))
        mus = [int(r["mu"]) for r in sub]
        axes[0].plot(mus, [float(r["median_igdx"]) for r in sub], marker="o", label=f"D={d}")
        axes[1].plot(mus, [float(r["median_igd_plus"]) for r in sub], marker="o", label=f"D={d}")
    for ax, name in zip(axes, ("median IGDX", "median IGD+")):
        ax.set_xlabel("mu")
        ax.set_ylabel(name)
        ax.set_yscale("log")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(dest, dpi=150)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--runs", type=int, default=31)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 4, 6, 8, 10])
    ap.add_argument("--mu", type=int, nargs="+", default=[2, 3, 4, 5, 6])
    ap.add_argument("--out", default="results/mu_sweep")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--plot", type=Path)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = ExperimentConfig(
        problems=[ProblemSpec("polygon", d) for d in args.dims], algorithms=[], mu_sweep=args.mu,
        runs=args.runs, output_dir=args.out, jobs=args.jobs,
        baseline=f"moead-mm-tch-mu{4 if 4 in args.mu else args.mu[0]}",
    )
    records = run_experiment(cfg)
    export(summarize(records, cfg.baseline), records, cfg.output_dir)
    tsv = Path(cfg.output_dir) / "report" / "mu_sweep.tsv"
    print(tsv.read_text())
    if args.plot:
        plot(tsv, args.plot)


if __name__ == "__main__":
    main()
