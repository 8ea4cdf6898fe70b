"""Run the full comparison grid and write the IGDX / IGD+ / HV tables.

    python scripts/reproduce_tables.py [--config configs/tables.toml] [--jobs 4]

Interrupted runs resume: finished cells are read back from disk.
"""

from __future__ import annotations

import argparse
import logging
from dataclasses import replace

from mmopt.bench import export, load_config, run_experiment, summarize
from mmopt.bench.export import comparison_table


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config", default="configs/tables.toml")
    ap.add_argument("--jobs", type=int)
    ap.add_argument("--runs", type=int)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = load_config(args.config)
    if args.jobs:
        cfg = replace(cfg, jobs=args.jobs)
    if args.runs:
        cfg = replace(cfg, runs=args.runs)
    records = run_experiment(cfg)
    summary = summarize(records, cfg.baseline)
    export(summary, records, cfg.output_dir)
    for ind in ("igdx", "igd_plus"):
        print(f"\n== {ind} ==")
        for row in comparison_table(summary, ind):
            print("\t".join(row))


if __name__ == "__main__":
    main()
