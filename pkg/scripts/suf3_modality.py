"""Where do the final solutions land on SUF3?

Runs MOEA/D-MM-TCH and classic MOEA/D-TCH for a few seeds, reports the
per-subset coverage (mean distance from each subset's reference points to
the nearest archive member) and optionally draws the decision-space
scatter of one run per algorithm.

    python scripts/suf3_modality.py [--seeds 11] [--plot suf3.png]
"""

from __future__ import annotations

import argparse

import numpy as np

from mmopt.baselines import MoeadConfig, moead_run
from mmopt.indicators import igdx_contributions
from mmopt.moeadmm import MoeadMmConfig, run
from mmopt.problems import make_problem, sample_reference_set, subset_index


def coverage(problem, ref, X) -> np.ndarray:
    c = igdx_contributions(X, ref.decision_points)
    label = subset_index(problem, ref.decision_points)
    return np.array([c[label == k].mean() for k in range(problem.pareto_subset_count)])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=11)
    ap.add_argument("--budget", type=int, default=100_000)
    ap.add_argument("--plot")
    args = ap.parse_args()

    problem = make_problem("suf3")
    ref = sample_reference_set(problem, 10_000, seed=1)
    runners = {
        "moead-mm-tch": lambda s: run(MoeadMmConfig(budget=args.budget, seed=s), problem),
        "moead-tch": lambda s: moead_run(MoeadConfig(budget=args.budget, seed=s), problem),
    }
    first = {}
    for name, go in runners.items():
        both = 0
        for seed in range(1, args.seeds + 1):
            X = np.array([s.x for s in go(seed)])
            cov = coverage(problem, ref, X)
            both += bool((cov <= 0.05).all())
            first.setdefault(name, X)
            print(f"{name:14s} seed {seed:2d}  subset coverage {np.array2string(cov, precision=4)}")
        print(f"{name}: both subsets covered in {both}/{args.seeds} runs\n")

    if args.plot:
        import matplotlib.pyplot as plt

        fig, axes = plt.subplots(1, 2, figsize=(8, 4), sharey=True)
        for ax, (name, X) in zip(axes, first.items()):
            ax.scatter(ref.decision_points[:, 0], ref.decision_points[:, 1], s=1, c="0.8")
            ax.scatter(X[:, 0], X[:, 1], s=8)
            ax.set_title(name)
            ax.set_xlabel("x1")
        axes[0].set_ylabel("x2")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)


if __name__ == "__main__":
    main()
