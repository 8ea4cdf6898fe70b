"""Benchmark harness: multi-seed experiments, scoring, significance tests, exports."""

from mmopt.bench.config import AlgorithmSpec, ExperimentConfig, ProblemSpec, load_config
from mmopt.bench.export import export
from mmopt.bench.runner import RunRecord, load_records, run_experiment
from mmopt.bench.stats import StatsSummary, summarize, wilcoxon_rank_sum

__all__ = [
    "AlgorithmSpec",
    "ExperimentConfig",
    "ProblemSpec",
    "RunRecord",
    "StatsSummary",
    "export",
    "load_config",
    "load_records",
    "run_experiment",
    "summarize",
    "wilcoxon_rank_sum",
]
