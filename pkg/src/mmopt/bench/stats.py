"""Wilcoxon rank-sum test and per-cell summary statistics."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from mmopt.core import ContractError

ALPHA = 0.05
EXACT_LIMIT = 12
INDICATORS = ("igdx", "igd_plus", "hv")
LOWER_IS_BETTER = {"igdx": True, "igd_plus": True, "hv": False}
MARK_BETTER, MARK_SAME, MARK_WORSE = "+", "≈", "−"


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=lambda k: values[k])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def wilcoxon_rank_sum(a: Sequence[float], b: Sequence[float]) -> float:
    """Two-sided rank-sum (Mann-Whitney U) p-value.

    Exact enumeration of all rank splits when ``len(a) + len(b) <= 12``,
    otherwise the normal approximation with tie and continuity corrections.
    """
    a, b = [float(v) for v in a], [float(v) for v in b]
    n1, n2 = len(a), len(b)
    if n1 < 3 or n2 < 3:
        raise ContractError(f"rank-sum test needs at least 3 values per sample, got {n1} and {n2}")
    pooled = a + b
    if len(set(pooled)) == 1:
        return 1.0
    ranks = average_ranks(pooled)
    n = n1 + n2
    offset = n1 * (n1 + 1) / 2.0
    u1 = sum(ranks[:n1]) - offset
    centre = n1 * n2 / 2.0
    observed = abs(u1 - centre)

    if n <= EXACT_LIMIT:
        extreme = total = 0
        for subset in itertools.combinations(range(n), n1):
            u = sum(ranks[k] for k in subset) - offset
            total += 1
            if abs(u - centre) >= observed - 1e-9:
                extreme += 1
        return extreme / total

    ties = sum(t ** 3 - t for t in Counter(pooled).values())
    var = n1 * n2 / 12.0 * ((n + 1) - ties / (n * (n - 1)))
    if var <= 0:
        return 1.0
    zscore = (observed - 0.5) / math.sqrt(var)
    if zscore <= 0:
        return 1.0
    return min(1.0, math.erfc(zscore / math.sqrt(2.0)))


@dataclass
class CellStats:
    n: int
    mean: dict[str, float]
    median: dict[str, float]
    std: dict[str, float]


@dataclass
class StatsSummary:
    """Summary over an (algorithm x problem) grid.

    ``marks[(alg, problem, indicator)]`` compares ``alg`` against the
    baseline: ``+`` significantly better, ``−`` significantly worse,
    ``≈`` otherwise.
    """

    algorithms: list[str]
    problems: list[str]
    baseline: str
    cells: dict[tuple[str, str], CellStats]
    marks: dict[tuple[str, str, str], str]
    pvalues: dict[tuple[str, str, str], float]
    best: dict[tuple[str, str], str] = field(default_factory=dict)

    def counts(self, alg: str, indicator: str) -> dict[str, int]:
        out = {MARK_BETTER: 0, MARK_WORSE: 0, MARK_SAME: 0}
        for p in self.problems:
            out[self.marks[(alg, p, indicator)]] += 1
        return out


class IncompleteExperimentError(RuntimeError):
    pass


def _values(records, alg: str, problem: str, indicator: str) -> list[float]:
    rows = sorted((r for r in records if r.algorithm == alg and r.problem == problem), key=lambda r: r.run)
    return [getattr(r, indicator) for r in rows]


def summarize(records, baseline_algorithm: str) -> StatsSummary:
    """Mean/median/std per cell and rank-sum marks against ``baseline_algorithm``."""
    algorithms = list(dict.fromkeys(r.algorithm for r in records))
    problems = list(dict.fromkeys(r.problem for r in records))
    if baseline_algorithm not in algorithms:
        raise IncompleteExperimentError(f"baseline {baseline_algorithm!r} has no records")
    counts = Counter((r.algorithm, r.problem) for r in records)
    gaps = [f"{a} on {p}" for a in algorithms for p in problems if counts[(a, p)] == 0]
    if gaps:
        raise IncompleteExperimentError("missing cells: " + ", ".join(gaps))
    sizes = set(counts.values())
    if len(sizes) != 1:
        uneven = ", ".join(f"{a} on {p}: {c}" for (a, p), c in sorted(counts.items()))
        raise IncompleteExperimentError(f"unequal run counts per cell ({uneven})")

    cells, marks, pvalues, best = {}, {}, {}, {}
    for a in algorithms:
        for p in problems:
            vals = {ind: np.array(_values(records, a, p, ind)) for ind in INDICATORS}
            cells[(a, p)] = CellStats(
                n=len(vals["igdx"]),
                mean={k: float(v.mean()) for k, v in vals.items()},
                median={k: float(np.median(v)) for k, v in vals.items()},
                std={k: float(v.std(ddof=1)) if len(v) > 1 else 0.0 for k, v in vals.items()},
            )
    for p in problems:
        for ind in INDICATORS:
            base = _values(records, baseline_algorithm, p, ind)
            sign = 1.0 if LOWER_IS_BETTER[ind] else -1.0
            for a in algorithms:
                other = _values(records, a, p, ind)
                pv = wilcoxon_rank_sum(other, base) if len(other) >= 3 else 1.0
                pvalues[(a, p, ind)] = pv
                diff = sign * (cells[(a, p)].mean[ind] - cells[(baseline_algorithm, p)].mean[ind])
                if a == baseline_algorithm or pv >= ALPHA or diff == 0:
                    marks[(a, p, ind)] = MARK_SAME
                else:
                    marks[(a, p, ind)] = MARK_BETTER if diff < 0 else MARK_WORSE
            means = [sign * cells[(a, p)].mean[ind] for a in algorithms]
            best[(p, ind)] = algorithms[int(np.argmin(means))]
    return StatsSummary(algorithms, problems, baseline_algorithm, cells, marks, pvalues, best)
