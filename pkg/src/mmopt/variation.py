"""Real-coded variation: simulated binary crossover and polynomial mutation.

Decision vectors here are short (D <= ~10), where scalar Python loops beat
numpy's per-call overhead by an order of magnitude, so the kernels work on
plain floats. Random numbers are drawn up front in one block per operator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class VariationParams:
    sbx_eta: float = 20.0
    sbx_prob: float = 1.0
    mut_eta: float = 20.0
    mut_prob: float | None = None  # None means 1 / D

    def __post_init__(self):
        if self.sbx_eta <= 0 or self.mut_eta <= 0:
            raise ValueError("distribution indices must be positive")
        if not 0.0 <= self.sbx_prob <= 1.0:
            raise ValueError("sbx_prob must lie in [0, 1]")
        if self.mut_prob is not None and not 0.0 <= self.mut_prob <= 1.0:
            raise ValueError("mut_prob must lie in [0, 1]")


def _sbx(x1, x2, U, lower, upper, eta, prob):
    # U = [fire, u_1..u_D, coin_1..coin_D]
    d = len(x1)
    if U[0] >= prob:
        return list(x1)
    e = 1.0 / (eta + 1.0)
    child = [0.0] * d
    for k in range(d):
        a, b, u = x1[k], x2[k], U[1 + k]
        beta = (2.0 * u) ** e if u <= 0.5 else (1.0 / (2.0 * (1.0 - u))) ** e
        # midpoint form keeps identical parents exact
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        c = mid - beta * half if U[1 + d + k] < 0.5 else mid + beta * half
        child[k] = min(max(c, lower[k]), upper[k])
    return child


def _pm(x, U, lower, upper, eta, prob):
    # U = [hit_1..hit_D, u_1..u_D]
    d = len(x)
    e = eta + 1.0
    out = list(x)
    for k in range(d):
        if U[k] >= prob:
            continue
        lo, hi, c, v = lower[k], upper[k], out[k], U[d + k]
        span = hi - lo
        if v < 0.5:
            delta = (2.0 * v + (1.0 - 2.0 * v) * (1.0 - (c - lo) / span) ** e) ** (1.0 / e) - 1.0
        else:
            delta = 1.0 - (2.0 * (1.0 - v) + 2.0 * (v - 0.5) * (1.0 - (hi - c) / span) ** e) ** (1.0 / e)
        out[k] = min(max(c + delta * span, lo), hi)
    return out


def _as_lists(*arrays):
    return [a.tolist() if isinstance(a, np.ndarray) else list(a) for a in arrays]


def sbx_crossover(x1, x2, params: VariationParams, rng: np.random.Generator, lower, upper) -> np.ndarray:
    """One SBX child; each variable takes either sibling value with probability 1/2.

    The crossover fires with probability ``params.sbx_prob``; otherwise the
    child copies ``x1``. ``1 + 2D`` uniforms are consumed either way.
    """
    x1, x2, lower, upper = _as_lists(x1, x2, lower, upper)
    U = rng.random(1 + 2 * len(x1)).tolist()
    return np.array(_sbx(x1, x2, U, lower, upper, params.sbx_eta, params.sbx_prob))


def polynomial_mutation(x, params: VariationParams, lower, upper, rng: np.random.Generator) -> np.ndarray:
    """Bounded polynomial mutation; each variable mutates with probability ``mut_prob``."""
    x, lower, upper = _as_lists(x, lower, upper)
    prob = 1.0 / len(x) if params.mut_prob is None else params.mut_prob
    U = rng.random(2 * len(x)).tolist()
    return np.array(_pm(x, U, lower, upper, params.mut_eta, prob))


def make_offspring(x1, x2, params: VariationParams, rng: np.random.Generator, lower, upper) -> np.ndarray:
    """``polynomial_mutation(sbx_crossover(x1, x2))`` with a single draw of ``1 + 4D`` uniforms."""
    x1, x2, lower, upper = _as_lists(x1, x2, lower, upper)
    d = len(x1)
    prob = 1.0 / d if params.mut_prob is None else params.mut_prob
    U = rng.random(1 + 4 * d).tolist()
    child = _sbx(x1, x2, U[: 1 + 2 * d], lower, upper, params.sbx_eta, params.sbx_prob)
    return np.array(_pm(child, U[1 + 2 * d:], lower, upper, params.mut_eta, prob))
