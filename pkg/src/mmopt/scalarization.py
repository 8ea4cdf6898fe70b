"""Weight vectors, scalarizing functions and weight-space neighborhoods."""

from __future__ import annotations

import itertools
import math

import numpy as np

from mmopt.core import ConfigurationError, make_stream

WEIGHT_FLOOR = 1e-6
PBI_THETA = 5.0
# filler points for incomplete simplex lattices come from this fixed stream
_FILL_SEED = 20_070_101


def simplex_lattice(n_obj: int, H: int) -> np.ndarray:
    """All weight vectors with components in {0, 1/H, ..., 1} summing to 1."""
    rows = []
    for bars in itertools.combinations(range(H + n_obj - 1), n_obj - 1):
        edges = (-1, *bars, H + n_obj - 1)
        rows.append([edges[k + 1] - edges[k] - 1 for k in range(n_obj)])
    return np.array(rows, dtype=np.float64) / H


def generate_weights(n_obj: int, count: int) -> np.ndarray:
    """Exactly ``count`` distinct weight vectors on the unit simplex.

    Two objectives get evenly spaced weights. More objectives get the
    densest simplex lattice that fits, topped up with uniform simplex points
    drawn from a fixed stream.
    """
    if n_obj < 2:
        raise ConfigurationError(f"need at least two objectives, got {n_obj}")
    if count < 1:
        raise ConfigurationError(f"need at least one weight vector, got {count}")
    if count == 1:
        return np.full((1, n_obj), 1.0 / n_obj)
    if n_obj == 2:
        t = np.arange(count) / (count - 1)
        return np.stack([t, 1.0 - t], axis=1)

    H = 1
    while math.comb(H + 1 + n_obj - 1, n_obj - 1) <= count:
        H += 1
    W = simplex_lattice(n_obj, H) if math.comb(H + n_obj - 1, n_obj - 1) <= count else np.empty((0, n_obj))
    rng = make_stream(_FILL_SEED, f"weights-m{n_obj}")
    fill = []
    while len(W) + len(fill) < count:
        e = rng.exponential(size=n_obj)
        w = e / e.sum()
        if not any(np.array_equal(w, v) for v in (*W, *fill)):
            fill.append(w)
    return np.vstack([W, *fill]) if fill else W


def tchebycheff(w: np.ndarray, f: np.ndarray, z: np.ndarray) -> np.ndarray:
    """max_i max(w_i, 1e-6) |f_i - z_i|; ``f`` may be a stack of vectors."""
    return np.max(np.maximum(w, WEIGHT_FLOOR) * np.abs(np.asarray(f) - z), axis=-1)


def pbi(w: np.ndarray, f: np.ndarray, z: np.ndarray, theta: float = PBI_THETA) -> np.ndarray:
    """Penalty-based boundary intersection: d1 + theta * d2.

    ``w`` and ``f`` may each be a single vector or a stack; stacks broadcast row-wise.
    """
    w = np.asarray(w, dtype=np.float64)
    norm = np.linalg.norm(w, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("PBI needs a non-zero weight vector")
    unit = w / norm
    u = np.asarray(f, dtype=np.float64) - z
    proj = np.sum(u * unit, axis=-1)
    d1 = np.abs(proj)
    d2 = np.linalg.norm(u - proj[..., None] * unit, axis=-1)
    return d1 + theta * d2


def make_scalarizer(name: str, theta: float = PBI_THETA):
    """Return ``g(w, F, z)`` for ``"tchebycheff"``/``"tch"`` or ``"pbi"``."""
    key = name.lower()
    if key in ("tch", "tchebycheff", "te"):
        return tchebycheff
    if key == "pbi":
        return lambda w, f, z: pbi(w, f, z, theta)
    raise ConfigurationError(f"unknown scalarizing function {name!r}")


def update_ideal(z: np.ndarray, f: np.ndarray) -> np.ndarray:
    return np.minimum(z, f)


def neighbor_indices(weights: np.ndarray, i: int, T: int) -> np.ndarray:
    """The ``T`` weights nearest to ``weights[i]``, excluding ``i``; ties go to the lower index."""
    n = len(weights)
    if not 1 <= T <= n - 1:
        raise ConfigurationError(f"neighborhood size must lie in [1, {n - 1}], got {T}")
    diff = weights - weights[i]
    d = np.einsum("ij,ij->i", diff, diff)
    d[i] = np.inf
    return np.argsort(d, kind="stable")[:T]


def neighborhoods(weights: np.ndarray, T: int) -> np.ndarray:
    return np.array([neighbor_indices(weights, i, T) for i in range(len(weights))], dtype=np.intp)
