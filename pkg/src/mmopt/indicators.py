"""Quality indicators: IGD+, IGDX and hypervolume.

IGD+ and IGDX are exact brute force. Per-pair distances accumulate the
coordinates left to right and the final mean is the correctly rounded sum
(``math.fsum``) divided by the count, so values are reproducible to the bit
independently of array layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mmopt.core import ContractError, make_stream, nondominated_mask, squared_distances

HV_SAMPLES = 1_000_000
HV_SEED = 12_345
HV_MARGIN = 0.1


@dataclass(frozen=True)
class IndicatorReport:
    igd_plus: float
    igdx: float
    hv: float
    archive_size: int


def _check(A, R, what: str) -> tuple[np.ndarray, np.ndarray]:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    if A.size == 0 or R.size == 0:
        raise ContractError(f"{what} needs non-empty archive and reference sets")
    if A.shape[1] != R.shape[1]:
        raise ContractError(f"{what}: dimension mismatch {A.shape[1]} vs {R.shape[1]}")
    return A, R


def _mean(values: np.ndarray) -> float:
    return math.fsum(values.tolist()) / len(values)


def igd_plus(A, P, chunk: int = 2048) -> float:
    """Mean over reference points p of min over a of ||max(a - p, 0)||."""
    A, P = _check(A, P, "IGD+")
    best = np.empty(len(P))
    for s in range(0, len(P), chunk):
        Pc = P[s:s + chunk]
        diff = np.maximum(A[None, :, 0] - Pc[:, None, 0], 0.0)
        acc = diff * diff
        for k in range(1, A.shape[1]):
            diff = np.maximum(A[None, :, k] - Pc[:, None, k], 0.0)
            acc += diff * diff
        best[s:s + chunk] = np.sqrt(acc.min(axis=1))
    return _mean(best)


def igdx(A, S, chunk: int = 2048) -> float:
    """Mean over reference decision vectors x of the distance to the nearest archive member."""
    A, S = _check(A, S, "IGDX")
    best = np.empty(len(S))
    for s in range(0, len(S), chunk):
        best[s:s + chunk] = np.sqrt(squared_distances(S[s:s + chunk], A).min(axis=1))
    return _mean(best)


def igdx_contributions(A, S) -> np.ndarray:
    """Per-reference-point nearest-archive distance (the terms IGDX averages)."""
    A, S = _check(A, S, "IGDX")
    return np.sqrt(squared_distances(S, A).min(axis=1))


def hv_reference_point(P) -> np.ndarray:
    """Componentwise maximum of a reference front plus a 0.1 margin."""
    return np.max(np.atleast_2d(P), axis=0) + HV_MARGIN


def _hv_2d(A: np.ndarray, ref: np.ndarray) -> float:
    A = A[np.argsort(A[:, 0], kind="stable")]
    volume, y_prev = 0.0, ref[1]
    for f1, f2 in A:
        if f2 < y_prev:
            volume += (ref[0] - f1) * (y_prev - f2)
            y_prev = f2
    return volume


def _prefix_masks(A: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Per objective: sorted values and bitmasks of the first j points in that order.

    ``masks[k][j]`` has bit ``p`` set iff point ``p`` is among the ``j``
    smallest in objective ``k``, so ``masks[k][searchsorted(..., s_k)]`` is
    the set of points with ``a_k <= s_k``.
    """
    n, m = A.shape
    words = (n + 63) // 64
    onehot = np.zeros((n, words), dtype=np.uint64)
    idx = np.arange(n)
    onehot[idx, idx // 64] = np.left_shift(np.uint64(1), (idx % 64).astype(np.uint64))
    values, masks = [], []
    for k in range(m):
        order = np.argsort(A[:, k], kind="stable")
        prefix = np.zeros((n + 1, words), dtype=np.uint64)
        prefix[1:] = np.bitwise_or.accumulate(onehot[order], axis=0)
        values.append(A[order, k])
        masks.append(prefix)
    return values, masks


def _hv_monte_carlo(A: np.ndarray, ref: np.ndarray, samples: int, seed: int, chunk: int = 100_000) -> float:
    lo = A.min(axis=0)
    box = float(np.prod(ref - lo))
    rng = make_stream(seed, "hypervolume")
    values, masks = _prefix_masks(A)
    hits = 0
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        pts = lo + rng.random((m, len(ref))) * (ref - lo)
        acc = masks[0][np.searchsorted(values[0], pts[:, 0], side="right")]
        for k in range(1, len(ref)):
            acc &= masks[k][np.searchsorted(values[k], pts[:, k], side="right")]
        hits += int(np.count_nonzero(acc.any(axis=1)))
    return box * hits / samples


def hypervolume(A, ref, samples: int = HV_SAMPLES, seed: int = HV_SEED) -> float:
    """Objective-space volume dominated by ``A`` and bounded by ``ref``.

    Exact for two objectives; otherwise a fixed-seed Monte-Carlo estimate
    drawn inside the box spanned by the archive minimum and ``ref``. Points
    not strictly better than ``ref`` in every objective contribute nothing.
    """
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    ref = np.asarray(ref, dtype=np.float64)
    if A.size == 0:
        return 0.0
    A = A[np.all(A < ref, axis=1)]
    if len(A) == 0:
        return 0.0
    A = A[nondominated_mask(A)]
    if A.shape[1] == 2:
        return _hv_2d(A, ref)
    return _hv_monte_carlo(A, ref, samples, seed)


def evaluate_archive(X, F, reference_X, reference_F, hv_ref=None) -> IndicatorReport:
    hv_ref = hv_reference_point(reference_F) if hv_ref is None else hv_ref
    return IndicatorReport(
        igd_plus=igd_plus(F, reference_F),
        igdx=igdx(X, reference_X),
        hv=hypervolume(F, hv_ref),
        archive_size=len(np.atleast_2d(X)),
    )
