"""Domain types, Pareto dominance, distances and the problem abstraction.

Every objective is minimized. Random streams are numpy ``Generator`` objects
backed by PCG64, whose output sequence is fixed for a given seed on every
platform; OS entropy is never consulted.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ContractError(ValueError):
    """An operation was called with inputs violating its precondition."""


class ConfigurationError(ValueError):
    """Invalid algorithm, problem or experiment configuration."""


class DomainError(ValueError):
    """A decision vector lies outside the problem's box bounds."""


@dataclass(frozen=True, eq=False)
class Solution:
    """A decision vector paired with its objective vector."""

    x: np.ndarray
    f: np.ndarray

    def __repr__(self) -> str:
        return f"Solution(x={self.x.tolist()}, f={self.f.tolist()})"


def make_stream(seed: int, label: str | None = None) -> np.random.Generator:
    """Return a PCG64 generator for ``seed``.

    A ``label`` derives an independent sub-stream (initialization, variation,
    reference sampling, ...) from the same run seed; the derivation depends
    only on the label text, so adding a new label never perturbs the others.
    """
    if seed < 0:
        raise ConfigurationError(f"seed must be non-negative, got {seed}")
    key = () if label is None else (zlib.crc32(label.encode("utf-8")),)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractError(f"objective vectors differ in length: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def nondominated_mask(F: np.ndarray) -> np.ndarray:
    """Boolean mask of rows of ``F`` that no other row dominates.

    Rows with identical objective values never dominate each other, so
    equivalent solutions are all kept.
    """
    F = np.asarray(F, dtype=np.float64)
    n = len(F)
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        le = np.all(F <= F[i], axis=1)
        lt = np.any(F < F[i], axis=1)
        if np.any(le & lt):
            mask[i] = False
    return mask


def nondominated_filter(pop: Sequence[Solution]) -> list[Solution]:
    if len(pop) == 0:
        raise ContractError("nondominated_filter needs a non-empty population")
    mask = nondominated_mask(np.array([s.f for s in pop]))
    return [s for s, keep in zip(pop, mask) if keep]


def squared_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """All-pairs squared Euclidean distances, shape ``(len(A), len(B))``.

    Coordinates are accumulated left to right, one component at a time, so
    every entry is bitwise equal to the scalar loop ``sum((a_k - b_k)**2)``.
    """
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape[1] != B.shape[1]:
        raise ContractError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    diff = A[:, None, 0] - B[None, :, 0]
    acc = diff * diff
    for k in range(1, A.shape[1]):
        diff = A[:, None, k] - B[None, :, k]
        acc += diff * diff
    return acc


def pairwise_distances(A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    return np.sqrt(squared_distances(A, A if B is None else B))


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ContractError(f"vectors differ in length: {a.shape} vs {b.shape}")
    return float(np.sqrt(squared_distances(a[None, :], b[None, :])[0, 0]))


def clamp_to_bounds(x: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return np.minimum(np.maximum(x, lower), upper)


@dataclass
class Problem:
    """Box-bounded multi-objective problem.

    Subclasses implement ``_evaluate``; ``evaluate`` adds the bounds check.
    ``pareto_subset_count`` is the number of equivalent Pareto subsets.
    """

    name: str
    n_obj: int
    n_var: int
    lower: np.ndarray
    upper: np.ndarray
    pareto_subset_count: int
    bounds_checked: bool = field(default=True, repr=False)

    def __post_init__(self) -> None:
        self.lower = np.asarray(self.lower, dtype=np.float64)
        self.upper = np.asarray(self.upper, dtype=np.float64)
        if self.lower.shape != (self.n_var,) or self.upper.shape != (self.n_var,):
            raise ConfigurationError("bounds must have one entry per decision variable")
        if np.any(self.lower >= self.upper):
            raise ConfigurationError("every lower bound must be strictly below its upper bound")
        if self.n_obj < 2 or self.n_var < 1:
            raise ConfigurationError(f"need M >= 2 and D >= 1, got M={self.n_obj}, D={self.n_var}")

    @property
    def bounds(self) -> np.ndarray:
        return np.stack([self.lower, self.upper], axis=1)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.n_var,):
            raise ContractError(f"{self.name}: expected {self.n_var} variables, got shape {x.shape}")
        if self.bounds_checked and (np.any(x < self.lower) or np.any(x > self.upper)):
            raise DomainError(f"{self.name}: {x.tolist()} is outside the search box")
        return self._evaluate(x)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def random_solutions(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.lower + rng.random((n, self.n_var)) * (self.upper - self.lower)

    def in_bounds(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return np.all((X >= self.lower) & (X <= self.upper), axis=1)
