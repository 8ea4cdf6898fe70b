"""MOEA/D-MM: MOEA/D with fixed-size sub-populations, clearing and greedy removal.

Each of the ``lambda = N // mu`` weight vectors owns ``mu`` solutions. Every
generation estimates one clearing radius for the whole population, then
visits the weights in order: one offspring is bred from the weight's own
sub-population and its neighbors', joins the sub-population, and one of the
``mu + 1`` candidates is removed again.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from mmopt.core import (
    ConfigurationError,
    ContractError,
    Problem,
    Solution,
    make_stream,
    nondominated_filter,
)
from mmopt.scalarization import PBI_THETA, generate_weights, make_scalarizer, neighborhoods
from mmopt.variation import VariationParams, make_offspring


class BudgetExhausted(Exception):
    """Raised by :func:`mating` once the evaluation budget is used up."""


@dataclass
class MoeadMmConfig:
    N: int = 300
    mu: int = 4
    scalarizer: str = "tch"
    theta: float = PBI_THETA
    budget: int = 100_000
    seed: int = 0
    variation: VariationParams = field(default_factory=VariationParams)

    @property
    def n_weights(self) -> int:
        return self.N // self.mu

    def validate(self) -> None:
        if self.mu < 1 or self.N < self.mu:
            raise ConfigurationError(f"need N >= mu >= 1, got N={self.N}, mu={self.mu}")
        if self.n_weights < 2:
            raise ConfigurationError(f"N // mu must be at least 2, got {self.n_weights}")
        if self.budget < self.N:
            raise ConfigurationError(f"budget {self.budget} is smaller than the population size {self.N}")
        make_scalarizer(self.scalarizer, self.theta)


@dataclass
class AlgorithmState:
    """Mutable run state. ``X[i]`` / ``F[i]`` hold sub-population ``i``."""

    config: MoeadMmConfig
    problem: Problem
    weights: np.ndarray
    neighbors: np.ndarray
    X: np.ndarray
    F: np.ndarray
    z: np.ndarray
    evaluations_used: int
    init_rng: np.random.Generator
    rng: np.random.Generator
    sigma: float = float("nan")
    generation: int = 0

    @property
    def n_weights(self) -> int:
        return len(self.weights)

    @property
    def T(self) -> int:
        return self.neighbors.shape[1]

    @property
    def exhausted(self) -> bool:
        return self.evaluations_used >= self.config.budget

    def solutions(self) -> list[Solution]:
        X = self.X.reshape(-1, self.X.shape[-1])
        F = self.F.reshape(-1, self.F.shape[-1])
        return [Solution(x.copy(), f.copy()) for x, f in zip(X, F)]

    def subpopulation(self, i: int) -> list[Solution]:
        return [Solution(x.copy(), f.copy()) for x, f in zip(self.X[i], self.F[i])]


def initialize(config: MoeadMmConfig, problem: Problem) -> AlgorithmState:
    config.validate()
    lam, mu = config.n_weights, config.mu
    weights = generate_weights(problem.n_obj, lam)
    T = max(1, lam // 10)
    init_rng = make_stream(config.seed, "init")
    X = problem.random_solutions(lam * mu, init_rng)
    F = np.array([problem.evaluate(x) for x in X])
    return AlgorithmState(
        config=config,
        problem=problem,
        weights=weights,
        neighbors=neighborhoods(weights, T),
        X=X.reshape(lam, mu, problem.n_var),
        F=F.reshape(lam, mu, problem.n_obj),
        z=F.min(axis=0),
        evaluations_used=lam * mu,
        init_rng=init_rng,
        rng=make_stream(config.seed, "variation"),
    )


def estimate_clearing_radius(X: np.ndarray, N: int) -> float:
    """Mean decision-space distance from each point to its L-th nearest other point.

    ``L = max(1, N // 10)``, capped at ``len(X) - 1`` for tiny populations.
    Duplicates count as zero-distance neighbors; a point is never its own.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    n = len(X)
    if n < 2:
        raise ContractError("clearing radius needs at least two solutions")
    L = min(max(1, N // 10), n - 1)
    d = cdist(X, X)
    np.fill_diagonal(d, np.inf)
    kth = np.partition(d, L - 1, axis=1)[:, L - 1]
    return float(np.mean(kth))


def select_removal(X, G, sigma: float) -> int:
    """Index of the candidate to drop from ``X`` (one row per candidate).

    The closest pair (lexicographically first on distance ties) is cleared if
    it is nearer than ``sigma``: its worse member goes. Otherwise the worst
    candidate overall goes. Equal ``G`` values drop the higher index.
    """
    X = X.tolist() if isinstance(X, np.ndarray) else X
    G = G.tolist() if isinstance(G, np.ndarray) else G
    n = len(X)
    best, bi, bj = math.inf, 0, 1
    for i in range(n - 1):
        xi = X[i]
        for j in range(i + 1, n):
            xj = X[j]
            s = 0.0
            for k in range(len(xi)):
                t = xi[k] - xj[k]
                s += t * t
            if s < best:
                best, bi, bj = s, i, j
    if math.sqrt(best) < sigma:
        return bi if G[bi] > G[bj] else bj
    worst = n - 1
    for k in range(n - 2, -1, -1):
        if G[k] > G[worst]:
            worst = k
    return worst


def environmental_selection(w: np.ndarray, S: Sequence[Solution], sigma: float, z: np.ndarray,
                            scalarizer: Callable | str = "tch", mu: int | None = None) -> list[Solution]:
    """Drop one of the ``mu + 1`` candidates in ``S``; survivors keep their order."""
    if mu is not None and len(S) != mu + 1:
        raise ContractError(f"expected {mu + 1} candidates, got {len(S)}")
    if len(S) < 2:
        raise ContractError("environmental selection needs at least two candidates")
    if sigma < 0:
        raise ContractError("clearing radius must be non-negative")
    g = make_scalarizer(scalarizer) if isinstance(scalarizer, str) else scalarizer
    X = np.array([s.x for s in S], dtype=np.float64)
    G = g(w, np.array([s.f for s in S], dtype=np.float64), z)
    r = select_removal(X, G, sigma)
    return [s for k, s in enumerate(S) if k != r]


def mating(state: AlgorithmState, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Breed and evaluate one offspring for weight ``i``; returns ``(x, f)``.

    The first parent comes from the weight's own sub-population, the second
    from the union of its neighbors' sub-populations.
    """
    if state.exhausted:
        raise BudgetExhausted(f"budget of {state.config.budget} evaluations used")
    rng, mu = state.rng, state.config.mu
    x1 = state.X[i, rng.integers(mu)]
    j = int(rng.integers(state.T * mu))
    x2 = state.X[state.neighbors[i, j // mu], j % mu]
    p = state.problem
    y = make_offspring(x1, x2, state.config.variation, rng, p.lower, p.upper)
    fy = p.evaluate(y)
    state.evaluations_used += 1
    return y, fy


def step_generation(state: AlgorithmState) -> AlgorithmState:
    """One pass over all weights. Stops early, consistently, when the budget runs out."""
    cfg = state.config
    g = make_scalarizer(cfg.scalarizer, cfg.theta)
    lam, mu = state.n_weights, cfg.mu
    state.sigma = estimate_clearing_radius(state.X.reshape(lam * mu, -1), cfg.N)
    for i in range(lam):
        if state.exhausted:
            break
        y, fy = mating(state, i)
        state.z = np.minimum(state.z, fy)
        SX = np.vstack([state.X[i], y])
        SF = np.vstack([state.F[i], fy])
        r = select_removal(SX, g(state.weights[i], SF, state.z), state.sigma)
        if r != mu:
            # drop member r, shift the rest up, append the offspring
            state.X[i, r:-1] = state.X[i, r + 1:]
            state.F[i, r:-1] = state.F[i, r + 1:]
            state.X[i, -1] = y
            state.F[i, -1] = fy
    state.generation += 1
    return state


def run(config: MoeadMmConfig, problem: Problem,
        on_generation: Callable[[AlgorithmState], None] | None = None) -> list[Solution]:
    """Run until the budget is spent; return the non-dominated final solutions."""
    state = initialize(config, problem)
    while not state.exhausted:
        step_generation(state)
        if on_generation is not None:
            on_generation(state)
    return nondominated_filter(state.solutions())
