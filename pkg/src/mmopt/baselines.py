"""Reference algorithms: classic MOEA/D and MOEA/D-AD.

Both share weight generation and variation with :mod:`mmopt.moeadmm`, so
comparisons isolate the selection scheme.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from mmopt.core import ConfigurationError, Problem, Solution, make_stream, nondominated_filter
from mmopt.scalarization import PBI_THETA, generate_weights, make_scalarizer, neighbor_indices
from mmopt.variation import VariationParams, make_offspring


@dataclass
class MoeadConfig:
    N: int = 300
    T: int = 20
    scalarizer: str = "tch"
    theta: float = PBI_THETA
    budget: int = 100_000
    seed: int = 0
    variation: VariationParams = field(default_factory=VariationParams)

    def validate(self) -> None:
        if self.N < 1:
            raise ConfigurationError("MOEA/D needs at least one weight vector")
        if self.T < 1:
            raise ConfigurationError(f"neighborhood size must be positive, got {self.T}")
        if self.budget < self.N:
            raise ConfigurationError(f"budget {self.budget} is smaller than the population size {self.N}")
        make_scalarizer(self.scalarizer, self.theta)


@dataclass
class MoeadState:
    weights: np.ndarray
    neighbors: np.ndarray  # row i: i itself followed by its T - 1 nearest weights
    X: np.ndarray
    F: np.ndarray
    z: np.ndarray
    evaluations_used: int
    generation: int = 0


def moead_initialize(config: MoeadConfig, problem: Problem) -> MoeadState:
    config.validate()
    W = generate_weights(problem.n_obj, config.N)
    T = min(config.T, len(W))
    if T > 1:
        B = np.array([np.concatenate([[i], neighbor_indices(W, i, T - 1)]) for i in range(len(W))])
    else:
        B = np.arange(len(W))[:, None]
    rng = make_stream(config.seed, "init")
    X = problem.random_solutions(len(W), rng)
    F = np.array([problem.evaluate(x) for x in X])
    return MoeadState(W, B, X, F, F.min(axis=0), len(W))


def moead_run(config: MoeadConfig, problem: Problem,
              on_generation: Callable[[MoeadState], None] | None = None) -> list[Solution]:
    """Classic MOEA/D: one solution per weight, neighborhood mating and replacement.

    An offspring replaces every neighbor whose own scalarizing value it
    matches or improves; the replacement count is unbounded.
    """
    state = moead_initialize(config, problem)
    g = make_scalarizer(config.scalarizer, config.theta)
    rng = make_stream(config.seed, "variation")
    n, T = state.neighbors.shape
    while state.evaluations_used < config.budget:
        for i in range(n):
            if state.evaluations_used >= config.budget:
                break
            nb = state.neighbors[i]
            a, b = rng.integers(T, size=2)
            y = make_offspring(state.X[nb[a]], state.X[nb[b]], config.variation, rng, problem.lower, problem.upper)
            fy = problem.evaluate(y)
            state.evaluations_used += 1
            state.z = np.minimum(state.z, fy)
            W = state.weights[nb]
            better = g(W, fy, state.z) <= g(W, state.F[nb], state.z)
            if better.any():
                state.X[nb[better]] = y
                state.F[nb[better]] = fy
        state.generation += 1
        if on_generation is not None:
            on_generation(state)
    X, F = state.X, state.F
    return nondominated_filter([Solution(x.copy(), f.copy()) for x, f in zip(X, F)])


@dataclass
class MoeadAdConfig:
    n_weights: int = 300
    scalarizer: str = "tch"
    theta: float = PBI_THETA
    budget: int = 100_000
    seed: int = 0
    variation: VariationParams = field(default_factory=VariationParams)

    def validate(self) -> None:
        if self.n_weights < 2:
            raise ConfigurationError("MOEA/D-AD needs at least two weight vectors")
        if self.budget < self.n_weights:
            raise ConfigurationError("budget must cover the initial population")
        make_scalarizer(self.scalarizer, self.theta)


def assign_weight(weights: np.ndarray, f: np.ndarray, z: np.ndarray) -> int:
    """Weight vector with the smallest angle to ``f - z`` (lowest index on ties)."""
    u = f - z
    nu = np.linalg.norm(u)
    if nu == 0:
        return 0
    cos = (weights @ u) / (np.linalg.norm(weights, axis=1) * nu)
    return int(np.argmax(cos))


@dataclass
class AdDecision:
    """Outcome of one MOEA/D-AD acceptance step (for auditing)."""

    weight: int
    niche: list[int]      # population indices in P_i and Q
    removed: list[int]    # population indices dropped
    accepted: bool
    x: np.ndarray | None = None  # the offspring, so a run can be replayed
    f: np.ndarray | None = None


def ad_acceptance(g_y: float, g_niche: np.ndarray) -> tuple[bool, np.ndarray]:
    """Acceptance rule given ``y``'s value and the values of ``P_i`` members inside ``Q``.

    Returns ``(accepted, worse_mask)``. With an empty niche ``y`` is always
    accepted; otherwise it is accepted iff it beats at least one member,
    and every member it beats is removed.
    """
    if len(g_niche) == 0:
        return True, np.zeros(0, dtype=bool)
    worse = g_niche > g_y
    return bool(worse.any()), worse


def moead_ad_run(config: MoeadAdConfig, problem: Problem,
                 on_step: Callable[[AdDecision, int], None] | None = None) -> list[Solution]:
    """MOEA/D-AD with an unbounded population.

    ``on_step(decision, population_size)`` is called after every offspring.
    """
    config.validate()
    g = make_scalarizer(config.scalarizer, config.theta)
    W = generate_weights(problem.n_obj, config.n_weights)
    init = make_stream(config.seed, "init")
    rng = make_stream(config.seed, "variation")
    X = problem.random_solutions(len(W), init)
    F = np.array([problem.evaluate(x) for x in X])
    z = F.min(axis=0)
    owner = np.array([assign_weight(W, f, z) for f in F])
    used = len(X)
    while used < config.budget:
        a, b = rng.integers(len(X), size=2)
        y = make_offspring(X[a], X[b], config.variation, rng, problem.lower, problem.upper)
        fy = problem.evaluate(y)
        used += 1
        z = np.minimum(z, fy)
        i = assign_weight(W, fy, z)
        L = max(1, len(X) // 10)
        d = np.sum((X - y) ** 2, axis=1)
        Q = np.argsort(d, kind="stable")[:L]
        niche = Q[owner[Q] == i]
        accepted, worse = ad_acceptance(float(g(W[i], fy, z)), g(W[i], F[niche], z))
        removed = niche[worse]
        if accepted:
            keep = np.ones(len(X), dtype=bool)
            keep[removed] = False
            X = np.vstack([X[keep], y])
            F = np.vstack([F[keep], fy])
            owner = np.append(owner[keep], i)
        if on_step is not None:
            on_step(AdDecision(i, niche.tolist(), removed.tolist() if accepted else [], accepted, y, fy), len(X))
    return nondominated_filter([Solution(x.copy(), f.copy()) for x, f in zip(X, F)])
