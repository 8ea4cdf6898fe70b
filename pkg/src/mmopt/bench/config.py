"""Experiment configuration and its TOML file form.

Example::

    runs = 31
    population = 300
    budget = 100000
    base_seed = 1
    output_dir = "results/table2"
    mu_sweep = []

    [[problems]]
    name = "polygon"
    D = 4

    [[algorithms]]
    name = "moead-mm-tch"

    [[algorithms]]
    kind = "moead-mm"
    scalarizer = "pbi"
    mu = 4
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from mmopt.core import ConfigurationError
from mmopt.problems import Problem, make_problem

ALGORITHM_KINDS = ("moead-mm", "moead", "moead-ad")
_ALG_ID = re.compile(r"^(moead-mm|moead)-(tch|pbi)(?:-mu(\d+))?$|^(moead-ad)(?:-(tch|pbi))?$")


@dataclass(frozen=True)
class AlgorithmSpec:
    kind: str
    scalarizer: str = "tch"
    mu: int = 4
    T: int = 20
    theta: float = 5.0
    label: str | None = None

    def __post_init__(self):
        if self.kind not in ALGORITHM_KINDS:
            raise ConfigurationError(f"unknown algorithm kind {self.kind!r}; choose from {ALGORITHM_KINDS}")
        if self.scalarizer not in ("tch", "pbi"):
            raise ConfigurationError(f"scalarizer must be 'tch' or 'pbi', got {self.scalarizer!r}")

    @property
    def id(self) -> str:
        if self.label:
            return self.label
        if self.kind == "moead-ad":
            return "moead-ad" if self.scalarizer == "tch" else "moead-ad-pbi"
        base = f"{self.kind}-{self.scalarizer}"
        return f"{base}-mu{self.mu}" if self.kind == "moead-mm" and self.mu != 4 else base

    @classmethod
    def parse(cls, text: str) -> AlgorithmSpec:
        """``moead-mm-tch``, ``moead-mm-pbi-mu6``, ``moead-tch``, ``moead-pbi``, ``moead-ad``."""
        m = _ALG_ID.match(text.strip().lower())
        if not m:
            raise ConfigurationError(f"unknown algorithm id {text!r}")
        if m.group(4):
            return cls("moead-ad", m.group(5) or "tch")
        return cls(m.group(1), m.group(2), int(m.group(3)) if m.group(3) else 4)

    @classmethod
    def from_dict(cls, d: dict) -> AlgorithmSpec:
        d = dict(d)
        if "name" in d:
            base = cls.parse(d.pop("name"))
            return replace(base, **d)
        return cls(**d)


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    D: int | None = None

    def build(self) -> Problem:
        return make_problem(self.name, self.D)

    @property
    def id(self) -> str:
        return self.build().name

    @classmethod
    def parse(cls, text: str) -> ProblemSpec:
        make_problem(text)  # validates
        if text.lower().startswith("polygon-d"):
            return cls("polygon", int(text.lower().removeprefix("polygon-d")))
        return cls(text.lower())


@dataclass
class ExperimentConfig:
    problems: list[ProblemSpec]
    algorithms: list[AlgorithmSpec]
    runs: int = 31
    population: int = 300
    budget: int = 100_000
    mu_sweep: list[int] = field(default_factory=list)
    base_seed: int = 1
    output_dir: str = "results"
    reference_size: int = 10_000
    baseline: str = "moead-mm-tch"
    jobs: int = 1

    def validate(self) -> None:
        if self.runs < 1:
            raise ConfigurationError("runs must be at least 1")
        if self.budget < self.population:
            raise ConfigurationError("budget must cover the initial population")
        if not self.problems or not self.all_algorithms():
            raise ConfigurationError("an experiment needs at least one problem and one algorithm")
        for p in self.problems:
            p.build()
        ids = [a.id for a in self.all_algorithms()]
        if len(set(ids)) != len(ids):
            raise ConfigurationError(f"duplicate algorithm ids: {ids}")
        if any(mu < 1 or self.population // mu < 2 for mu in self.mu_sweep):
            raise ConfigurationError(f"invalid mu in sweep {self.mu_sweep} for population {self.population}")

    def seed_for(self, run: int) -> int:
        return self.base_seed + run

    def sweep_algorithms(self) -> list[AlgorithmSpec]:
        return [AlgorithmSpec("moead-mm", "tch", mu, label=f"moead-mm-tch-mu{mu}") for mu in self.mu_sweep]

    def all_algorithms(self) -> list[AlgorithmSpec]:
        return list(self.algorithms) + self.sweep_algorithms()

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        d = dict(d)
        problems = []
        for p in d.pop("problems", []):
            problems.append(ProblemSpec.parse(p) if isinstance(p, str) else ProblemSpec(p["name"], p.get("D")))
        algorithms = [AlgorithmSpec.parse(a) if isinstance(a, str) else AlgorithmSpec.from_dict(a)
                      for a in d.pop("algorithms", [])]
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(problems=problems, algorithms=algorithms, **d)
        cfg.validate()
        return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path, "rb") as fh:
        return ExperimentConfig.from_dict(tomllib.load(fh))


BENCHMARK_PROBLEMS = [ProblemSpec("suf3"), ProblemSpec("ssuf1"), ProblemSpec("sympart")] + [
    ProblemSpec("polygon", d) for d in (2, 4, 6, 8, 10)
]
BENCHMARK_ALGORITHMS = [AlgorithmSpec.parse(a) for a in ("moead-mm-tch", "moead-mm-pbi", "moead-ad", "moead-tch", "moead-pbi")]
