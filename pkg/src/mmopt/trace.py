"""Per-generation trace records as JSON lines, for convergence plots."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import IO

import numpy as np

from mmopt.core import nondominated_mask
from mmopt.indicators import igd_plus, igdx
from mmopt.problems import ReferenceSet


class JsonlTrace:
    """Callable usable as ``on_generation`` for MOEA/D-MM and classic MOEA/D.

    Each call writes ``generation``, ``evaluations``, ``sigma`` (MOEA/D-MM
    only), the ideal point ``z`` and, when a reference set is attached, the
    IGDX and IGD+ of the current non-dominated solutions.
    """

    def __init__(self, target: str | Path | IO[str], reference: ReferenceSet | None = None):
        self._own = not hasattr(target, "write")
        self.fh = open(target, "w") if self._own else target
        self.reference = reference
        self.records: list[dict] = []

    def __call__(self, state) -> None:
        rec = {
            "generation": state.generation,
            "evaluations": state.evaluations_used,
            "z": state.z.tolist(),
        }
        sigma = getattr(state, "sigma", None)
        if sigma is not None and not math.isnan(sigma):
            rec["sigma"] = sigma
        if self.reference is not None:
            X = state.X.reshape(-1, state.X.shape[-1])
            F = state.F.reshape(-1, state.F.shape[-1])
            keep = nondominated_mask(F)
            rec["igdx"] = igdx(X[keep], self.reference.decision_points)
            rec["igd_plus"] = igd_plus(F[keep], self.reference.objective_points)
        self.records.append(rec)
        self.fh.write(json.dumps(rec) + "\n")

    def close(self) -> None:
        if self._own:
            self.fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_trace(path: str | Path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def as_array(records: list[dict], key: str) -> np.ndarray:
    return np.array([r[key] for r in records])
