"""Multi-modal benchmark problems and Pareto-set reference sampling.

Four problems are provided, each with several equivalent Pareto subsets:

* ``sympart``  - SYM-PART simple, nine line segments on a 3x3 tile grid.
* ``ssuf1``    - two mirrored sine curves on [1, 3] x [-1, 1].
* ``suf3``     - two parallel square-root curves on [0, 1] x [1, 2].
* ``polygon``  - four regular hexagons with six objectives, scalable in D.

Reference sets are drawn uniformly over *all* subsets, stratified so every
subset receives a share proportional to its length or area.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from mmopt.core import ConfigurationError, ContractError, Problem

PROBLEM_NAMES = ("sympart", "ssuf1", "suf3", "polygon")


class SymPart(Problem):
    """SYM-PART simple (no rotation).

    The search box is cut into a 3x3 grid of tiles of width ``c + 2a`` and
    height ``b``; the outer tiles extend to the box edge. Inside each tile the
    point is translated to the central tile, where the two objectives are the
    squared distances to the foci ``(-a, 0)`` and ``(a, 0)``.
    """

    def __init__(self, a: float = 2.0, b: float = 10.0, c: float = 10.0):
        if min(a, b, c) <= 0:
            raise ConfigurationError("SYM-PART parameters must be positive")
        self.a, self.b, self.c = float(a), float(b), float(c)
        super().__init__("sympart", 2, 2, np.full(2, -100.0), np.full(2, 100.0), 9)

    def tile(self, x: np.ndarray) -> tuple[float, float]:
        # round half up, then clamp to the 3x3 grid
        t1 = min(max(math.floor(x[0] / (self.c + 2 * self.a) + 0.5), -1), 1)
        t2 = min(max(math.floor(x[1] / self.b + 0.5), -1), 1)
        return float(t1), float(t2)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        t1, t2 = self.tile(x)
        p1 = x[0] - t1 * (self.c + 2 * self.a)
        p2 = x[1] - t2 * self.b
        return np.array([(p1 + self.a) ** 2 + p2 ** 2, (p1 - self.a) ** 2 + p2 ** 2])

    def tile_centers(self) -> np.ndarray:
        w = self.c + 2 * self.a
        return np.array([(t1 * w, t2 * self.b) for t2 in (-1, 0, 1) for t1 in (-1, 0, 1)])


class SSUF1(Problem):
    """f1 = |x1 - 2|, f2 = 1 - sqrt(f1) + 2 (x2 - sin(6 pi f1 + pi))^2."""

    def __init__(self) -> None:
        super().__init__("ssuf1", 2, 2, np.array([1.0, -1.0]), np.array([3.0, 1.0]), 2)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        f1 = abs(x[0] - 2.0)
        f2 = 1.0 - math.sqrt(f1) + 2.0 * (x[1] - math.sin(6.0 * math.pi * f1 + math.pi)) ** 2
        return np.array([f1, f2])


def _suf3_penalty(t: float) -> float:
    return 4.0 * t * t - 2.0 * math.cos(20.0 * t * math.pi / math.sqrt(2.0)) + 2.0


class SUF3(Problem):
    """Two-subset problem on [0, 1] x [1, 2] built from the UF3 distance term.

    With ``y = 2 (x2 - 1)`` the Pareto subsets are ``y = sqrt(x1)`` and
    ``y = 1 + sqrt(x1)``, i.e. ``x2 = 1 + sqrt(x1)/2`` and
    ``x2 = 1.5 + sqrt(x1)/2``. The residual ``t`` is measured to whichever of
    the two curves is nearer, so both curves are optimal end to end and the
    function is continuous:

        f1 = x1
        f2 = 1 - sqrt(x1) + 2 (4 t^2 - 2 cos(20 pi t / sqrt(2)) + 2)

    This is an adopted reconstruction matching the bounds and the two-curve
    Pareto set; it has not been checked against the original definition.
    """

    def __init__(self) -> None:
        super().__init__("suf3", 2, 2, np.array([0.0, 1.0]), np.array([1.0, 2.0]), 2)

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        r = math.sqrt(x[0])
        y = 2.0 * (x[1] - 1.0)
        ta, tb = y - r, y - 1.0 - r
        t = ta if abs(ta) <= abs(tb) else tb
        return np.array([x[0], 1.0 - r + 2.0 * _suf3_penalty(t)])


DEFAULT_CENTERS = ((0.0, 0.0), (0.0, 5.0), (5.0, 0.0), (5.0, 5.0))


class MultiPolygon(Problem):
    """Distance-minimization problem over several regular polygons.

    Objective ``i`` is the distance to the nearest ``i``-th vertex over all
    polygons. For ``D > 2`` each 2-D vertex is embedded by repeating its two
    coordinates over every consecutive coordinate pair, so the Pareto set is
    the same embedding of the filled polygons.
    """

    def __init__(self, n_var: int = 2, centers=DEFAULT_CENTERS, radius: float = 1.0, n_obj: int = 6):
        if n_var < 2 or n_var % 2:
            raise ConfigurationError(f"multi-polygon needs an even D >= 2, got {n_var}")
        if radius <= 0:
            raise ConfigurationError("polygon radius must be positive")
        self.centers = np.asarray(centers, dtype=np.float64)
        self.radius = float(radius)
        angles = 2.0 * np.pi * np.arange(1, n_obj + 1) / n_obj
        unit = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        # vertices[k, i] is vertex i of polygon k, shape (K, M, 2)
        self.vertices = self.centers[:, None, :] + self.radius * unit[None, :, :]
        self.embedded = np.tile(self.vertices, (1, 1, n_var // 2))
        super().__init__(
            f"polygon-d{n_var}", n_obj, n_var, np.full(n_var, -100.0), np.full(n_var, 100.0), len(self.centers)
        )

    def _evaluate(self, x: np.ndarray) -> np.ndarray:
        diff = self.embedded - x
        return np.sqrt(np.min(np.sum(diff * diff, axis=2), axis=0))

    def contains(self, P: np.ndarray) -> np.ndarray:
        """Polygon index containing each 2-D point (or -1), boundaries included."""
        P = np.atleast_2d(P)
        out = np.full(len(P), -1)
        for k, verts in enumerate(self.vertices):
            edges = np.roll(verts, -1, axis=0) - verts
            rel = P[:, None, :] - verts[None, :, :]
            cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
            inside = np.all(cross >= -1e-12, axis=1)
            out[inside & (out < 0)] = k
        return out

    def project(self, X: np.ndarray) -> np.ndarray:
        """Mean 2-D point over the coordinate pairs of each row of ``X``."""
        X = np.atleast_2d(X)
        return X.reshape(len(X), -1, 2).mean(axis=1)


def make_problem(name: str, n_var: int | None = None) -> Problem:
    """Build a problem by id: ``sympart``, ``ssuf1``, ``suf3``, ``polygon``.

    ``polygon`` takes ``n_var`` (default 2); ``polygon-d4`` is also accepted.
    """
    key = name.lower().replace("_", "-")
    if key.startswith("polygon"):
        if key != "polygon":
            suffix = key.removeprefix("polygon-d")
            if not suffix.isdigit():
                raise ConfigurationError(f"unknown problem {name!r}")
            n_var = int(suffix)
        return MultiPolygon(n_var or 2)
    if n_var not in (None, 2):
        raise ConfigurationError(f"{name} has a fixed D = 2")
    table = {"sympart": SymPart, "sym-part": SymPart, "ssuf1": SSUF1, "suf3": SUF3}
    if key not in table:
        raise ConfigurationError(f"unknown problem {name!r}; choose from {PROBLEM_NAMES}")
    return table[key]()


# ---------------------------------------------------------------------------
# reference sets


@dataclass
class ReferenceSet:
    problem: str
    seed: int
    decision_points: np.ndarray
    objective_points: np.ndarray

    def __len__(self) -> int:
        return len(self.decision_points)


def _split_counts(n: int, measures: list[float]) -> list[int]:
    """Largest-remainder split of ``n`` proportional to ``measures``."""
    total = sum(measures)
    raw = [n * m / total for m in measures]
    counts = [int(math.floor(r)) for r in raw]
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - counts[i]), i))
    for i in order[: n - sum(counts)]:
        counts[i] += 1
    return counts


class _Curve:
    """Arc-length sampler for a parametric curve ``t -> (x(t), y(t))``, t in [0, 1]."""

    def __init__(self, fn, grid: int = 200_001):
        self.fn = fn
        t = np.linspace(0.0, 1.0, grid)
        pts = fn(t)
        seg = np.hypot(np.diff(pts[0]), np.diff(pts[1]))
        self.t = t
        self.s = np.concatenate([[0.0], np.cumsum(seg)])

    @property
    def length(self) -> float:
        return float(self.s[-1])

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        s = rng.random(n) * self.length
        t = np.interp(s, self.s, self.t)
        return np.stack(self.fn(t), axis=1)


def _pareto_curves(problem: Problem) -> list[_Curve]:
    if isinstance(problem, SSUF1):
        def left(t):
            x1 = 2.0 - t
            return x1, np.sin(6.0 * np.pi * (2.0 - x1) + np.pi)

        def right(t):
            x1 = 2.0 + t
            return x1, np.sin(6.0 * np.pi * (x1 - 2.0) + np.pi)

        return [_Curve(left), _Curve(right)]
    if isinstance(problem, SUF3):
        # parametrized by u = sqrt(x1) to keep the speed bounded near x1 = 0
        return [_Curve(lambda u, c=c: (u * u, c + u / 2.0)) for c in (1.0, 1.5)]
    raise ConfigurationError(f"no curve description for {problem.name}")


def _hexagon_samples(problem: MultiPolygon, k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    verts = problem.vertices[k]
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    out = np.empty((0, 2))
    while len(out) < n:
        cand = lo + rng.random((max(2 * (n - len(out)), 16), 2)) * (hi - lo)
        out = np.vstack([out, cand[problem.contains(cand) == k]])
    return out[:n]


def sample_pareto_set(problem: Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` decision vectors spread uniformly over every Pareto subset."""
    if n < 1:
        raise ContractError("reference set size must be positive")
    if isinstance(problem, SymPart):
        parts = []
        for (cx, cy), m in zip(problem.tile_centers(), _split_counts(n, [1.0] * 9)):
            p1 = rng.uniform(-problem.a, problem.a, m)
            parts.append(np.stack([cx + p1, np.full(m, cy)], axis=1))
        return np.vstack(parts)
    if isinstance(problem, (SSUF1, SUF3)):
        curves = _pareto_curves(problem)
        counts = _split_counts(n, [c.length for c in curves])
        return np.vstack([c.sample(m, rng) for c, m in zip(curves, counts)])
    if isinstance(problem, MultiPolygon):
        # regular polygons of equal radius have equal area
        counts = _split_counts(n, [1.0] * len(problem.centers))
        pts = np.vstack([_hexagon_samples(problem, k, m, rng) for k, m in enumerate(counts)])
        return np.tile(pts, (1, problem.n_var // 2))
    raise ConfigurationError(f"no Pareto-set description for {problem.name}")


def sample_reference_set(problem: Problem, n: int = 10_000, rng: np.random.Generator | None = None,
                         seed: int = 0) -> ReferenceSet:
    from mmopt.core import make_stream

    if rng is None:
        rng = make_stream(seed, "refset")
    X = sample_pareto_set(problem, n, rng)
    X = np.clip(X, problem.lower, problem.upper)
    F = np.array([problem.evaluate(x) for x in X])
    return ReferenceSet(problem.name, seed, X, F)


# ---------------------------------------------------------------------------
# columnar text format: "# key=value ..." header, then D decision coordinates
# and M objective values per line at 17 significant digits


def write_points(path: str | Path, X: np.ndarray, F: np.ndarray, **header) -> Path:
    path = Path(path)
    X, F = np.atleast_2d(X), np.atleast_2d(F)
    header = {**header, "n": len(X), "D": X.shape[1], "M": F.shape[1]}
    head = " ".join(f"{k}={v}" for k, v in header.items())
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            fh.write(f"# {head}\n")
            for x, f in zip(X, F):
                fh.write(" ".join(f"{v:.17g}" for v in (*x, *f)) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write point file {path}: {exc}") from exc
    return path


def read_points(path: str | Path) -> tuple[dict[str, str], np.ndarray, np.ndarray]:
    path = Path(path)
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError(f"{path}: missing header line")
        header = dict(item.split("=", 1) for item in first[1:].split())
        rows = [[float(v) for v in line.split()] for line in fh if line.strip()]
    d, m = int(header["D"]), int(header["M"])
    data = np.array(rows, dtype=np.float64).reshape(-1, d + m)
    return header, data[:, :d], data[:, d:]


def write_reference_set(path: str | Path, ref: ReferenceSet) -> Path:
    return write_points(path, ref.decision_points, ref.objective_points, problem=ref.problem, seed=ref.seed)


def read_reference_set(path: str | Path) -> ReferenceSet:
    header, X, F = read_points(path)
    return ReferenceSet(header["problem"], int(header["seed"]), X, F)


def cached_reference_set(problem: Problem, n: int, seed: int, cache_dir: str | Path) -> ReferenceSet:
    """Load the reference set for ``(problem, n, seed)`` or create and store it."""
    path = Path(cache_dir) / f"{problem.name}_n{n}_s{seed}.txt"
    if path.exists():
        return read_reference_set(path)
    ref = sample_reference_set(problem, n, seed=seed)
    write_reference_set(path, ref)
    return ref


def subset_index(problem: Problem, X: np.ndarray) -> np.ndarray:
    """Which Pareto subset each (near-)Pareto-optimal decision vector belongs to.

    Points are assigned to the geometrically nearest subset, so the result
    is meaningful for reference points and converged archive members.
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if isinstance(problem, SymPart):
        centers = problem.tile_centers()
        d = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        return np.argmin(d, axis=1)
    if isinstance(problem, SSUF1):
        return (X[:, 0] > 2.0).astype(int)
    if isinstance(problem, SUF3):
        return (X[:, 1] - np.sqrt(X[:, 0]) / 2.0 > 1.25).astype(int)
    if isinstance(problem, MultiPolygon):
        P = problem.project(X)
        d = ((P[:, None, :] - problem.centers[None, :, :]) ** 2).sum(axis=2)
        return np.argmin(d, axis=1)
    raise ConfigurationError(f"no subset description for {problem.name}")
