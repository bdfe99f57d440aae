"""Minimize S_RCS over the free parameters (a3, b2).

Staged search: a wide lattice, a narrow lattice around the wide minimum, then
Nelder–Mead refinement from the narrow minimum. Points whose conversion fails
score +inf. Lattices are walked row-major (a3 outer, b2 inner) and the first
strict minimum wins, so runs are deterministic.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .config import (
    NARROW_HALF_WIDTH_CELLS,
    NARROW_RESOLUTION,
    NM_CONTRACTION,
    NM_DIAMETER_TOL,
    NM_EXPANSION,
    NM_INITIAL_EDGE,
    NM_MAX_ITER,
    NM_REFLECTION,
    NM_SHRINK,
    NM_SPREAD_TOL,
    WIDE_A3,
    WIDE_B2,
    WIDE_RESOLUTION,
)
from .errors import AllPointsInfeasible, InfeasibleError, StalledAtInfeasible
from .sensitivity import FrequencyGrid, s_rcs
from .synth import Branch, RealTransfer3

logger = logging.getLogger(__name__)

type Objective = Callable[[float, float], float]
type Point = tuple[float, float]


@dataclass(frozen=True)
class SearchBox:
    a3: tuple[float, float]
    b2: tuple[float, float]
    resolution: int

    def __post_init__(self) -> None:
        for name, (lo, hi) in (("a3", self.a3), ("b2", self.b2)):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"{name} interval [{lo}, {hi}] is empty or not finite")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")

    @classmethod
    def wide(cls, resolution: int = WIDE_RESOLUTION) -> SearchBox:
        return cls(WIDE_A3, WIDE_B2, resolution)

    @classmethod
    def around(
        cls,
        center: Point,
        steps: Point,
        resolution: int = NARROW_RESOLUTION,
        half_width_cells: float = NARROW_HALF_WIDTH_CELLS,
    ) -> SearchBox:
        """Box of ±``half_width_cells`` lattice steps around ``center``."""
        (a3, b2), (da, db) = center, steps
        ha, hb = half_width_cells * da, half_width_cells * db
        return cls((a3 - ha, a3 + ha), (b2 - hb, b2 + hb), resolution)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return _axis(self.a3, self.resolution), _axis(self.b2, self.resolution)

    def steps(self) -> Point:
        n = self.resolution - 1
        return ((self.a3[1] - self.a3[0]) / n, (self.b2[1] - self.b2[0]) / n)

    def describe(self) -> str:
        return (
            f"a3∈[{self.a3[0]:.6g}, {self.a3[1]:.6g}] "
            f"b2∈[{self.b2[0]:.6g}, {self.b2[1]:.6g}] @ {self.resolution}"
        )


def _axis(interval: tuple[float, float], resolution: int) -> np.ndarray:
    lo, hi = interval
    if lo == hi:
        return np.array([lo])
    return np.linspace(lo, hi, resolution)


@dataclass(frozen=True)
class SurfaceSample:
    a3: float
    b2: float
    value: float


@dataclass(frozen=True)
class TraceEntry:
    stage: str
    state: str
    point: Point
    value: float


@dataclass(frozen=True)
class OptimResult:
    point: Point
    value: float
    trace: tuple[TraceEntry, ...] = ()
    surfaces: dict[str, tuple[SurfaceSample, ...]] = field(default_factory=dict)


def objective(
    target: RealTransfer3,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
) -> Objective:
    """(a3, b2) ↦ S_RCS, +inf where conversion fails."""
    grid = grid or FrequencyGrid.uniform()

    def evaluate(a3: float, b2: float) -> float:
        try:
            return s_rcs(target, a3, b2, grid, branch=branch).aggregate
        except InfeasibleError as exc:
            logger.debug("infeasible at (%g, %g): %s", a3, b2, exc)
            return math.inf

    return evaluate


def _verified(fn: Objective, point: Point, value: float) -> float:
    fresh = fn(*point)
    if fresh != value:
        logger.warning("re-evaluation drifted at %s: %r vs %r", point, fresh, value)
    return fresh


def grid_search(
    target: RealTransfer3,
    box: SearchBox,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
    label: str = "grid",
) -> OptimResult:
    fn = objective(target, grid, branch=branch)
    a3_axis, b2_axis = box.axes()
    samples: list[SurfaceSample] = []
    best: Point | None = None
    best_value = math.inf
    for a3 in a3_axis:
        for b2 in b2_axis:
            value = fn(float(a3), float(b2))
            samples.append(SurfaceSample(float(a3), float(b2), value))
            if value < best_value:
                best, best_value = (float(a3), float(b2)), value
    if best is None:
        raise AllPointsInfeasible(f"no point of {box.describe()} admits a conversion")

    best_value = _verified(fn, best, best_value)
    logger.info("%s: best S_RCS %.10g at %s", label, best_value, best)
    entry = TraceEntry(label, box.describe(), best, best_value)
    return OptimResult(best, best_value, (entry,), {label: tuple(samples)})


@dataclass(frozen=True)
class SimplexRun:
    point: Point
    value: float
    iterations: int
    converged: bool
    vertices: tuple[tuple[Point, float], ...]
    history: tuple[tuple[int, Point, float, float], ...]  # (iteration, best, value, diameter)


def nelder_mead(
    fn: Objective,
    start: Point,
    *,
    edge: float = NM_INITIAL_EDGE,
    reflection: float = NM_REFLECTION,
    expansion: float = NM_EXPANSION,
    contraction: float = NM_CONTRACTION,
    shrink: float = NM_SHRINK,
    diameter_tol: float = NM_DIAMETER_TOL,
    spread_tol: float = NM_SPREAD_TOL,
    max_iter: int = NM_MAX_ITER,
) -> SimplexRun:
    """Two-dimensional Nelder–Mead. Ties between vertices keep their current order."""

    def score(x: np.ndarray) -> float:
        return fn(float(x[0]), float(x[1]))

    x0 = np.asarray(start, dtype=float)
    res: list[tuple[np.ndarray, float]] = [(x0, score(x0))]
    for i in range(len(x0)):
        x = x0.copy()
        x[i] += edge
        res.append((x, score(x)))

    history = []
    converged = False
    iterations = 0
    while True:
        res.sort(key=lambda v: v[1])  # stable: lowest index wins ties
        diameter = max(
            float(np.linalg.norm(p - q)) for k, (p, _) in enumerate(res) for q, _ in res[k + 1 :]
        )
        best_x, best = res[0]
        history.append((iterations, (float(best_x[0]), float(best_x[1])), best, diameter))
        if diameter < diameter_tol or res[-1][1] - best < spread_tol:
            converged = True
            break
        if iterations >= max_iter:
            break
        iterations += 1

        centroid = np.mean([x for x, _ in res[:-1]], axis=0)
        worst_x, worst = res[-1]

        xr = centroid + reflection * (centroid - worst_x)
        fr = score(xr)
        if best <= fr < res[-2][1]:
            res[-1] = (xr, fr)
            continue

        if fr < best:
            xe = centroid + expansion * (xr - centroid)
            fe = score(xe)
            res[-1] = (xe, fe) if fe < fr else (xr, fr)
            continue

        if fr < worst:
            xc = centroid + contraction * (xr - centroid)
        else:
            xc = centroid + contraction * (worst_x - centroid)
        fc = score(xc)
        if fc < min(fr, worst):
            res[-1] = (xc, fc)
            continue

        shrunk = [best_x + shrink * (x - best_x) for x, _ in res[1:]]
        res = [res[0]] + [(x, score(x)) for x in shrunk]

    best_x, best = res[0]
    return SimplexRun(
        (float(best_x[0]), float(best_x[1])),
        best,
        iterations,
        converged,
        tuple(((float(x[0]), float(x[1])), v) for x, v in res),
        tuple(history),
    )


def refine(
    target: RealTransfer3,
    start: Point,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
    label: str = "refine",
) -> OptimResult:
    fn = objective(target, grid, branch=branch)
    if not math.isfinite(fn(*start)):
        raise StalledAtInfeasible(start, math.inf)

    run = nelder_mead(fn, start)
    if not run.converged and any(not math.isfinite(v) for _, v in run.vertices):
        logger.warning("simplex stalled after %d iterations near %s", run.iterations, run.point)
        raise StalledAtInfeasible(run.point, run.value)

    value = _verified(fn, run.point, run.value)
    trace = tuple(
        TraceEntry(label, f"iteration {k}, diameter {d:.3e}", point, v)
        for k, point, v, d in run.history
    )
    logger.info("%s: S_RCS %.10g at %s after %d iterations", label, value, run.point, run.iterations)
    return OptimResult(run.point, value, trace)


def staged_optimize(
    target: RealTransfer3,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
    wide: SearchBox | None = None,
    narrow_resolution: int = NARROW_RESOLUTION,
) -> OptimResult:
    """Wide lattice → narrow lattice (3×3 wide cells around its minimum) → simplex."""
    wide = wide or SearchBox.wide()
    first = grid_search(target, wide, grid, branch=branch, label="wide")
    narrow = SearchBox.around(first.point, wide.steps(), narrow_resolution)
    second = grid_search(target, narrow, grid, branch=branch, label="narrow")
    final = refine(target, second.point, grid, branch=branch)
    return OptimResult(
        final.point,
        final.value,
        first.trace + second.trace + final.trace,
        first.surfaces | second.surfaces,
    )
