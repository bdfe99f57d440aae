"""Total parametric sensitivity of a filter realization.

For parameters α_i and magnitude |H| at a frequency,

    RCS = | Σ_i (α_i / |H|) · ∂|H|/∂α_i |

Derivatives are exact: one forward-mode pass per parameter, with only that
parameter carried as a dual and the whole frequency grid evaluated at once.
Hypercomplex filters vary all nine coefficients of A, B, C independently;
real filters vary their seven coefficients.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from .algebra import GAMMA3, element
from .config import GRID_POINTS, MAGNITUDE_TOL, POLE_TOL, ZERO_SENSITIVITY_TOL
from .dual import Scalar, modulus, seed, tangent
from .errors import DivisionByZeroSensitivity, MagnitudeUnderflow, PoleAtFrequency
from .poly import Poly
from .synth import Branch, Filter, HyperFilter1, RealTransfer3, convert, rationalize

logger = logging.getLogger(__name__)

type Transfer = Callable[[tuple[Scalar, ...]], tuple[Poly, Poly]]


class ZConvention(StrEnum):
    """How a grid frequency ω is placed on the unit circle."""

    ROTATED = "rotated"  # z = sin ω + i·cos ω
    STANDARD = "standard"  # z = cos ω + i·sin ω


def z_of(omega: np.ndarray | float, convention: ZConvention = ZConvention.ROTATED) -> np.ndarray:
    omega = np.asarray(omega, dtype=float)
    if convention is ZConvention.STANDARD:
        return np.cos(omega) + 1j * np.sin(omega)
    return np.sin(omega) + 1j * np.cos(omega)


@dataclass(frozen=True)
class FrequencyGrid:
    points: tuple[float, ...]
    convention: ZConvention = ZConvention.ROTATED

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a frequency grid needs at least one point")
        object.__setattr__(self, "points", tuple(float(w) for w in self.points))
        object.__setattr__(self, "convention", ZConvention(self.convention))

    @classmethod
    def uniform(
        cls, n: int = GRID_POINTS, convention: ZConvention = ZConvention.ROTATED
    ) -> FrequencyGrid:
        """``n`` points 2πk/(n−1), k = 0..n−1, both endpoints included."""
        if n < 2:
            raise ValueError("a uniform grid needs at least two points")
        return cls(tuple(2.0 * math.pi * k / (n - 1) for k in range(n)), convention)

    def z(self) -> np.ndarray:
        return z_of(np.asarray(self.points), self.convention)


@dataclass(frozen=True)
class SensitivityProfile:
    """Per-point RCS and their sum in index order; ``flagged`` lists skipped ω."""

    per_point: tuple[tuple[float, float], ...]
    aggregate: float
    flagged: tuple[float, ...] = field(default=())

    @classmethod
    def from_points(
        cls, per_point: list[tuple[float, float]], flagged: tuple[float, ...] = ()
    ) -> SensitivityProfile:
        total = 0.0
        for _, value in per_point:
            total += value
        return cls(tuple(per_point), total, flagged)

    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.per_point])


@dataclass(frozen=True)
class MagnitudeGradient:
    """|H| and ∂|H|/∂α_i over a grid (``partials[i, k]``), with per-point flags."""

    omegas: np.ndarray
    params: tuple[float, ...]
    magnitude: np.ndarray
    partials: np.ndarray
    poles: np.ndarray
    underflow: np.ndarray

    def rcs(self) -> np.ndarray:
        """Per-point RCS; NaN where a pole or |H| underflow leaves it undefined."""
        total = np.zeros_like(self.magnitude)
        with np.errstate(all="ignore"):
            for alpha, partial in zip(self.params, self.partials, strict=True):
                total = total + alpha * partial / self.magnitude
            values = np.abs(total)
        values[self.poles | self.underflow] = np.nan
        return values


# --- realizations ------------------------------------------------------------
def _hyper_transfer(params: tuple[Scalar, ...]) -> tuple[Poly, Poly]:
    return rationalize(
        element(GAMMA3, params[0:3]), element(GAMMA3, params[3:6]), element(GAMMA3, params[6:9])
    )


def _real_transfer(params: tuple[Scalar, ...]) -> tuple[Poly, Poly]:
    return Poly(tuple(params[:4])), Poly((1.0, *params[4:]))


def _transfer_for(f: Filter) -> Transfer:
    return _hyper_transfer if isinstance(f, HyperFilter1) else _real_transfer


def magnitude_gradient(f: Filter, grid: FrequencyGrid) -> MagnitudeGradient:
    omegas = np.asarray(grid.points)
    w = 1.0 / grid.z()
    transfer = _transfer_for(f)
    params = tuple(float(p) for p in f.parameters())

    num, den = transfer(params)
    with np.errstate(all="ignore"):
        d = np.asarray(den(w), dtype=complex)
        magnitude = np.abs(np.asarray(num(w), dtype=complex) / d)
    poles = ~np.isfinite(magnitude) | (np.abs(d) <= POLE_TOL)
    # relative to the numerator scale: a transmission zero of the target
    # leaves only rounding noise in a realized numerator
    scale = max(1.0, sum(abs(complex(c)) for c in num))
    underflow = ~poles & (magnitude <= MAGNITUDE_TOL * scale)

    partials = np.empty((len(params), len(omegas)))
    with np.errstate(all="ignore"):
        for i in range(len(params)):
            num_i, den_i = transfer(seed(params, i))
            h = num_i(w) / den_i(w)
            partials[i] = np.broadcast_to(np.real(tangent(modulus(h))), omegas.shape)
    return MagnitudeGradient(omegas, params, magnitude, partials, poles, underflow)


# --- point operations ------------------------------------------------------
def _single(omega: float, convention: ZConvention) -> FrequencyGrid:
    return FrequencyGrid((omega,), convention)


def magnitude(
    f: Filter, omega: float, convention: ZConvention = ZConvention.ROTATED
) -> float:
    """|H(z(ω))| through the rationalized form."""
    num, den = _transfer_for(f)(tuple(float(p) for p in f.parameters()))
    w = 1.0 / complex(z_of(omega, convention))
    d = complex(den(w))
    if abs(d) <= POLE_TOL:
        raise PoleAtFrequency(omega)
    return abs(complex(num(w)) / d)


def rcs(f: Filter, omega: float, convention: ZConvention = ZConvention.ROTATED) -> float:
    g = magnitude_gradient(f, _single(omega, convention))
    if g.poles[0]:
        raise PoleAtFrequency(omega)
    if g.underflow[0]:
        raise MagnitudeUnderflow(omega)
    return float(g.rcs()[0])


# --- grid operations ---------------------------------------------------------
def profile(
    f: Filter, grid: FrequencyGrid | None = None, *, penalty: float | None = None
) -> SensitivityProfile:
    """RCS over a grid. Points at poles or with vanishing |H| are excluded
    (and flagged), or contribute ``penalty`` when one is given."""
    grid = grid or FrequencyGrid.uniform()
    g = magnitude_gradient(f, grid)
    values = g.rcs()
    bad = g.poles | g.underflow
    flagged = tuple(float(w) for w in g.omegas[bad])
    if flagged:
        logger.debug("sensitivity undefined at %d grid point(s): %s", len(flagged), flagged)
    per_point = []
    for omega, value, skip in zip(g.omegas, values, bad, strict=True):
        if not skip:
            per_point.append((float(omega), float(value)))
        elif penalty is not None:
            per_point.append((float(omega), float(penalty)))
    return SensitivityProfile.from_points(per_point, flagged)


def s_rcs(
    target: RealTransfer3,
    a3: float = 0.0,
    b2: float = 0.0,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
    penalty: float | None = None,
) -> SensitivityProfile:
    """S_RCS of the hypercomplex realization of ``target`` at (a3, b2)."""
    return profile(convert(target, a3, b2, branch), grid, penalty=penalty)


def ratio_profile(
    target: RealTransfer3,
    a3: float = 0.0,
    b2: float = 0.0,
    grid: FrequencyGrid | None = None,
    *,
    branch: Branch = Branch.NEGATIVE,
) -> tuple[tuple[float, float], ...]:
    """RCS(hypercomplex) / RCS(real) per grid point.

    Points where either realization has a pole or a vanishing |H| are left
    out, as in :func:`profile`.
    """
    grid = grid or FrequencyGrid.uniform()
    hyper = magnitude_gradient(convert(target, a3, b2, branch), grid)
    real = magnitude_gradient(target, grid)
    bad = hyper.poles | hyper.underflow | real.poles | real.underflow
    if np.any(bad):
        logger.warning(
            "ratio undefined at %d grid point(s): %s",
            int(np.sum(bad)), [float(w) for w in real.omegas[bad]],
        )
    h, r = hyper.rcs()[~bad], real.rcs()[~bad]
    omegas = real.omegas[~bad]
    zero = np.abs(r) <= ZERO_SENSITIVITY_TOL
    if np.any(zero):
        raise DivisionByZeroSensitivity([float(w) for w in omegas[zero]])
    return tuple((float(w), float(a / b)) for w, a, b in zip(omegas, h, r, strict=True))
