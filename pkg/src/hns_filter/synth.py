"""Third-order real IIR filter ⇄ first-order Γ(e,3) filter.

A real filter ``H(z) = (φ0 + φ1·w + φ2·w² + φ3·w³) / (1 + ψ1·w + ψ2·w² + ψ3·w³)``
with ``w = 1/z`` is realized as ``H_Γ = (A + B·w) / (1 + C·w)`` with hypercomplex
``A, B, C``. Rationalizing by the conjugate of ``1 + C·w`` gives a real rational
function whose denominator is ``det(I + w·regular_rep(C))`` and whose numerator
is the identity component of ``(A + B·w)·conjugate(1 + C·w)``.

Conversion solves the denominator system for ``C`` (damped Newton from a lattice
of starts), then a 3×3 linear system for ``(a2, b1, b3)`` with ``a1 = φ0`` and the
free parameters ``(a3, b2)`` fixed. Neither ``C`` nor that linear system depends
on the free parameters.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Literal

import numpy as np
from scipy import signal

from . import cache
from .algebra import (
    GAMMA3,
    HnsElement,
    adjugate_combination,
    basis,
    element,
    inverse,
    mul,
    newton_identities,
    one,
    trace,
)
from .config import (
    BRANCH_ZERO_TOL,
    LATTICE_BOUND,
    LATTICE_STEP,
    MAX_CONDITION,
    NEWTON_ACCEPT_TOL,
    NEWTON_MAX_HALVINGS,
    NEWTON_MAX_ITER,
    NEWTON_POLISH_STEPS,
    NEWTON_TOL,
    POLE_TOL,
)
from .dual import Scalar
from .errors import (
    FilterParseError,
    NearZeroNorm,
    NoRealSolution,
    PoleAtFrequency,
    SingularSystem,
)
from .poly import Poly

logger = logging.getLogger(__name__)

HYPER_PARAMETER_NAMES = ("a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3")
REAL_PARAMETER_NAMES = ("phi0", "phi1", "phi2", "phi3", "psi1", "psi2", "psi3")

# The filter algebra's identity is e1, so "identity component" is index 0.
_UNIT = 0


class Branch(StrEnum):
    """Sign of c2; the denominator system only sees c2²."""

    NEGATIVE = "negative"
    POSITIVE = "positive"


# --- Domain types -----------------------------------------------------------
@dataclass(frozen=True)
class RealTransfer3:
    num: tuple[float, float, float, float]
    den: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.num) != 4 or len(self.den) != 3:
            raise FilterParseError(
                f"expected 4 numerator and 3 denominator coefficients, "
                f"got {len(self.num)} and {len(self.den)}"
            )
        num = tuple(float(v) for v in self.num)
        den = tuple(float(v) for v in self.den)
        if not all(np.isfinite(num + den)):
            raise FilterParseError("filter coefficients must be finite")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def parameters(self) -> tuple[float, ...]:
        """(φ0, φ1, φ2, φ3, ψ1, ψ2, ψ3)."""
        return self.num + self.den

    @classmethod
    def from_parameters(cls, params: tuple[float, ...]) -> RealTransfer3:
        return cls(params[:4], params[4:])  # type: ignore[arg-type]

    def poles(self) -> np.ndarray:
        """Roots of z³ + ψ1·z² + ψ2·z + ψ3."""
        _, poles, _ = signal.tf2zpk(self.num, (1.0, *self.den))
        return np.asarray(poles)

    def is_stable(self) -> bool:
        return bool(np.all(np.abs(self.poles()) < 1.0))


@dataclass(frozen=True)
class FreeParameters:
    a3: float = 0.0
    b2: float = 0.0


@dataclass(frozen=True)
class HyperFilter1:
    A: HnsElement
    B: HnsElement
    C: HnsElement
    free: FreeParameters = FreeParameters()

    def __post_init__(self) -> None:
        for name, value in (("A", self.A), ("B", self.B), ("C", self.C)):
            if value.table is not GAMMA3:
                raise FilterParseError(f"{name} must be a Γ(e,3) element")
        if self.A.coeffs[2] != self.free.a3 or self.B.coeffs[1] != self.free.b2:
            raise FilterParseError("free parameters disagree with A[3] / B[2]")

    def parameters(self) -> tuple[float, ...]:
        """(a1, a2, a3, b1, b2, b3, c1, c2, c3)."""
        return self.A.coeffs + self.B.coeffs + self.C.coeffs

    @classmethod
    def from_parameters(cls, params: tuple[float, ...]) -> HyperFilter1:
        return cls(
            element(GAMMA3, params[0:3]),
            element(GAMMA3, params[3:6]),
            element(GAMMA3, params[6:9]),
            FreeParameters(params[2], params[4]),
        )


@dataclass(frozen=True)
class ExpandedForm:
    k0: float
    K: float
    M: float
    L: float
    T: float
    P: float
    Q: float

    def numerator(self) -> tuple[float, float, float, float]:
        return (self.k0, self.K, self.M, self.L)

    def denominator(self) -> tuple[float, float, float]:
        return (self.T, self.P, self.Q)

    def as_transfer(self) -> RealTransfer3:
        return RealTransfer3(self.numerator(), self.denominator())

    def residual(self, target: RealTransfer3) -> float:
        """Largest coefficient mismatch against ``target``."""
        mine = self.numerator() + self.denominator()
        return max(abs(a - b) for a, b in zip(mine, target.parameters(), strict=True))


type Filter = HyperFilter1 | RealTransfer3


# --- Rationalization --------------------------------------------------------
def _is_float_tuple(values: tuple[Any, ...]) -> bool:
    return all(isinstance(v, float) for v in values)


def _conjugate_and_norm(C: HnsElement) -> tuple[Poly, Poly]:
    """conjugate(1 + C·w) as a polynomial of elements, and its norm polynomial."""
    table = C.table
    x = Poly((one(table), C))
    powers = [Poly((one(table),))]
    for _ in range(table.dim):
        powers.append(powers[-1] * x)
    power_sums = [p.map(trace) for p in powers[1:]]
    e = newton_identities(power_sums, Poly((1.0,)))
    conj: Poly = adjugate_combination(e, powers[: table.dim])
    return conj, e[table.dim]


def conjugate_and_norm(C: HnsElement) -> tuple[Poly, Poly]:
    """Cached for real-valued ``C`` (it only depends on the target filter)."""
    if _is_float_tuple(C.coeffs):
        return cache.get_or_compute(
            ("conjugate", C.table.name, C.coeffs), lambda: _conjugate_and_norm(C)
        )
    return _conjugate_and_norm(C)


def rationalize(A: HnsElement, B: HnsElement, C: HnsElement) -> tuple[Poly, Poly]:
    """Real numerator and denominator of (A + B·w) / (1 + C·w) in powers of w.

    Works for any scalar kind the elements carry: floats, complex, duals or
    sympy symbols.
    """
    conj, den = conjugate_and_norm(C)
    num = Poly((A, B)) * conj
    return num.map(lambda h: h.coeffs[_UNIT]), den


def expand(f: HyperFilter1) -> ExpandedForm:
    num, den = rationalize(f.A, f.B, f.C)
    k0, K, M, L = (float(v) for v in num)
    _, T, P, Q = (float(v) for v in den)
    return ExpandedForm(k0, K, M, L, T, P, Q)


def closed_form(
    A: HnsElement, B: HnsElement, C: HnsElement, *, printed: bool = False
) -> ExpandedForm:
    """Explicit polynomials in the coefficients (any scalar kind).

    With ``printed=True`` the two known misprints are reproduced (T uses c2
    in place of c3 and K carries −a3·c3 in place of −2·a3·c3) so the effect
    of the misprints can be measured.
    """
    a1, a2, a3 = A.coeffs
    b1, b2, b3 = B.coeffs
    c1, c2, c3 = C.coeffs
    K = 2 * a1 * c1 - 3 * a1 * c3 + a2 * c2 - (1 if printed else 2) * a3 * c3 + b1
    M = (
        a1 * (c1 * c1 - 3 * c1 * c3 + 2 * c2 * c2 + 2 * c3 * c3)
        + a2 * c2 * (c1 + c3)
        + 2 * a3 * (c2 * c2 - c1 * c3 + 2 * c3 * c3)
        + b1 * (2 * c1 - 3 * c3)
        + b2 * c2
        - 2 * b3 * c3
    )
    L = (
        b1 * (c1 * c1 - 3 * c1 * c3 + 2 * c2 * c2 + 2 * c3 * c3)
        + b2 * c2 * (c1 + c3)
        + 2 * b3 * (c2 * c2 - c1 * c3 + 2 * c3 * c3)
    )
    T = 3 * c1 - 3 * (c2 if printed else c3)
    P = 3 * c1 * c1 - 6 * c1 * c3 + 3 * c2 * c2
    Q = c1**3 - 3 * c1 * c1 * c3 + 3 * c1 * c2 * c2 + 3 * c2 * c2 * c3 + 4 * c3**3
    return ExpandedForm(a1, K, M, L, T, P, Q)


def expand_closed_form(f: HyperFilter1, *, printed: bool = False) -> ExpandedForm:
    return closed_form(f.A, f.B, f.C, printed=printed)


def round_trip_residual(f: HyperFilter1, target: RealTransfer3) -> float:
    return expand(f).residual(target)


# --- Denominator: T(C), P(C), Q(C) = ψ1, ψ2, ψ3 ---------------------------
def _char_system(
    c: np.ndarray, rep_basis: np.ndarray, psi: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals and Jacobians of the characteristic coefficients, batched over rows."""
    L = np.einsum("ni,ikj->nkj", c, rep_basis)
    L2 = L @ L
    T = np.trace(L, axis1=1, axis2=2)
    P = 0.5 * (T * T - np.trace(L2, axis1=1, axis2=2))
    Q = np.linalg.det(L)
    eye = np.eye(c.shape[1])
    adj = L2 - T[:, None, None] * L + P[:, None, None] * eye

    tr_r = np.trace(rep_basis, axis1=1, axis2=2)
    dT = np.broadcast_to(tr_r, c.shape)
    dP = T[:, None] * tr_r - np.einsum("nkj,ijk->ni", L, rep_basis)
    dQ = np.einsum("nkj,ijk->ni", adj, rep_basis)

    F = np.stack([T, P, Q], axis=1) - psi
    J = np.stack([dT, dP, dQ], axis=1)
    return F, J


def _newton_steps(J: np.ndarray, F: np.ndarray) -> np.ndarray:
    steps = np.full_like(F, np.nan)
    finite = np.all(np.isfinite(J), axis=(1, 2)) & np.all(np.isfinite(F), axis=1)
    det = np.where(finite, np.linalg.det(np.where(finite[:, None, None], J, 0.0)), 0.0)
    regular = finite & (np.abs(det) > 1e-14)
    singular = finite & ~regular
    if np.any(regular):
        steps[regular] = -np.linalg.solve(J[regular], F[regular][..., None])[..., 0]
    if np.any(singular):
        steps[singular] = -(np.linalg.pinv(J[singular]) @ F[singular][..., None])[..., 0]
    return steps


def _residual(F: np.ndarray) -> np.ndarray:
    return np.max(np.abs(F), axis=1)


def _lattice() -> np.ndarray:
    axis = np.arange(-LATTICE_BOUND, LATTICE_BOUND + 0.5 * LATTICE_STEP, LATTICE_STEP)
    return np.array(list(itertools.product(axis, repeat=3)))


def _solve_denominator(psi: tuple[float, float, float], branch: Branch) -> HnsElement:
    rep_basis = GAMMA3.rep_basis
    target = np.asarray(psi)
    c = _lattice()
    with np.errstate(all="ignore"):
        F, J = _char_system(c, rep_basis, target)
        res = _residual(F)
        active = np.isfinite(res) & (res > NEWTON_TOL)

        for _ in range(NEWTON_MAX_ITER):
            idx = np.flatnonzero(active)
            if not idx.size:
                break
            steps = _newton_steps(J[idx], F[idx])
            ok = np.all(np.isfinite(steps), axis=1)
            active[idx[~ok]] = False
            pending, steps = idx[ok], steps[ok]
            t = 1.0
            for _ in range(NEWTON_MAX_HALVINGS + 1):
                if not pending.size:
                    break
                trial = c[pending] + t * steps
                F_t, J_t = _char_system(trial, rep_basis, target)
                r_t = _residual(F_t)
                better = np.isfinite(r_t) & (r_t < res[pending])
                won = pending[better]
                c[won], F[won], J[won], res[won] = trial[better], F_t[better], J_t[better], r_t[better]
                pending, steps = pending[~better], steps[~better]
                t *= 0.5
            active[pending] = False  # no descent along the damped step
            active &= res > NEWTON_TOL

    if branch is Branch.NEGATIVE:
        on_branch = c[:, 1] <= BRANCH_ZERO_TOL
    else:
        on_branch = c[:, 1] >= -BRANCH_ZERO_TOL
    candidates = np.flatnonzero((res <= NEWTON_ACCEPT_TOL) & on_branch)
    logger.debug(
        "denominator %s: %d/%d starts converged, %d on the %s branch",
        psi, int(np.sum(res <= NEWTON_ACCEPT_TOL)), len(c), candidates.size, branch,
    )
    if not candidates.size:
        finite = res[np.isfinite(res)]
        raise NoRealSolution(float(finite.min()) if finite.size else float("inf"))

    # argmin keeps the lowest lattice index among equal residuals
    pick = int(candidates[np.argmin(res[candidates])])
    best, best_res = c[pick : pick + 1].copy(), float(res[pick])
    for _ in range(NEWTON_POLISH_STEPS):
        F_b, J_b = _char_system(best, rep_basis, target)
        trial = best + _newton_steps(J_b, F_b)
        r_t = float(_residual(_char_system(trial, rep_basis, target)[0])[0])
        if not r_t < best_res:
            break
        best, best_res = trial, r_t
    return element(GAMMA3, tuple(float(v) for v in best[0]))


def solve_denominator(target: RealTransfer3, branch: Branch = Branch.NEGATIVE) -> HnsElement:
    """C with det(I + w·regular_rep(C)) = 1 + ψ1·w + ψ2·w² + ψ3·w³."""
    branch = Branch(branch)
    return cache.get_or_compute(
        ("denominator", target.den, branch),
        lambda: _solve_denominator(target.den, branch),
    )


# --- Numerator: linear in (A, B) for a fixed C -------------------------------
def _unit_projections(C: HnsElement) -> list[tuple[float, ...]]:
    """Identity component of e_i·conjugate(1 + C·w), per basis element, in powers of w."""
    conj, _ = conjugate_and_norm(C)
    return [
        tuple(float(mul(basis(C.table, i), h).coeffs[_UNIT]) for h in conj)
        for i in range(C.table.dim)
    ]


def solve_numerator(
    target: RealTransfer3, C: HnsElement, a3: float = 0.0, b2: float = 0.0
) -> tuple[HnsElement, HnsElement]:
    """(A, B) with a1 = φ0, the given (a3, b2), and (a2, b1, b3) solved for."""
    proj = _unit_projections(C)
    a1 = target.num[0]

    def contribution(i: int, shift: int) -> np.ndarray:
        # coefficients of w¹..w³ contributed by a unit a_{i+1} (shift 0) or b_{i+1} (shift 1)
        out = np.zeros(4)
        out[shift : shift + len(proj[i])] = proj[i]
        return out[1:]

    system = np.column_stack([contribution(1, 0), contribution(0, 1), contribution(2, 1)])
    rhs = (
        np.asarray(target.num[1:])
        - a1 * contribution(0, 0)
        - a3 * contribution(2, 0)
        - b2 * contribution(1, 1)
    )

    with np.errstate(divide="ignore", invalid="ignore"):
        condition = float(np.linalg.cond(system))
    if condition <= MAX_CONDITION:
        a2, b1, b3 = np.linalg.solve(system, rhs)
    else:
        # A rank-deficient but consistent system (e.g. C = 0) takes the
        # minimum-norm solution; an inconsistent one has no realization.
        solution, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        if np.max(np.abs(system @ solution - rhs)) > 1e-9 * (1.0 + np.max(np.abs(rhs))):
            raise SingularSystem(condition)
        logger.info("numerator system is rank-deficient (cond %.3e); using minimum-norm solution", condition)
        a2, b1, b3 = solution

    A = element(GAMMA3, (a1, float(a2), float(a3)))
    B = element(GAMMA3, (float(b1), float(b2), float(b3)))
    return A, B


def convert(
    target: RealTransfer3,
    a3: float = 0.0,
    b2: float = 0.0,
    branch: Branch = Branch.NEGATIVE,
) -> HyperFilter1:
    C = solve_denominator(target, branch)
    A, B = solve_numerator(target, C, a3, b2)
    return HyperFilter1(A, B, C, FreeParameters(A.coeffs[2], B.coeffs[1]))


# --- Evaluation --------------------------------------------------------------
def _at_origin(num: tuple[float, ...], den: tuple[float, ...]) -> complex:
    """H(0), the limit w → ∞: ratio of the leading terms in w."""
    full_den = (1.0, *den)
    dn = max((k for k, c in enumerate(num) if c != 0.0), default=-1)
    dd = max(k for k, c in enumerate(full_den) if c != 0.0)
    if dn > dd:
        raise PoleAtFrequency(0.0)
    if dn < dd:
        return 0j
    return complex(num[dn] / full_den[dd])


def _rational(num: tuple[float, ...], den: tuple[float, ...], z: complex) -> complex:
    if z == 0:
        return _at_origin(num, den)
    w = 1.0 / z
    d = Poly((1.0, *den))(w)
    if abs(d) <= POLE_TOL:
        raise PoleAtFrequency(float(np.angle(z)))
    return complex(Poly(num)(w) / d)


def evaluate(
    f: Filter, z: complex, *, path: Literal["rationalized", "direct"] = "rationalized"
) -> complex:
    """H at ``z``. Hypercomplex filters can also be evaluated directly as
    (A + B·w)·(1 + C·w)⁻¹ with complex scalars, taking the identity component.
    At z = 0 the direct path is B·C⁻¹, or the rationalized limit when C is singular."""
    if isinstance(f, RealTransfer3):
        return _rational(f.num, f.den, z)
    if path == "direct" and z == 0:
        try:
            return complex(mul(f.B, inverse(f.C)).coeffs[_UNIT])
        except NearZeroNorm:
            logger.debug("C is singular; evaluating H(0) through the rationalized form")
    if path == "rationalized" or z == 0:
        form = expand(f)
        return _rational(form.numerator(), form.denominator(), z)
    w: Scalar = 1.0 / complex(z)
    numerator = f.A + f.B * w
    denominator = one(GAMMA3) + f.C * w
    return complex(mul(numerator, inverse(denominator)).coeffs[_UNIT])

