"""Symbolic expansion coefficients and their comparison with the closed forms.

Running the rationalization with sympy symbols as scalars regenerates k0, K, M,
L, T, P, Q as polynomials in a1..c3. Each is compared monomial by monomial with
the explicit closed forms (as printed, misprints included).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cache

import sympy

from .algebra import GAMMA3, element
from .synth import closed_form, rationalize

logger = logging.getLogger(__name__)

COEFFICIENTS = ("k0", "K", "M", "L", "T", "P", "Q")
_MATCH_TOL = 1e-9


@dataclass(frozen=True)
class MonomialMismatch:
    coefficient: str
    monomial: str
    oracle: float
    printed: float


@cache
def _symbols() -> tuple[sympy.Symbol, ...]:
    return sympy.symbols("a1 a2 a3 b1 b2 b3 c1 c2 c3")


@cache
def oracle_expressions() -> dict[str, sympy.Expr]:
    """k0..Q regenerated through the algebra with symbolic scalars."""
    s = _symbols()
    num, den = rationalize(element(GAMMA3, s[0:3]), element(GAMMA3, s[3:6]), element(GAMMA3, s[6:9]))
    values = list(num) + list(den)[1:]
    return {name: sympy.expand(v) for name, v in zip(COEFFICIENTS, values, strict=True)}


@cache
def closed_form_expressions(printed: bool = True) -> dict[str, sympy.Expr]:
    s = _symbols()
    form = closed_form(
        element(GAMMA3, s[0:3]), element(GAMMA3, s[3:6]), element(GAMMA3, s[6:9]), printed=printed
    )
    values = (form.k0, form.K, form.M, form.L, form.T, form.P, form.Q)
    return {name: sympy.expand(v) for name, v in zip(COEFFICIENTS, values, strict=True)}


def _monomials(expr: sympy.Expr) -> dict[str, float]:
    s = _symbols()
    poly = sympy.Poly(expr, *s)
    out: dict[str, float] = {}
    for exponents, coef in poly.as_dict().items():
        factors = [
            str(sym) if k == 1 else f"{sym}**{k}"
            for sym, k in zip(s, exponents, strict=True)
            if k
        ]
        out["*".join(factors) or "1"] = float(coef)
    return out


def monomial_report(printed: bool = True) -> list[MonomialMismatch]:
    """Every monomial whose coefficient differs between the algebra and the closed forms."""
    oracle = oracle_expressions()
    closed = closed_form_expressions(printed)
    mismatches = []
    for name in COEFFICIENTS:
        lhs, rhs = _monomials(oracle[name]), _monomials(closed[name])
        for monomial in sorted(lhs.keys() | rhs.keys()):
            a, b = lhs.get(monomial, 0.0), rhs.get(monomial, 0.0)
            if abs(a - b) > _MATCH_TOL:
                mismatches.append(MonomialMismatch(name, monomial, a, b))
    logger.debug("monomial report: %d mismatches", len(mismatches))
    return mismatches
