"""Forward-mode dual numbers with one derivative channel.

``Dual(val, eps)`` represents ``val + eps·ε`` with ``ε² = 0``. Both parts may be
real or complex Python/NumPy scalars, or NumPy arrays (one dual per grid point),
so a single pass threads a derivative through a whole frequency grid.
"""

from __future__ import annotations

from typing import Any

import numpy as np

type Scalar = Any  # float | complex | ndarray | Dual | sympy.Expr


class Dual:
    __slots__ = ("val", "eps")

    # Make NumPy defer to our reflected operators instead of building object
    # arrays when an ndarray sits on the left.
    __array_ufunc__ = None

    def __init__(self, val: Scalar, eps: Scalar = 0.0) -> None:
        self.val = val
        self.eps = eps

    def __repr__(self) -> str:
        return f"Dual({self.val!r}, {self.eps!r})"

    # --- arithmetic ---------------------------------------------------------
    def __add__(self, other: object) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.val + other.val, self.eps + other.eps)
        if _is_plain(other):
            return Dual(self.val + other, self.eps)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.val - other.val, self.eps - other.eps)
        if _is_plain(other):
            return Dual(self.val - other, self.eps)
        return NotImplemented

    def __rsub__(self, other: object) -> Dual:
        if _is_plain(other):
            return Dual(other - self.val, -self.eps)
        return NotImplemented

    def __mul__(self, other: object) -> Dual:
        if isinstance(other, Dual):
            return Dual(self.val * other.val, self.val * other.eps + self.eps * other.val)
        if _is_plain(other):
            return Dual(self.val * other, self.eps * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Dual:
        if isinstance(other, Dual):
            return Dual(
                self.val / other.val,
                (self.eps * other.val - self.val * other.eps) / (other.val * other.val),
            )
        if _is_plain(other):
            return Dual(self.val / other, self.eps / other)
        return NotImplemented

    def __rtruediv__(self, other: object) -> Dual:
        if _is_plain(other):
            return Dual(other / self.val, -other * self.eps / (self.val * self.val))
        return NotImplemented

    def __neg__(self) -> Dual:
        return Dual(-self.val, -self.eps)

    def __pos__(self) -> Dual:
        return self

    def __pow__(self, power: int) -> Dual:
        if not isinstance(power, int) or power < 0:
            return NotImplemented
        return Dual(self.val**power, power * self.val ** (power - 1) * self.eps)

    # --- complex structure (R-linear, so derivatives pass straight through) --
    @property
    def real(self) -> Dual:
        return Dual(np.real(self.val), np.real(self.eps))

    @property
    def imag(self) -> Dual:
        return Dual(np.imag(self.val), np.imag(self.eps))

    def conjugate(self) -> Dual:
        return Dual(np.conj(self.val), np.conj(self.eps))


def _is_plain(x: object) -> bool:
    return isinstance(x, (int, float, complex, np.number, np.ndarray))


def primal(x: Scalar) -> Scalar:
    """Value part of a dual (identity on plain scalars)."""
    return x.val if isinstance(x, Dual) else x


def tangent(x: Scalar) -> Scalar:
    """Derivative part of a dual; plain scalars carry a zero derivative."""
    return x.eps if isinstance(x, Dual) else np.zeros_like(np.real(x))


def modulus(h: Scalar) -> Scalar:
    """|h| for complex ``h``; for duals d|h| = Re(conj(h)·dh) / |h|."""
    if isinstance(h, Dual):
        m = np.abs(h.val)
        return Dual(m, np.real(np.conj(h.val) * h.eps) / m)
    return np.abs(h)


def seed(values: tuple[float, ...], index: int) -> tuple[Scalar, ...]:
    """Copy of ``values`` with entry ``index`` promoted to a unit-tangent dual.

    Only the seeded entry becomes a dual, so everything that does not depend on
    it stays in plain float arithmetic.
    """
    return tuple(Dual(v, 1.0) if i == index else v for i, v in enumerate(values))
