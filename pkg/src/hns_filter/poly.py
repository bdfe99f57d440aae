"""Dense univariate polynomials over any commutative ring of coefficients.

A polynomial is a tuple of coefficients, lowest power first, so ``Poly((1, T,
P, Q))`` is ``1 + T·w + P·w² + Q·w³``. Coefficients only need ``+``, ``-`` and
``*``: plain scalars, duals, sympy expressions and hypercomplex elements all
work, which is what lets the rationalization run once for every scalar kind.

No normalization is done; lengths are structural (there is no generic zero
test for duals or symbols).
"""

from __future__ import annotations

from collections.abc import Iterator
from typing import Any


class Poly:
    __slots__ = ("coeffs",)

    __array_ufunc__ = None

    def __init__(self, coeffs: tuple[Any, ...]) -> None:
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        self.coeffs = tuple(coeffs)

    def __repr__(self) -> str:
        return f"Poly({self.coeffs!r})"

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.coeffs)

    def __getitem__(self, power: int) -> Any:
        return self.coeffs[power]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def map(self, fn: Any) -> Poly:
        """Apply ``fn`` to every coefficient (e.g. a component projection)."""
        return Poly(tuple(fn(c) for c in self.coeffs))

    # --- ring operations ----------------------------------------------------
    def __add__(self, other: object) -> Poly:
        b = other.coeffs if isinstance(other, Poly) else (other,)
        a = self.coeffs
        if len(a) >= len(b):
            return Poly(tuple(x + y for x, y in zip(a, b, strict=False)) + a[len(b) :])
        return Poly(tuple(x + y for x, y in zip(a, b, strict=False)) + b[len(a) :])

    def __radd__(self, other: object) -> Poly:
        return self + other

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: object) -> Poly:
        return self + (-other)  # type: ignore[operator]

    def __rsub__(self, other: object) -> Poly:
        return (-self) + other

    def __mul__(self, other: object) -> Poly:
        if not isinstance(other, Poly):
            return Poly(tuple(c * other for c in self.coeffs))
        out: list[Any] = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                term = a * b
                out[i + j] = term if out[i + j] is None else out[i + j] + term
        return Poly(tuple(out))

    def __rmul__(self, other: object) -> Poly:
        return Poly(tuple(other * c for c in self.coeffs))

    def __truediv__(self, divisor: object) -> Poly:
        if isinstance(divisor, Poly):
            return NotImplemented
        return Poly(tuple(c / divisor for c in self.coeffs))

    def __call__(self, w: Any) -> Any:
        """Horner evaluation; ``w`` may be a scalar or an array of points."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * w + c
        return acc
