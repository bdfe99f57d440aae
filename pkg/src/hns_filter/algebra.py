"""Table-driven arithmetic for finite-dimensional commutative hypercomplex systems.

An ``AlgebraTable`` holds structure constants ``gamma[i, j, k]`` (the coefficient
of ``e_k`` in ``e_i·e_j``, 0-based). ``HnsElement`` values carry a coefficient
tuple whose scalars may be real, complex, dual or symbolic; every operation here
only uses ``+``, ``-``, ``*`` and ``/`` on them.

Norm and conjugate come from the regular representation ``L_x`` (the matrix of
``y ↦ x·y``): the norm is ``det L_x`` and the conjugate is ``adj(L_x)`` applied to
the identity, so ``x·conjugate(x) = norm(x)·1``. Both are obtained without
matrices through Newton's identities on traces of powers and the Cayley–Hamilton
form of the adjugate, which keeps them scalar-generic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .config import SINGULAR_TOL, TABLE_CHECK_TOL
from .dual import Scalar, primal
from .errors import NearZeroNorm, TableError, TableMismatchError

logger = logging.getLogger(__name__)

# (i, j, ((k, gamma_ijk), ...)) for every basis pair with a nonzero product.
type _Products = tuple[tuple[int, int, tuple[tuple[int, float], ...]], ...]


class ConstantCount(NamedTuple):
    raw: int  # nonzero gamma[i, j, k] with i, j off the identity
    per_cell: int  # same, counting each unordered pair {i, j} once


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    name: str
    gamma: np.ndarray
    basis_names: tuple[str, ...] = ()
    products: _Products = field(init=False, repr=False)
    identity: tuple[float, ...] = field(init=False)
    trace_form: tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        gamma = np.array(self.gamma, dtype=float)
        if gamma.ndim != 3 or len(set(gamma.shape)) != 1 or gamma.shape[0] < 1:
            raise TableError(f"{self.name}: gamma must be a dim×dim×dim array")
        gamma.setflags(write=False)
        dim = gamma.shape[0]
        names = self.basis_names or tuple(f"e{k + 1}" for k in range(dim))
        if len(names) != dim:
            raise TableError(f"{self.name}: expected {dim} basis names")

        products = tuple(
            (
                i,
                j,
                tuple(
                    (k, float(gamma[i, j, k]))
                    for k in range(dim)
                    if gamma[i, j, k] != 0.0
                ),
            )
            for i in range(dim)
            for j in range(dim)
            if np.any(gamma[i, j] != 0.0)
        )
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "products", products)
        object.__setattr__(self, "identity", _solve_identity(self.name, gamma))
        object.__setattr__(
            self,
            "trace_form",
            tuple(float(np.trace(gamma[i].T)) for i in range(dim)),
        )

    @property
    def dim(self) -> int:
        return int(self.gamma.shape[0])

    @property
    def rep_basis(self) -> np.ndarray:
        """``rep_basis[i]`` is the regular representation of ``e_i``."""
        return np.transpose(self.gamma, (0, 2, 1))

    def identity_index(self) -> int | None:
        """Index of the basis element that is the identity, if there is one."""
        ident = np.asarray(self.identity)
        for k in range(self.dim):
            if np.array_equal(ident, np.eye(self.dim)[k]):
                return k
        return None

    def is_commutative(self, tol: float = TABLE_CHECK_TOL) -> bool:
        return bool(np.max(np.abs(self.gamma - self.gamma.transpose(1, 0, 2))) <= tol)

    def is_associative(self, tol: float = TABLE_CHECK_TOL) -> bool:
        """(e_i·e_j)·e_k == e_i·(e_j·e_k) on every basis triple."""
        g = self.gamma
        left = np.einsum("ijm,mkn->ijkn", g, g)
        right = np.einsum("jkm,imn->ijkn", g, g)
        return bool(np.max(np.abs(left - right)) <= tol)

    def check(self) -> None:
        """Raise ``TableError`` unless the table is commutative and associative."""
        if not self.is_commutative():
            raise TableError(f"{self.name}: multiplication is not commutative")
        if not self.is_associative():
            raise TableError(f"{self.name}: multiplication is not associative")

    def nonzero_constants(self, tol: float = TABLE_CHECK_TOL) -> ConstantCount:
        skip = self.identity_index()
        raw = per_cell = 0
        for i in range(self.dim):
            for j in range(self.dim):
                if skip in (i, j):
                    continue
                n = int(np.count_nonzero(np.abs(self.gamma[i, j]) > tol))
                raw += n
                if i <= j:
                    per_cell += n
        return ConstantCount(raw, per_cell)


def _solve_identity(name: str, gamma: np.ndarray) -> tuple[float, ...]:
    dim = gamma.shape[0]
    eye = np.eye(dim)
    for k in range(dim):
        if np.array_equal(gamma[k], eye) and np.array_equal(gamma[:, k, :], eye):
            return tuple(float(v) for v in eye[k])
    # u_i gamma[i, j, k] = delta_jk for all j, k (left and right).
    system = np.concatenate(
        [gamma.reshape(dim, dim * dim).T, gamma.transpose(1, 0, 2).reshape(dim, -1).T]
    )
    rhs = np.concatenate([eye.ravel(), eye.ravel()])
    u, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    if np.max(np.abs(system @ u - rhs)) > 1e-9:
        raise TableError(f"{name}: no two-sided identity element")
    return tuple(float(v) for v in u)


def _table(
    name: str,
    dim: int,
    rules: dict[tuple[int, int], dict[int, float]],
    basis_names: tuple[str, ...] = (),
) -> AlgebraTable:
    """Build a commutative table from the products listed for i <= j (1-based)."""
    gamma = np.zeros((dim, dim, dim))
    for (i, j), expansion in rules.items():
        for k, coef in expansion.items():
            gamma[i - 1, j - 1, k - 1] = coef
            gamma[j - 1, i - 1, k - 1] = coef
    table = AlgebraTable(name, gamma, basis_names)
    table.check()
    return table


def gamma3() -> AlgebraTable:
    """Γ(e,3): e2² = −e1 + e3, e2·e3 = −2e2, e3² = 2e1 − e3, e1 the identity."""
    rules = {(1, k): {k: 1.0} for k in (1, 2, 3)}
    rules |= {(2, 2): {1: -1.0, 3: 1.0}, (2, 3): {2: -2.0}, (3, 3): {1: 2.0, 3: -1.0}}
    return _table("Γ(e,3)", 3, rules)


def real_plus_complex() -> AlgebraTable:
    """R⊕C: E1 an orthogonal idempotent, E2 the complex unit's 1, E3² = −E2."""
    rules = {(1, 1): {1: 1.0}, (2, 2): {2: 1.0}, (2, 3): {3: 1.0}, (3, 3): {2: -1.0}}
    return _table("R⊕C", 3, rules, ("E1", "E2", "E3"))


GAMMA3 = gamma3()
RC = real_plus_complex()


@dataclass(frozen=True)
class HnsElement:
    table: AlgebraTable
    coeffs: tuple[Any, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.table.dim:
            raise TableMismatchError(
                f"{self.table.name} needs {self.table.dim} coefficients, "
                f"got {len(self.coeffs)}"
            )

    def __repr__(self) -> str:
        return f"HnsElement({self.table.name}, {self.coeffs!r})"

    def __add__(self, other: object) -> HnsElement:
        if not isinstance(other, HnsElement):
            return NotImplemented
        _same_table(self, other)
        return HnsElement(self.table, tuple(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __sub__(self, other: object) -> HnsElement:
        if not isinstance(other, HnsElement):
            return NotImplemented
        _same_table(self, other)
        return HnsElement(self.table, tuple(a - b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    def __neg__(self) -> HnsElement:
        return HnsElement(self.table, tuple(-c for c in self.coeffs))

    def __mul__(self, other: object) -> HnsElement:
        if isinstance(other, HnsElement):
            return mul(self, other)
        if hasattr(other, "coeffs"):  # polynomials multiply from their side
            return NotImplemented
        return HnsElement(self.table, tuple(c * other for c in self.coeffs))

    def __rmul__(self, other: object) -> HnsElement:
        return HnsElement(self.table, tuple(other * c for c in self.coeffs))

    def __truediv__(self, scalar: object) -> HnsElement:
        return HnsElement(self.table, tuple(c / scalar for c in self.coeffs))


def _same_table(x: HnsElement, y: HnsElement) -> None:
    if x.table is not y.table:
        raise TableMismatchError(
            f"operands belong to different tables ({x.table.name}, {y.table.name})"
        )


# --- constructors -----------------------------------------------------------
def element(table: AlgebraTable, coeffs: tuple[Scalar, ...] | list[Scalar]) -> HnsElement:
    return HnsElement(table, tuple(coeffs))


def basis(table: AlgebraTable, k: int) -> HnsElement:
    """The basis element ``e_{k+1}`` (0-based ``k``)."""
    return HnsElement(table, tuple(1.0 if i == k else 0.0 for i in range(table.dim)))


def one(table: AlgebraTable) -> HnsElement:
    return HnsElement(table, table.identity)


def zero(table: AlgebraTable) -> HnsElement:
    return HnsElement(table, (0.0,) * table.dim)


# --- operations -------------------------------------------------------------
def mul(x: HnsElement, y: HnsElement) -> HnsElement:
    """Bilinear product through the structure constants."""
    _same_table(x, y)
    out: list[Any] = [0.0] * x.table.dim
    xc, yc = x.coeffs, y.coeffs
    for i, j, targets in x.table.products:
        p = xc[i] * yc[j]
        for k, g in targets:
            out[k] = out[k] + (p if g == 1.0 else g * p)
    return HnsElement(x.table, tuple(out))


def power(x: HnsElement, k: int) -> HnsElement:
    if k < 0:
        raise ValueError("negative powers go through inverse()")
    result = one(x.table)
    for _ in range(k):
        result = mul(result, x)
    return result


def regular_rep(x: HnsElement) -> np.ndarray:
    """Matrix of ``y ↦ x·y``; column ``j`` holds the coefficients of ``x·e_j``."""
    coeffs = np.asarray(x.coeffs)
    return np.tensordot(coeffs, x.table.gamma, axes=(0, 0)).T


def trace(x: HnsElement) -> Scalar:
    """Trace of the regular representation (a linear functional)."""
    acc: Any = 0.0
    for c, t in zip(x.coeffs, x.table.trace_form, strict=True):
        if t != 0.0:
            acc = acc + t * c
    return acc


def newton_identities(power_sums: list[Any], unit: Any) -> list[Any]:
    """Elementary symmetric functions e_0..e_n from power sums p_1..p_n.

    For power sums of a regular representation these are the coefficients of
    det(I + w·L). Works over any ring containing the rationals, including
    polynomials in w.
    """
    e = [unit]
    for k in range(1, len(power_sums) + 1):
        acc: Any = None
        for i in range(1, k + 1):
            term = e[k - i] * power_sums[i - 1]
            if i % 2 == 0:
                term = -term
            acc = term if acc is None else acc + term
        e.append(acc / k)
    return e


def adjugate_combination(e: list[Any], powers: list[Any]) -> Any:
    """Cayley–Hamilton adjugate: sum_j (-1)^j e_{n-1-j} x^j, ``powers[j] = x^j``."""
    n = len(e) - 1
    acc: Any = None
    for j in range(n):
        term = e[n - 1 - j] * powers[j]
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _char_data(x: HnsElement) -> tuple[list[Any], list[HnsElement]]:
    n = x.table.dim
    powers = [one(x.table)]
    for _ in range(n):
        powers.append(mul(powers[-1], x))
    e = newton_identities([trace(p) for p in powers[1:]], 1.0)
    return e, powers[:n]


def char_coeffs(x: HnsElement) -> tuple[Scalar, ...]:
    """Coefficients (1, e_1, ..., e_n) of det(I + w·regular_rep(x)) in w."""
    e, _ = _char_data(x)
    return tuple(e)


def norm(x: HnsElement) -> Scalar:
    """det(regular_rep(x))."""
    e, _ = _char_data(x)
    return e[-1]


def conjugate(x: HnsElement) -> HnsElement:
    """adj(regular_rep(x)) applied to the identity: x·conjugate(x) = norm(x)·1."""
    e, powers = _char_data(x)
    result: HnsElement = adjugate_combination(e, powers)
    return result


def inverse(x: HnsElement) -> HnsElement:
    e, powers = _char_data(x)
    n = e[-1]
    scale = max(abs(primal(c)) for c in x.coeffs)
    if scale == 0.0 or abs(primal(n)) <= SINGULAR_TOL * scale**x.table.dim:
        raise NearZeroNorm(complex(primal(n)))
    conj: HnsElement = adjugate_combination(e, powers)
    return conj / n


def format_element(x: HnsElement, digits: int = 10) -> str:
    """Human-readable ``c1·e1 + c2·e2 + ...`` with ``digits`` significant digits."""
    terms = []
    for c, name in zip(x.coeffs, x.table.basis_names, strict=True):
        value = complex(primal(c))
        text = f"{value.real:.{digits}g}" if value.imag == 0 else f"({value:.{digits}g})"
        terms.append(f"{text}·{name}")
    return " + ".join(terms).replace("+ -", "- ")
