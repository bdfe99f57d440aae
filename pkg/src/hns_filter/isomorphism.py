"""Isomorphisms between three-dimensional commutative algebras with identity.

Each algebra is split by a nontrivial idempotent ``u`` into a one-dimensional
block (spanned by ``u``) and a two-dimensional block with identity ``f = 1 − u``.
The two-dimensional block gets a unit ``j`` with ``j² = −f`` (complex),
``j² = f`` (split) or ``j² = 0`` (nilpotent). Mapping canonical basis to
canonical basis gives the isomorphism when both algebras have the same block
kind.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from .algebra import AlgebraTable
from .config import (
    IDEMPOTENT_ITERATIONS,
    IDEMPOTENT_STARTS,
    IDEMPOTENT_TOL,
    ISOMORPHISM_CHECK_TOL,
    ISOMORPHISM_SEED,
)
from .errors import NoIsomorphismFound

logger = logging.getLogger(__name__)

_TRIVIAL_TOL = 1e-6
_RANK_TOL = 1e-8


class BlockKind(StrEnum):
    COMPLEX = "complex"
    SPLIT = "split"
    NILPOTENT = "nilpotent"


@dataclass(frozen=True)
class CanonicalBasis:
    """Columns ``[u, f, j]`` as coefficient vectors of the source table."""

    matrix: np.ndarray
    kind: BlockKind


def _rep(table: AlgebraTable, x: np.ndarray) -> np.ndarray:
    return np.tensordot(x, table.rep_basis, axes=1)


def _product(table: AlgebraTable, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return _rep(table, x) @ y


def find_idempotent(
    table: AlgebraTable,
    *,
    starts: int = IDEMPOTENT_STARTS,
    iterations: int = IDEMPOTENT_ITERATIONS,
    seed: int = ISOMORPHISM_SEED,
) -> np.ndarray:
    """A nontrivial ``u`` with ``u·u = u`` (Newton from seeded random starts)."""
    ident = np.asarray(table.identity)
    eye = np.eye(table.dim)
    rng = np.random.default_rng(seed)
    for _ in range(starts):
        u = rng.uniform(-1.5, 1.5, table.dim)
        for _ in range(iterations):
            rep = _rep(table, u)
            residual = rep @ u - u
            if np.max(np.abs(residual)) < IDEMPOTENT_TOL:
                break
            try:
                u = u - np.linalg.solve(2.0 * rep - eye, residual)
            except np.linalg.LinAlgError:
                break
            if not np.all(np.isfinite(u)):
                break
        else:
            continue
        if np.max(np.abs(_product(table, u, u) - u)) >= IDEMPOTENT_TOL:
            continue
        if np.linalg.norm(u) > _TRIVIAL_TOL and np.linalg.norm(u - ident) > _TRIVIAL_TOL:
            return u
    raise NoIsomorphismFound(f"{table.name}: no nontrivial idempotent found")


def canonical_basis(table: AlgebraTable) -> CanonicalBasis:
    if table.dim != 3:
        raise NoIsomorphismFound(f"{table.name}: only three-dimensional tables are supported")
    table.check()
    ident = np.asarray(table.identity)

    u = find_idempotent(table)
    if np.linalg.matrix_rank(_rep(table, u), tol=_RANK_TOL) != 1:
        u = ident - u
        if np.linalg.matrix_rank(_rep(table, u), tol=_RANK_TOL) != 1:
            raise NoIsomorphismFound(f"{table.name}: idempotent does not split off a line")
    f = ident - u

    # f·e_k spans the two-dimensional block; take the column farthest from f.
    columns = _rep(table, f).T
    off = [c - (c @ f) / (f @ f) * f for c in columns]
    distances = [float(np.linalg.norm(v)) for v in off]
    pick = int(np.argmax(distances))
    y = columns[pick]
    if distances[pick] < _TRIVIAL_TOL:
        raise NoIsomorphismFound(f"{table.name}: second block is degenerate")

    # y² = p·f + q·y, then complete the square.
    span = np.column_stack([f, y])
    (p, q), *_ = np.linalg.lstsq(span, _product(table, y, y), rcond=None)
    y_shift = y - 0.5 * q * f
    d = p + 0.25 * q * q
    scale = float(np.linalg.norm(y_shift)) ** 2
    if d < -_RANK_TOL * scale:
        kind, j = BlockKind.COMPLEX, y_shift / np.sqrt(-d)
    elif d > _RANK_TOL * scale:
        kind, j = BlockKind.SPLIT, y_shift / np.sqrt(d)
    else:
        kind, j = BlockKind.NILPOTENT, y_shift / np.linalg.norm(y_shift)
    logger.debug("%s: block kind %s, u=%s", table.name, kind, u)
    return CanonicalBasis(np.column_stack([u, f, j]), kind)


def homomorphism_error(src: AlgebraTable, dst: AlgebraTable, matrix: np.ndarray) -> float:
    """Max over basis pairs of |M(e_i·e_j) − M(e_i)·M(e_j)|."""
    worst = 0.0
    eye = np.eye(src.dim)
    for i in range(src.dim):
        for k in range(src.dim):
            lhs = matrix @ _product(src, eye[i], eye[k])
            rhs = _product(dst, matrix[:, i], matrix[:, k])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def find_isomorphism(src: AlgebraTable, dst: AlgebraTable) -> np.ndarray:
    """Invertible ``M`` with ``M(x·y) = M(x)·M(y)``, coefficient vectors as columns."""
    a = canonical_basis(src)
    b = canonical_basis(dst)
    if a.kind != b.kind:
        raise NoIsomorphismFound(
            f"{src.name} has a {a.kind} block, {dst.name} has a {b.kind} block"
        )
    matrix = b.matrix @ np.linalg.inv(a.matrix)
    error = homomorphism_error(src, dst, matrix)
    if error > ISOMORPHISM_CHECK_TOL:
        raise NoIsomorphismFound(f"{src.name} → {dst.name}: product check off by {error:.3e}")
    return matrix
