"""Tests for the algebra core and the Γ(e,3) ↔ R⊕C isomorphism."""

from __future__ import annotations

import numpy as np
import pytest

from hns_filter import algebra
from hns_filter.algebra import GAMMA3, RC, AlgebraTable, basis, element, mul
from hns_filter.dual import Dual
from hns_filter.errors import NearZeroNorm, NoIsomorphismFound, TableError, TableMismatchError
from hns_filter.isomorphism import (
    BlockKind,
    canonical_basis,
    find_idempotent,
    find_isomorphism,
    homomorphism_error,
)

from .conftest import REFERENCE_C, REFERENCE_DEN

RNG_SEED = 20240501


def _random_elements(n: int, seed: int = RNG_SEED) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-2.0, 2.0, (n, 3))


def _diagonal_table() -> AlgebraTable:
    gamma = np.zeros((3, 3, 3))
    for k in range(3):
        gamma[k, k, k] = 1.0
    return AlgebraTable("R⊕R⊕R", gamma)


# --------------------------------------------------------------------------- #
# tables                                                                      #
# --------------------------------------------------------------------------- #


class TestTables:
    def test_gamma3_products(self) -> None:
        e2, e3 = basis(GAMMA3, 1), basis(GAMMA3, 2)
        assert mul(e2, e2).coeffs == (-1.0, 0.0, 1.0)
        assert mul(e2, e3).coeffs == (0.0, -2.0, 0.0)
        assert mul(e3, e3).coeffs == (2.0, 0.0, -1.0)

    def test_gamma3_identity_is_e1(self) -> None:
        assert GAMMA3.identity == (1.0, 0.0, 0.0)
        assert GAMMA3.identity_index() == 0

    def test_rc_identity_is_e1_plus_e2(self) -> None:
        assert RC.identity == pytest.approx((1.0, 1.0, 0.0), abs=1e-12)
        assert RC.identity_index() is None
        x = element(RC, (0.3, -1.2, 2.5))
        assert mul(algebra.one(RC), x).coeffs == pytest.approx(x.coeffs)

    @pytest.mark.parametrize("table", [GAMMA3, RC])
    def test_commutative_and_associative(self, table: AlgebraTable) -> None:
        assert table.is_commutative()
        assert table.is_associative()
        table.check()

    def test_exhaustive_basis_triples(self) -> None:
        for table in (GAMMA3, RC):
            for i in range(3):
                for j in range(3):
                    for k in range(3):
                        x, y, z = basis(table, i), basis(table, j), basis(table, k)
                        assert mul(mul(x, y), z).coeffs == pytest.approx(mul(x, mul(y, z)).coeffs)

    def test_nonzero_constant_counts(self) -> None:
        assert GAMMA3.nonzero_constants() == (6, 5)
        assert RC.nonzero_constants() == (5, 4)

    def test_non_commutative_table_rejected(self) -> None:
        # Quaternions: associative with an identity, but i·j = k = −j·i.
        gamma = np.zeros((4, 4, 4))
        for k in range(4):
            gamma[0, k, k] = gamma[k, 0, k] = 1.0
        for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
            gamma[i, j, k] = 1.0
            gamma[j, i, k] = -1.0
        for i in (1, 2, 3):
            gamma[i, i, 0] = -1.0
        quaternions = AlgebraTable("H", gamma)
        assert quaternions.is_associative()
        assert not quaternions.is_commutative()
        with pytest.raises(TableError, match="commutative"):
            quaternions.check()

    def test_missing_identity_rejected(self) -> None:
        with pytest.raises(TableError, match="identity"):
            AlgebraTable("null", np.zeros((2, 2, 2)))

    def test_bad_shape_rejected(self) -> None:
        with pytest.raises(TableError):
            AlgebraTable("flat", np.zeros((2, 3)))


# --------------------------------------------------------------------------- #
# element arithmetic                                                          #
# --------------------------------------------------------------------------- #


class TestArithmetic:
    def test_mixed_tables_rejected(self) -> None:
        with pytest.raises(TableMismatchError):
            mul(basis(GAMMA3, 0), basis(RC, 0))
        with pytest.raises(TableMismatchError):
            _ = basis(GAMMA3, 1) + basis(RC, 1)

    def test_wrong_arity_rejected(self) -> None:
        with pytest.raises(TableMismatchError):
            element(GAMMA3, (1.0, 2.0))

    def test_regular_rep_closed_form(self) -> None:
        c1, c2, c3 = 0.7, -0.4, 1.3
        expected = np.array(
            [[c1, -c2, 2 * c3], [c2, c1 - 2 * c3, -2 * c2], [c3, c2, c1 - c3]]
        )
        np.testing.assert_allclose(algebra.regular_rep(element(GAMMA3, (c1, c2, c3))), expected)

    def test_regular_rep_applies_product(self) -> None:
        x, y = element(GAMMA3, (0.5, 1.5, -0.25)), element(GAMMA3, (-1.0, 0.2, 0.9))
        np.testing.assert_allclose(
            algebra.regular_rep(x) @ np.array(y.coeffs), mul(x, y).coeffs, atol=1e-14
        )

    def test_trace_form(self) -> None:
        x = element(GAMMA3, (0.8, 0.1, -0.6))
        assert algebra.trace(x) == pytest.approx(3 * 0.8 - 3 * -0.6)
        assert algebra.trace(x) == pytest.approx(np.trace(algebra.regular_rep(x)))

    def test_char_coeffs_match_numpy(self) -> None:
        for c in _random_elements(25):
            x = element(GAMMA3, tuple(c))
            p = np.poly(algebra.regular_rep(x))  # det(λI − L)
            expected = (1.0, -p[1], p[2], -p[3])
            assert algebra.char_coeffs(x) == pytest.approx(expected, abs=1e-10)

    def test_reference_c_reproduces_denominator(self) -> None:
        _, t, p, q = algebra.char_coeffs(element(GAMMA3, REFERENCE_C))
        assert (t, p, q) == pytest.approx(REFERENCE_DEN, abs=1e-6)

    def test_norm_is_determinant(self) -> None:
        for c in _random_elements(25, seed=3):
            x = element(GAMMA3, tuple(c))
            assert algebra.norm(x) == pytest.approx(np.linalg.det(algebra.regular_rep(x)), abs=1e-10)

    def test_norm_multiplicative(self) -> None:
        xs, ys = _random_elements(10_000, seed=1), _random_elements(10_000, seed=2)
        for a, b in zip(xs, ys, strict=True):
            x, y = element(GAMMA3, tuple(a)), element(GAMMA3, tuple(b))
            lhs = algebra.norm(mul(x, y))
            rhs = algebra.norm(x) * algebra.norm(y)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))

    def test_conjugate_gives_norm_times_identity(self) -> None:
        for c in _random_elements(10_000, seed=4):
            x = element(GAMMA3, tuple(c))
            n = algebra.norm(x)
            product = mul(x, algebra.conjugate(x)).coeffs
            scale = max(1.0, abs(n))
            assert abs(product[0] - n) <= 1e-9 * scale
            assert abs(product[1]) <= 1e-9 * scale
            assert abs(product[2]) <= 1e-9 * scale

    def test_conjugate_rc_uses_its_identity(self) -> None:
        x = element(RC, (0.4, 1.1, -0.7))
        n = algebra.norm(x)
        assert mul(x, algebra.conjugate(x)).coeffs == pytest.approx((n, n, 0.0), abs=1e-12)

    def test_inverse(self) -> None:
        for c in _random_elements(10_000, seed=5):
            x = element(GAMMA3, tuple(c))
            if abs(algebra.norm(x)) < 1e-3:
                continue
            assert mul(x, algebra.inverse(x)).coeffs == pytest.approx((1.0, 0.0, 0.0), abs=1e-8)

    def test_inverse_of_singular_raises(self) -> None:
        # (2e1 + e3)/3 is idempotent, so it is a zero divisor.
        with pytest.raises(NearZeroNorm):
            algebra.inverse(element(GAMMA3, (2 / 3, 0.0, 1 / 3)))
        with pytest.raises(NearZeroNorm):
            algebra.inverse(algebra.zero(GAMMA3))

    def test_complex_scalars(self) -> None:
        x = element(GAMMA3, (1.0 + 0.5j, -0.2j, 0.3))
        inv = algebra.inverse(x)
        assert mul(x, inv).coeffs == pytest.approx((1.0, 0.0, 0.0), abs=1e-12)

    def test_dual_scalars_carry_derivative(self) -> None:
        c = (0.7, -0.4, 1.3)
        h = 1e-6
        x = element(GAMMA3, (Dual(c[0], 1.0), c[1], c[2]))
        n = algebra.norm(x)
        up = algebra.norm(element(GAMMA3, (c[0] + h, c[1], c[2])))
        down = algebra.norm(element(GAMMA3, (c[0] - h, c[1], c[2])))
        assert n.eps == pytest.approx((up - down) / (2 * h), rel=1e-7)

    def test_power(self) -> None:
        x = element(GAMMA3, (0.3, 0.2, -0.1))
        assert algebra.power(x, 0).coeffs == (1.0, 0.0, 0.0)
        assert algebra.power(x, 3).coeffs == pytest.approx(mul(x, mul(x, x)).coeffs)
        with pytest.raises(ValueError):
            algebra.power(x, -1)

    def test_format_element(self) -> None:
        assert algebra.format_element(element(GAMMA3, (1.0, -2.0, 0.5))) == "1·e1 - 2·e2 + 0.5·e3"


# --------------------------------------------------------------------------- #
# isomorphism                                                                 #
# --------------------------------------------------------------------------- #


class TestIsomorphism:
    @pytest.mark.parametrize("table", [GAMMA3, RC])
    def test_idempotent(self, table: AlgebraTable) -> None:
        u = find_idempotent(table)
        x = element(table, tuple(u))
        assert mul(x, x).coeffs == pytest.approx(tuple(u), abs=1e-10)
        assert np.linalg.norm(u) > 1e-6
        assert np.linalg.norm(u - np.asarray(table.identity)) > 1e-6

    def test_gamma3_splits_off_the_expected_line(self) -> None:
        basis_ = canonical_basis(GAMMA3)
        assert basis_.kind is BlockKind.COMPLEX
        np.testing.assert_allclose(basis_.matrix[:, 0], (2 / 3, 0.0, 1 / 3), atol=1e-10)

    def test_gamma3_to_rc(self) -> None:
        m = find_isomorphism(GAMMA3, RC)
        assert abs(np.linalg.det(m)) > 1e-6
        assert homomorphism_error(GAMMA3, RC, m) < 1e-9
        np.testing.assert_allclose(m @ np.array(GAMMA3.identity), RC.identity, atol=1e-10)

    def test_product_check_is_absolute(self, monkeypatch: pytest.MonkeyPatch) -> None:
        # an error just above 1e-9 is rejected however large the matrix entries are
        monkeypatch.setattr("hns_filter.isomorphism.homomorphism_error", lambda *_: 1.5e-9)
        with pytest.raises(NoIsomorphismFound, match="product check"):
            find_isomorphism(GAMMA3, RC)

    def test_maps_products_of_random_elements(self) -> None:
        m = find_isomorphism(GAMMA3, RC)
        for a, b in zip(_random_elements(50, 7), _random_elements(50, 8), strict=True):
            lhs = m @ np.array(mul(element(GAMMA3, tuple(a)), element(GAMMA3, tuple(b))).coeffs)
            rhs = mul(element(RC, tuple(m @ a)), element(RC, tuple(m @ b))).coeffs
            np.testing.assert_allclose(lhs, rhs, atol=1e-9)

    def test_rc_to_gamma3_inverts(self) -> None:
        forward = find_isomorphism(GAMMA3, RC)
        backward = find_isomorphism(RC, GAMMA3)
        assert homomorphism_error(RC, GAMMA3, backward) < 1e-9
        # Both are algebra maps, so their composite is an automorphism of Γ(e,3).
        assert homomorphism_error(GAMMA3, GAMMA3, backward @ forward) < 1e-9

    def test_different_block_kinds(self) -> None:
        r3 = _diagonal_table()
        assert canonical_basis(r3).kind is BlockKind.SPLIT
        with pytest.raises(NoIsomorphismFound):
            find_isomorphism(GAMMA3, r3)

    def test_same_split_kind(self) -> None:
        r3 = _diagonal_table()
        m = find_isomorphism(r3, r3)
        assert homomorphism_error(r3, r3, m) < 1e-9
