"""Tests for filter conversion, expansion and evaluation."""

from __future__ import annotations

import numpy as np
import pytest

from hns_filter import algebra, cache, synth
from hns_filter.algebra import GAMMA3, element
from hns_filter.errors import (
    FilterParseError,
    NearZeroNorm,
    NoRealSolution,
    PoleAtFrequency,
    SingularSystem,
)
from hns_filter.synth import (
    Branch,
    FreeParameters,
    HyperFilter1,
    RealTransfer3,
    convert,
    evaluate,
    expand,
    expand_closed_form,
    round_trip_residual,
    solve_denominator,
    solve_numerator,
)

from .conftest import REFERENCE_A2_B1_B3, REFERENCE_C, REFERENCE_OPTIMUM


def _random_hyper(rng: np.random.Generator) -> HyperFilter1:
    params = tuple(float(v) for v in rng.uniform(-2.0, 2.0, 9))
    return HyperFilter1.from_parameters(params)


def _denominator_from_poles(poles: list[complex]) -> tuple[float, float, float]:
    coeffs = np.real(np.poly(poles))
    return (float(coeffs[1]), float(coeffs[2]), float(coeffs[3]))


# --------------------------------------------------------------------------- #
# domain types                                                                #
# --------------------------------------------------------------------------- #


class TestTypes:
    def test_wrong_arity(self) -> None:
        with pytest.raises(FilterParseError):
            RealTransfer3((1.0, 0.0), (0.0, 0.0, 0.0))  # type: ignore[arg-type]

    def test_non_finite(self) -> None:
        with pytest.raises(FilterParseError):
            RealTransfer3((1.0, float("nan"), 0.0, 0.0), (0.0, 0.0, 0.0))

    def test_parameters_order(self, reference: RealTransfer3) -> None:
        assert reference.parameters() == reference.num + reference.den
        assert RealTransfer3.from_parameters(reference.parameters()) == reference

    def test_reference_is_stable(self, reference: RealTransfer3) -> None:
        poles = reference.poles()
        assert len(poles) == 3
        assert reference.is_stable()
        # one real pole and a complex-conjugate pair
        assert np.sum(np.abs(poles.imag) < 1e-12) == 1

    def test_unstable(self) -> None:
        assert not RealTransfer3((1.0, 0.0, 0.0, 0.0), _denominator_from_poles([1.5, 0.2, -0.1])).is_stable()

    def test_free_parameters_must_match(self) -> None:
        a = element(GAMMA3, (1.0, 2.0, 3.0))
        b = element(GAMMA3, (4.0, 5.0, 6.0))
        c = element(GAMMA3, (0.1, 0.2, 0.3))
        assert HyperFilter1(a, b, c, FreeParameters(3.0, 5.0)).parameters()[2] == 3.0
        with pytest.raises(FilterParseError):
            HyperFilter1(a, b, c, FreeParameters(0.0, 0.0))

    def test_foreign_table_rejected(self) -> None:
        x = element(algebra.RC, (0.0, 0.0, 0.0))
        with pytest.raises(FilterParseError):
            HyperFilter1(x, x, x)


# --------------------------------------------------------------------------- #
# expansion                                                                   #
# --------------------------------------------------------------------------- #


class TestExpand:
    def test_zero_c(self) -> None:
        f = HyperFilter1(
            element(GAMMA3, (0.7, 1.1, 0.0)),
            element(GAMMA3, (-0.4, 0.0, 2.0)),
            algebra.zero(GAMMA3),
        )
        form = expand(f)
        assert form.numerator() == pytest.approx((0.7, -0.4, 0.0, 0.0))
        assert form.denominator() == pytest.approx((0.0, 0.0, 0.0))

    def test_reference_denominator(self) -> None:
        a2, b1, b3 = REFERENCE_A2_B1_B3
        f = HyperFilter1(
            element(GAMMA3, (0.287589, a2, 0.0)),
            element(GAMMA3, (b1, 0.0, b3)),
            element(GAMMA3, REFERENCE_C),
        )
        assert expand(f).denominator() == pytest.approx((0.418204, 0.473048, 0.061292), abs=1e-6)

    def test_closed_form_matches_algebra(self) -> None:
        rng = np.random.default_rng(11)
        for _ in range(200):
            f = _random_hyper(rng)
            oracle = expand(f)
            closed = expand_closed_form(f)
            assert oracle.k0 == pytest.approx(f.A.coeffs[0])
            for name in ("K", "M", "L", "T", "P", "Q"):
                assert getattr(closed, name) == pytest.approx(getattr(oracle, name), abs=1e-10)

    def test_denominator_matches_determinant(self) -> None:
        rng = np.random.default_rng(12)
        for _ in range(1_000):
            c = element(GAMMA3, tuple(float(v) for v in rng.uniform(-2.0, 2.0, 3)))
            L = algebra.regular_rep(c)
            p = np.poly(L)
            _, den = synth.rationalize(algebra.zero(GAMMA3), algebra.zero(GAMMA3), c)
            assert den[1] == pytest.approx(-p[1], abs=1e-10)
            assert den[2] == pytest.approx(p[2], abs=1e-10)
            assert den[3] == pytest.approx(-p[3], abs=1e-10)

    def test_printed_forms_differ_only_by_known_misprints(self) -> None:
        f = _random_hyper(np.random.default_rng(13))
        a3, (c1, c2, c3) = f.A.coeffs[2], f.C.coeffs
        printed, oracle = expand_closed_form(f, printed=True), expand(f)
        assert printed.T - oracle.T == pytest.approx(3 * c3 - 3 * c2)
        assert printed.K - oracle.K == pytest.approx(a3 * c3)
        for name in ("k0", "M", "L", "P", "Q"):
            assert getattr(printed, name) == pytest.approx(getattr(oracle, name), abs=1e-10)

    def test_denominator_independent_of_numerator(self) -> None:
        rng = np.random.default_rng(14)
        f, g = _random_hyper(rng), _random_hyper(rng)
        h = HyperFilter1(g.A, g.B, f.C, g.free)
        assert expand(h).denominator() == pytest.approx(expand(f).denominator())

    def test_monomial_report(self) -> None:
        from hns_filter.symbolic import monomial_report

        found = {(m.coefficient, m.monomial) for m in monomial_report()}
        assert found == {("K", "a3*c3"), ("T", "c2"), ("T", "c3")}
        assert monomial_report(printed=False) == []


# --------------------------------------------------------------------------- #
# denominator                                                                 #
# --------------------------------------------------------------------------- #


class TestDenominator:
    def test_reference(self, reference: RealTransfer3) -> None:
        c = solve_denominator(reference)
        assert c.coeffs == pytest.approx(REFERENCE_C, abs=1e-7)

    def test_positive_branch(self, reference: RealTransfer3) -> None:
        c1, c2, c3 = REFERENCE_C
        c = solve_denominator(reference, Branch.POSITIVE)
        assert c.coeffs == pytest.approx((c1, -c2, c3), abs=1e-7)

    def test_zero_target(self, identity_filter: RealTransfer3) -> None:
        assert solve_denominator(identity_filter).coeffs == (0.0, 0.0, 0.0)

    def test_residuals_on_random_stable_filters(self) -> None:
        rng = np.random.default_rng(15)
        for _ in range(100):
            real = rng.uniform(-0.9, 0.9)
            pair = rng.uniform(0.2, 0.95) * np.exp(1j * rng.uniform(0.2, np.pi - 0.2))
            den = _denominator_from_poles([real, pair, np.conj(pair)])
            target = RealTransfer3((1.0, 0.0, 0.0, 0.0), den)
            c = solve_denominator(target)
            assert c.coeffs[1] <= 0.0
            assert algebra.char_coeffs(c)[1:] == pytest.approx(den, abs=1e-10)

    def test_three_real_poles_have_no_solution(self) -> None:
        target = RealTransfer3((1.0, 0.0, 0.0, 0.0), _denominator_from_poles([0.5, 0.2, -0.3]))
        with pytest.raises(NoRealSolution) as info:
            solve_denominator(target)
        assert info.value.best_residual > 1e-10

    def test_cached(self, reference: RealTransfer3) -> None:
        first = solve_denominator(reference)
        assert cache.size() >= 1
        assert solve_denominator(reference) is first


# --------------------------------------------------------------------------- #
# numerator and conversion                                                    #
# --------------------------------------------------------------------------- #


class TestConvert:
    def test_reference_free_coefficients(self, reference: RealTransfer3) -> None:
        c = element(GAMMA3, REFERENCE_C)
        a, b = solve_numerator(reference, c)
        assert a.coeffs[0] == 0.287589
        assert (a.coeffs[1], b.coeffs[0], b.coeffs[2]) == pytest.approx(REFERENCE_A2_B1_B3, abs=1e-4)
        assert (a.coeffs[2], b.coeffs[1]) == (0.0, 0.0)

    def test_identity_filter(self, identity_filter: RealTransfer3) -> None:
        f = convert(identity_filter)
        assert f.A.coeffs == pytest.approx((1.0, 0.0, 0.0))
        assert f.B.coeffs == pytest.approx((0.0, 0.0, 0.0))
        assert f.C.coeffs == (0.0, 0.0, 0.0)

    @pytest.mark.parametrize("free", [(0.0, 0.0), REFERENCE_OPTIMUM])
    def test_round_trip_reference_points(
        self, reference: RealTransfer3, free: tuple[float, float]
    ) -> None:
        f = convert(reference, *free)
        assert f.free == FreeParameters(*free)
        assert round_trip_residual(f, reference) < 1e-9

    def test_round_trip_random_free_parameters(self, reference: RealTransfer3) -> None:
        rng = np.random.default_rng(16)
        for a3, b2 in rng.uniform(-2.0, 2.0, (100, 2)):
            f = convert(reference, float(a3), float(b2))
            assert round_trip_residual(f, reference) < 1e-9

    def test_c_does_not_depend_on_free_parameters(self, reference: RealTransfer3) -> None:
        assert convert(reference, 1.5, -0.5).C == convert(reference).C

    def test_infeasible_target(self) -> None:
        target = RealTransfer3((1.0, 0.0, 0.0, 0.0), _denominator_from_poles([0.5, 0.2, -0.3]))
        with pytest.raises(NoRealSolution):
            convert(target, 0.3, 0.1)

    def test_inconsistent_numerator_system(self) -> None:
        # C = 0 leaves only b1 free, which cannot produce a w² term
        target = RealTransfer3((1.0, 0.0, 1.0, 0.0), (0.0, 0.0, 0.0))
        with pytest.raises(SingularSystem) as info:
            convert(target)
        assert info.value.condition > 1e12


# --------------------------------------------------------------------------- #
# evaluation                                                                  #
# --------------------------------------------------------------------------- #


class TestEvaluate:
    def test_dc_gain(self, reference: RealTransfer3) -> None:
        exact = sum(reference.num) / (1.0 + sum(reference.den))
        assert evaluate(reference, 1.0) == pytest.approx(exact, abs=1e-12)
        assert abs(evaluate(reference, 1.0)) == pytest.approx(1.0, abs=1e-3)

    def test_far_from_origin_approaches_a1(self, reference: RealTransfer3) -> None:
        f = convert(reference)
        assert evaluate(f, 1e6) == pytest.approx(0.287589, abs=1e-5)
        assert evaluate(f, 1e6, path="direct") == pytest.approx(0.287589, abs=1e-5)

    def test_paths_agree_on_unit_circle(self, reference: RealTransfer3) -> None:
        f = convert(reference, *REFERENCE_OPTIMUM)
        for theta in np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False):
            z = complex(np.exp(1j * theta))
            a = evaluate(f, z)
            b = evaluate(f, z, path="direct")
            assert abs(a - b) / (1.0 + abs(a)) < 1e-9
            assert a == pytest.approx(evaluate(reference, z), abs=1e-9)

    def test_matches_scipy(self, reference: RealTransfer3) -> None:
        from scipy import signal

        omegas = np.linspace(0.1, 3.0, 17)
        _, h = signal.freqz(reference.num, (1.0, *reference.den), worN=omegas)
        for omega, expected in zip(omegas, h, strict=True):
            assert evaluate(reference, complex(np.exp(1j * omega))) == pytest.approx(expected, abs=1e-12)

    def test_at_pole(self, reference: RealTransfer3) -> None:
        poles = reference.poles()
        pole = float(poles[np.argmin(np.abs(poles.imag))].real)
        with pytest.raises(PoleAtFrequency):
            evaluate(reference, pole)
        with pytest.raises(NearZeroNorm):
            evaluate(convert(reference), pole, path="direct")

    def test_at_origin(self, reference: RealTransfer3) -> None:
        limit = reference.num[3] / reference.den[2]
        assert evaluate(reference, 0j) == pytest.approx(limit, rel=1e-12)
        f = convert(reference, *REFERENCE_OPTIMUM)
        assert evaluate(f, 0j) == pytest.approx(limit, rel=1e-6)
        assert evaluate(f, 0j, path="direct") == pytest.approx(limit, rel=1e-6)

    def test_at_origin_with_singular_c(self, identity_filter: RealTransfer3) -> None:
        f = convert(identity_filter)
        assert evaluate(identity_filter, 0j) == 1.0
        assert evaluate(f, 0j) == pytest.approx(1.0, abs=1e-12)
        assert evaluate(f, 0j, path="direct") == pytest.approx(1.0, abs=1e-12)

    def test_pole_at_origin(self) -> None:
        with pytest.raises(PoleAtFrequency):
            evaluate(RealTransfer3((1.0, 0.0, 0.0, 1.0), (0.0, 0.0, 0.0)), 0j)
