import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mpf, mpc, workprec

from superzeta.mpcore import (
    bernoulli_number,
    bernoulli_poly,
    dirichlet_beta,
    euler_number,
    hurwitz_zeta,
    polygamma,
    riemann_zeta,
    stieltjes_cumulants,
    stieltjes_gamma,
    zeta_pole_series,
)
from superzeta.precision import DomainError, PoleError, PrecisionContext, agree_digits

from oracles import (
    bernoulli_poly_gf,
    dirichlet_beta_alternating,
    euler_number_gf,
    hurwitz_direct,
    jonquiere_rhs,
)

CTX = PrecisionContext(bits=192)


class TestExactLayer:
    def test_bernoulli_poly_quarter(self):
        assert bernoulli_poly(1, Fraction(1, 4)) == bernoulli_poly_gf(1, Fraction(1, 4))
        assert bernoulli_poly(1, Fraction(1, 4)) == Fraction(-1, 4)

    def test_bernoulli_poly_half(self):
        assert bernoulli_poly(2, Fraction(1, 2)) == bernoulli_poly_gf(2, Fraction(1, 2))
        assert bernoulli_poly(2, Fraction(1, 2)) == Fraction(-1, 12)

    def test_forward_difference_cube(self):
        lhs = bernoulli_poly(3, Fraction(4, 3)) - bernoulli_poly(3, Fraction(1, 3))
        assert lhs == 3 * Fraction(1, 3) ** 2

    def test_b1_convention(self):
        # zeta(0, w) = 1/2 - w forces B_1(0) = -1/2
        assert bernoulli_number(1) == Fraction(-1, 2)
        assert bernoulli_poly(1, 0) == Fraction(-1, 2)

    @given(n=st.integers(0, 10),
           w=st.fractions(min_value=-2, max_value=2, max_denominator=12))
    @settings(max_examples=40, deadline=None)
    def test_bernoulli_matches_generating_function(self, n, w):
        assert bernoulli_poly(n, w) == bernoulli_poly_gf(n, w)

    @given(n=st.integers(1, 9),
           w=st.fractions(min_value=-3, max_value=3, max_denominator=10))
    @settings(max_examples=40, deadline=None)
    def test_bernoulli_forward_difference(self, n, w):
        assert bernoulli_poly(n, w + 1) - bernoulli_poly(n, w) == n * Fraction(w) ** (n - 1)

    def test_euler_numbers(self):
        assert euler_number(0) == 1
        assert euler_number(2) == euler_number_gf(2) == -1
        assert euler_number(4) == euler_number_gf(4) == 5

    @given(n=st.integers(0, 16).map(lambda k: 2 * k))
    @settings(max_examples=20, deadline=None)
    def test_euler_matches_generating_function(self, n):
        assert euler_number(n) == euler_number_gf(n)

    def test_euler_rejects_odd(self):
        with pytest.raises(DomainError):
            euler_number(3)


class TestHurwitzZeta:
    def test_negative_integer_is_bernoulli(self):
        # zeta(-2, 1/4) = -B_3(1/4)/3 = -1/64
        v = hurwitz_zeta(-2, Fraction(1, 4), 0, CTX)
        expected = -Fraction(bernoulli_poly_gf(3, Fraction(1, 4)), 3)
        assert expected == Fraction(-1, 64)
        assert v.agrees_with(mpf(expected.numerator) / expected.denominator, 50)

    def test_negative_integer_table_all(self):
        # whole Table-on-negative-integers contract for modest n, w
        for n in range(0, 9):
            for w in (Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(5, 4)):
                v = hurwitz_zeta(-n, w, 0, CTX)
                exact = -bernoulli_poly(n + 1, w) / (n + 1)
                with workprec(CTX.bits):
                    target = mpf(exact.numerator) / exact.denominator
                assert abs(v.value - target) <= mpf(2) ** (-CTX.bits + 16), (n, w)

    def test_deriv0_log_gamma_form(self):
        # zeta'(0, 1) = -log(2 pi)/2
        v = hurwitz_zeta(0, 1, 1, CTX)
        with workprec(CTX.bits):
            target = -mpmath.log(2 * mpmath.pi) / 2
        assert v.agrees_with(target, 50)

    def test_deriv0_general_w(self):
        # zeta'(0, w) = log(Gamma(w)/sqrt(2 pi)) at w = 1/4, 3/2
        for w in (Fraction(1, 4), Fraction(3, 2)):
            v = hurwitz_zeta(0, w, 1, CTX)
            with workprec(CTX.bits):
                ww = mpf(w.numerator) / w.denominator
                target = mpmath.log(mpmath.gamma(ww) / mpmath.sqrt(2 * mpmath.pi))
            assert v.agrees_with(target, 50), w

    def test_basel_with_direct_series_oracle(self):
        v = hurwitz_zeta(2, 1, 0, CTX)
        oracle, bound = hurwitz_direct(2, 1, terms=20000)
        assert abs(v.value - oracle) <= bound + v.error
        with workprec(200):
            assert v.agrees_with(mpmath.pi ** 2 / 6, 50)

    def test_pole_raises(self):
        with pytest.raises(PoleError):
            hurwitz_zeta(1, 1, 0, CTX)
        with pytest.raises(PoleError):
            hurwitz_zeta(1, Fraction(1, 2), 1, CTX)

    def test_nonpositive_w_rejected(self):
        with pytest.raises(DomainError):
            hurwitz_zeta(2, 0, 0, CTX)

    def test_complex_argument_against_mpmath(self):
        # mpmath's zeta uses a different algorithm family: good cross-check
        s = mpc("0.5", "12.0")
        v = hurwitz_zeta(s, Fraction(5, 4), 0, CTX)
        with workprec(CTX.bits):
            target = mpmath.zeta(s, mpf(5) / 4)
        assert v.agrees_with(target, 45)

    def test_first_derivative_against_mpmath(self):
        v = hurwitz_zeta(mpf(3) / 2, 1, 1, CTX)
        with workprec(CTX.bits):
            target = mpmath.zeta(mpf(3) / 2, 1, 1)
        assert v.agrees_with(target, 45)

    def test_second_derivative_against_mpmath(self):
        v = hurwitz_zeta(mpf(-3) / 2, Fraction(3, 4), 2, CTX)
        with workprec(CTX.bits):
            target = mpmath.zeta(mpf(-3) / 2, mpf(3) / 4, 2)
        assert v.agrees_with(target, 40)

    def test_regularized_determinant(self):
        # exp(-zeta'(0, w)) = sqrt(2 pi) / Gamma(w)
        for w in (Fraction(1, 4), Fraction(1), Fraction(3, 2)):
            v = hurwitz_zeta(0, w, 1, CTX)
            with workprec(CTX.bits):
                ww = mpf(w.numerator) / w.denominator
                det = mpmath.exp(-v.value)
                target = mpmath.sqrt(2 * mpmath.pi) / mpmath.gamma(ww)
                assert agree_digits(det, target) >= 45, w

    def test_jonquiere_validation(self):
        v = hurwitz_zeta(mpf("-0.7"), mpf("0.3"), 0, PrecisionContext(bits=128))
        rhs = jonquiere_rhs(mpf("-0.7"), mpf("0.3"), prec=128, terms=300000)
        assert agree_digits(v.value, rhs) >= 12

    def test_precision_monotonicity(self):
        lo = hurwitz_zeta(mpc("0.3", "2.0"), Fraction(1, 3), 0, PrecisionContext(bits=128))
        hi = hurwitz_zeta(mpc("0.3", "2.0"), Fraction(1, 3), 0, PrecisionContext(bits=192))
        assert abs(mpc(lo.value) - mpc(hi.value)) <= lo.error

    def test_escalation_policy_runs(self):
        ctx = PrecisionContext(bits=96, policy="double-and-compare", target_digits=20)
        v = hurwitz_zeta(2, 1, 0, ctx)
        with workprec(160):
            assert v.agrees_with(mpmath.pi ** 2 / 6, 20)


class TestDirichletBeta:
    def test_beta_one_is_pi_over_4(self):
        v = dirichlet_beta(1, CTX)
        oracle, bound = dirichlet_beta_alternating(1)
        assert abs(v.value - oracle) <= bound + v.error
        with workprec(200):
            assert v.agrees_with(mpmath.pi / 4, 45)

    def test_beta_two_is_catalan(self):
        v = dirichlet_beta(2, CTX)
        with workprec(200):
            assert v.agrees_with(mpmath.catalan, 45)

    def test_beta_zero_is_half(self):
        v = dirichlet_beta(0, CTX)
        assert v.agrees_with(mpf("0.5"), 50)


class TestPolygamma:
    def test_digamma_at_one(self):
        v = polygamma(0, 1, CTX)
        with workprec(200):
            assert v.agrees_with(-mpmath.euler, 50)

    def test_trigamma_at_one(self):
        v = polygamma(1, 1, CTX)
        with workprec(200):
            assert v.agrees_with(mpmath.pi ** 2 / 6, 50)

    def test_digamma_at_half_duplication(self):
        v = polygamma(0, Fraction(1, 2), CTX)
        with workprec(200):
            assert v.agrees_with(-mpmath.euler - 2 * mpmath.log(2), 50)

    def test_high_order_against_mpmath(self):
        for k, x in ((3, Fraction(3, 4)), (5, Fraction(7, 2))):
            v = polygamma(k, x, CTX)
            with workprec(CTX.bits):
                target = mpmath.psi(k, mpf(x.numerator) / x.denominator)
            assert v.agrees_with(target, 45), (k, x)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            polygamma(0, 0, CTX)


class TestStieltjes:
    def test_first_cumulant_is_euler_gamma(self):
        g = stieltjes_cumulants(2, CTX)
        with workprec(200):
            assert g[0].agrees_with(mpmath.euler, 45)

    def test_second_cumulant(self):
        g = stieltjes_cumulants(2, CTX)
        with workprec(200):
            target = mpmath.euler ** 2 + 2 * mpmath.stieltjes(1)
        assert g[1].agrees_with(target, 40)

    def test_gamma_constants_vs_mpmath(self):
        for n in (0, 1, 3):
            v = stieltjes_gamma(n, CTX)
            with workprec(CTX.bits):
                assert v.agrees_with(mpmath.stieltjes(n), 40), n

    def test_cumulant_roundtrip(self):
        # rebuild log[y zeta(1+y)] at y = 0.1 from the cumulants
        n = 24
        g = stieltjes_cumulants(n, CTX)
        with workprec(CTX.bits):
            y = mpf("0.1")
            acc = mpf(0)
            for k in range(n, 0, -1):
                acc += -((-1) ** k) / mpmath.factorial(k) * g[k - 1].value * y ** k
            target = mpmath.log(y * mpmath.zeta(1 + y))
            assert agree_digits(acc, target) >= 20

    def test_pole_series_head(self):
        coeffs, errs = zeta_pole_series(3, CTX)
        with workprec(200):
            assert agree_digits(coeffs[0], 1) >= 45
            assert agree_digits(coeffs[1], mpmath.euler) >= 45
