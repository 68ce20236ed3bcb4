import mpmath
import pytest
from mpmath import mpf, mpc, workprec

from superzeta.families import za_positive, zb_positive
from superzeta.keiperli import (
    CriterionReport,
    LambdaSeries,
    criterion_report,
    lambda_binomial,
    lambda_composition,
    lambda_contour,
    lambda_direct,
    oscillation_rate,
    predict_oscillation,
    predict_tempered,
)
from superzeta.precision import DomainError, PrecisionContext, agree_digits
from superzeta.zeros import AsymptoticModel, find_zeros, make_zero_set, zero_sum

CTX = PrecisionContext(bits=128)
MODEL = AsymptoticModel.riemann(192)


@pytest.fixture(scope="module")
def zeros40():
    return find_zeros(40, PrecisionContext(bits=96))


@pytest.fixture(scope="module")
def toy_planted():
    # 10 synthetic on-line zeros plus one displaced quadruple
    zeros = [(0.5, float(g)) for g in range(5, 15)] + [(0.9, 5.0)]
    return make_zero_set(zeros, complete_below=0, bits=128)


@pytest.fixture(scope="module")
def classic12():
    return lambda_binomial("classic", 12, CTX)


@pytest.fixture(scope="module")
def central12():
    return lambda_binomial("central", 12, CTX)


class TestBinomialRoute:
    def test_first_classic_is_first_superzeta_row(self, classic12):
        target = za_positive(1, mpf(1) / 2, PrecisionContext(bits=160))
        assert agree_digits(classic12.values[1], target.value) >= 30
        assert mpmath.nstr(classic12.values[1], 6) == "0.0230957"

    def test_first_collapse_is_exact_formula(self, classic12, central12):
        # n = 1 collapse: lambda_1 = Z_B(1|1/2), lambda_1^0 = Z_B0(1)
        a = zb_positive(1, mpf(1) / 2, PrecisionContext(bits=160))
        b = zb_positive(1, 0, PrecisionContext(bits=160))
        assert agree_digits(classic12.values[1], a.value) >= 30
        assert agree_digits(central12.values[1], b.value) >= 30

    def test_central_paper_values(self, central12):
        assert mpmath.nstr(central12.values[1], 6) == "0.023105"
        assert abs(central12.values[1] - mpf("0.0231050")) < mpf("5e-8")
        assert mpmath.nstr(central12.values[2], 6) == "0.0923828"
        assert abs(central12.values[2] - mpf("0.0923828")) < mpf("5e-8")

    def test_classic_second_value(self, classic12):
        # lambda_2 = 2 Z_A(1|1/2) - Z_A(2|1/2)
        hi = PrecisionContext(bits=160)
        a1 = za_positive(1, mpf(1) / 2, hi)
        a2 = za_positive(2, mpf(1) / 2, hi)
        with workprec(160):
            assert agree_digits(classic12.values[2],
                                2 * a1.value - a2.value) >= 30
        assert mpmath.nstr(classic12.values[2], 6) == "0.0923457"

    def test_all_positive_small_range(self, classic12, central12):
        assert classic12.all_positive()
        assert central12.all_positive()

    def test_metadata(self, classic12):
        assert classic12.method == "binomial_sum"
        assert classic12.precision_used >= 128
        assert all(c >= 0 for c in classic12.cancellation_digits.values())
        assert all(e > 0 for e in classic12.errors.values())

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            lambda_binomial("classic", 0, CTX)
        with pytest.raises(DomainError):
            lambda_binomial("sideways", 4, CTX)


class TestCompositionRoute:
    def test_matches_binomial_classic(self, classic12):
        comp = lambda_composition("classic", 12, CTX)
        for n in range(1, 13):
            assert agree_digits(comp.values[n], classic12.values[n]) >= 12, n

    def test_matches_binomial_central(self, central12):
        comp = lambda_composition("central", 12, CTX)
        for n in range(1, 13):
            assert agree_digits(comp.values[n], central12.values[n]) >= 12, n


class TestDirectRoute:
    def test_classic_first_with_tail(self, zeros40):
        v = lambda_direct("classic", 1, zeros40, CTX)
        target = mpf("0.0230957")
        assert abs(v.value - target) <= v.error
        # tail correction dominates the error budget on a 40-zero set
        assert v.error < mpf("0.01")

    def test_central_first_with_tail(self, zeros40):
        v = lambda_direct("central", 1, zeros40, CTX)
        assert abs(v.value - mpf("0.0231050")) <= v.error

    def test_central_angle_sum_form(self, zeros40):
        # sum of 4 sin^2(n theta/2) over the set, no tail
        n = 7
        v = lambda_direct("central", n, zeros40, CTX, tail=False)
        with workprec(160):
            acc = mpf(0)
            for e in zeros40.entries:
                th = 2 * mpmath.asin(1 / (2 * e.gamma_ord))
                acc += 4 * mpmath.sin(n * th / 2) ** 2
            assert agree_digits(v.value, acc) >= 25
        assert v.value > 0

    def test_additivity_of_planted_quadruple(self, toy_planted):
        censored = toy_planted.without(toy_planted.planted()[0])
        for n in (3, 17):
            full = lambda_direct("classic", n, toy_planted, CTX, tail=False)
            part = lambda_direct("classic", n, censored, CTX, tail=False)
            entry = toy_planted.planted()[0]
            with workprec(144):
                tau = entry.tau_growing()
                r_grow = (tau + mpc(0, "0.5")) / (tau - mpc(0, "0.5"))
                tau_d = mpmath.conj(tau)
                r_dec = (tau_d + mpc(0, "0.5")) / (tau_d - mpc(0, "0.5"))
                quad = 4 - 2 * (r_grow ** n).real - 2 * (r_dec ** n).real
                assert agree_digits(full.value - part.value, quad) >= 20, n


class TestContourRoute:
    def test_classic_small_set_tolerance(self, zeros40):
        # with only 40 zeros the direct-sum values limit accuracy; the
        # acceptance suite repeats this at 2000 zeros and 1e-4 relative
        ref = lambda_binomial("classic", 2, CTX)
        for n in (1, 2):
            v = lambda_contour("classic", n, zeros40, PrecisionContext(bits=96))
            rel = abs(v.value - ref.values[n]) / ref.values[n]
            assert rel < mpf("0.02"), n

    def test_central_needs_no_set(self, zeros40):
        ref = lambda_binomial("central", 2, CTX)
        empty = make_zero_set([], bits=96)
        for n in (1, 2):
            v = lambda_contour("central", n, empty, PrecisionContext(bits=96))
            rel = abs(v.value - ref.values[n]) / ref.values[n]
            assert rel < mpf("1e-4"), n

    def test_order_cap(self, zeros40):
        with pytest.raises(DomainError):
            lambda_contour("classic", 7, zeros40, CTX)


class TestPredictors:
    def test_tempered_at_100(self):
        v = predict_tempered(100, MODEL, CTX)
        with workprec(160):
            direct = 50 * (mpmath.log(100) - 1 + mpmath.euler
                           - mpmath.log(2 * mpmath.pi))
            assert agree_digits(v.value, direct) >= 30
            assert mpmath.nstr(direct, 7) == "117.2254"

    def test_generalized_reduces_to_riemann_form(self):
        for n in (2, 10, 1000):
            v = predict_tempered(n, MODEL, CTX)
            with workprec(160):
                direct = (mpf(n) / 2) * (mpmath.log(n) - 1 + mpmath.euler
                                         - mpmath.log(2 * mpmath.pi))
                assert agree_digits(v.value, direct) >= 35, n

    def test_variant_independent(self):
        # the tempered law is shared by both variants by construction;
        # the predictor takes no variant argument at all
        assert predict_tempered(64, MODEL, CTX).value > 0

    def test_oscillation_rate_planted(self, toy_planted):
        entry = toy_planted.planted()[0]
        r = oscillation_rate(entry, "classic", CTX)
        with workprec(160):
            tau = mpc(5, mpf("0.4"))
            target = mpmath.log(abs((tau + mpc(0, "0.5"))
                                    / (tau - mpc(0, "0.5"))))
            assert agree_digits(r.value, target) >= 25
            assert mpmath.nstr(target, 3) == "0.0158"

    def test_oscillation_rate_central_zero_for_online(self, zeros40):
        r = oscillation_rate(zeros40.entries[0], "central", CTX)
        assert r.value == 0

    def test_predicted_term_modulus_grows(self, toy_planted):
        t1 = predict_oscillation(toy_planted, "classic", 10, CTX)[0]
        t2 = predict_oscillation(toy_planted, "classic", 20, CTX)[0]
        assert abs(t2.value) > abs(t1.value) > 1

    def test_no_planted_rejected(self, zeros40):
        with pytest.raises(DomainError):
            predict_oscillation(zeros40, "classic", 5, CTX)


class TestCriterionReport:
    def test_empty_series_inconclusive(self):
        empty = LambdaSeries(variant="classic", values={}, method="binomial_sum",
                             precision_used=128, cancellation_digits={},
                             errors={})
        rep = criterion_report(empty, MODEL)
        assert rep.classification == "inconclusive"

    def test_planted_toy_set_violation_signature(self, toy_planted):
        values = {}
        for n in range(1, 301):
            values[n] = lambda_direct("classic", n, toy_planted, CTX,
                                      tail=False).value
        series = LambdaSeries(variant="classic", values=values,
                              method="direct_zero_sum", precision_used=128,
                              cancellation_digits={n: 0.0 for n in values},
                              errors={n: mpf(0) for n in values})
        rep = criterion_report(series, MODEL, toy_planted, CTX)
        assert rep.classification == "violation-signature"
        assert rep.fit_rel_error < 0.10
        rel = abs(float(rep.fitted_growth_rate.value)
                  - float(rep.predicted_growth_rate.value)) \
            / float(rep.predicted_growth_rate.value)
        assert rel < 0.01

    def test_planted_central_variant(self, toy_planted):
        values = {}
        for n in range(1, 301):
            values[n] = lambda_direct("central", n, toy_planted, CTX,
                                      tail=False).value
        series = LambdaSeries(variant="central", values=values,
                              method="direct_zero_sum", precision_used=128,
                              cancellation_digits={n: 0.0 for n in values},
                              errors={n: mpf(0) for n in values})
        rep = criterion_report(series, MODEL, toy_planted, CTX)
        assert rep.classification == "violation-signature"
        rel = abs(float(rep.fitted_growth_rate.value)
                  - float(rep.predicted_growth_rate.value)) \
            / float(rep.predicted_growth_rate.value)
        assert rel < 0.01

    def test_exact_oscillation_extraction(self, toy_planted):
        # once the non-growing content is removed, the remainder must be
        # exactly the predicted growing term plus conjugate
        from superzeta.keiperli import _nongrowing_part
        for variant in ("classic", "central"):
            for n in (5, 40):
                lam = lambda_direct(variant, n, toy_planted, CTX,
                                    tail=False).value
                with workprec(144):
                    osc = lam - _nongrowing_part(toy_planted, variant, n, 144)
                pred = predict_oscillation(toy_planted, variant, n, CTX)
                with workprec(144):
                    expected = sum(2 * p.value.real for p in pred)
                    assert agree_digits(osc, expected) >= 18, (variant, n)

    def test_report_json_shape(self, toy_planted):
        values = {n: lambda_direct("classic", n, toy_planted, CTX,
                                   tail=False).value
                  for n in range(1, 120)}
        series = LambdaSeries(variant="classic", values=values,
                              method="direct_zero_sum", precision_used=128,
                              cancellation_digits={n: 0.0 for n in values},
                              errors={n: mpf(0) for n in values})
        rep = criterion_report(series, MODEL, toy_planted, CTX)
        doc = rep.to_json_dict()
        assert doc["schema"] == "superzeta/1"
        assert doc["classification"] in ("violation-signature", "inconclusive",
                                         "RH-consistent")
        assert "fitted_growth_rate" in doc
