"""Keiper-Li coefficients, their central analogues, and RH-criterion runs.

Classic coefficients lambda_n expand log Xi(1/(1-z)) in the unit disk;
the central coefficients lambda_n^0 expand log Xi0(1/2 + sqrt(y)/(1-y)),
based at the symmetry point instead of 1.  Four independent routes are
implemented: weighted binomial sums over second-kind superzeta values,
power-series composition of the log Xi Taylor series, direct sums over a
zero set, and contour quadrature.

Under RH both sequences grow like (n/2)(log n - 1 + gamma - log 2pi);
an off-line zero injects an exponentially growing oscillation whose rate
is log of the growing preimage modulus.  ``criterion_report`` compares a
computed sequence against the tempered predictor and, for synthetic
sets, fits the oscillation growth rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import mpmath
import numpy as np
from mpmath import mp, mpf, mpc, workprec

from .precision import (
    ComplexMP,
    DomainError,
    EscalationError,
    PrecisionContext,
    RealMP,
    default_context,
    agree_digits,
    to_mpc,
    to_mpf,
)
from .series import ps_shift_geometric_compose
from .xi import log_deriv_series, xi
from .zeros import AsymptoticModel, ZeroEntry, ZeroSet, zero_sum

__all__ = [
    "LambdaSeries",
    "CriterionReport",
    "lambda_binomial",
    "lambda_composition",
    "lambda_direct",
    "lambda_contour",
    "predict_tempered",
    "predict_oscillation",
    "oscillation_rate",
    "criterion_report",
]

VARIANTS = ("classic", "central")


@dataclass(frozen=True)
class LambdaSeries:
    """A computed lambda sequence with per-entry numeric metadata.

    values[n] for n = 1..n_max; cancellation_digits[n] records the
    decimal digits lost to cancellation (log10 of the largest partial
    term over the result).
    """

    variant: str
    values: dict
    method: str
    precision_used: int
    cancellation_digits: dict
    errors: dict

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"unknown variant {self.variant!r}")

    @property
    def n_max(self) -> int:
        return max(self.values) if self.values else 0

    def value(self, n: int):
        return self.values[n]

    def all_positive(self) -> bool:
        return all(v > 0 for v in self.values.values())


@dataclass(frozen=True)
class CriterionReport:
    """Outcome of comparing a lambda sequence against its predictors."""

    variant: str
    n_range: tuple
    residuals: dict
    classification: str
    fitted_growth_rate: object = None
    predicted_growth_rate: object = None
    fit_rel_error: float | None = None

    def to_json_dict(self):
        out = {
            "schema": "superzeta/1",
            "variant": self.variant,
            "n_range": list(self.n_range),
            "classification": self.classification,
        }
        if self.fitted_growth_rate is not None:
            out["fitted_growth_rate"] = float(self.fitted_growth_rate.value)
        if self.predicted_growth_rate is not None:
            out["predicted_growth_rate"] = float(self.predicted_growth_rate.value)
        if self.fit_rel_error is not None:
            out["fit_rel_error"] = self.fit_rel_error
        return out


# ---------------------------------------------------------------------------
# Second-kind values feeding the binomial route
# ---------------------------------------------------------------------------

def _engine_bits(n_max: int, ctx: PrecisionContext) -> int:
    # binomial weights induce cancellation growing about linearly in n
    return max(ctx.bits, int(math.ceil(3.5 * n_max)) + 128)


def _zb_row(variant: str, n_max: int, bits: int):
    """Z_B values m = 1..n_max at the variant's shift, plus Taylor data.

    classic: Z_B(m | 1/2) from the half-shift conversion (the (2t)^(n-2m)
    weights are all 1 there); central: Z_B0(m) by confluence.  Returns
    (zb list indexed from 1, taylor coefficients of log Xi at the base).
    """
    ctx = PrecisionContext(bits=bits)
    if variant == "classic":
        series = log_deriv_series("log_xi", 1, n_max, ctx)
        with workprec(bits + 16):
            za = [mpf(0)]
            fact = mpf(1)
            for n in range(1, n_max + 1):
                za.append((-1) ** (n - 1) * series.values[n - 1] / fact)
                fact *= n
            zb = [mpf(0)] * (n_max + 1)
            for m in range(1, n_max + 1):
                acc = mpf(0)
                for n in range(1, m + 1):
                    acc += math.comb(2 * m - n - 1, m - 1) * za[n]
                zb[m] = acc
            taylor = [mpf(0)] + [series.values[k - 1] / mpmath.factorial(k)
                                 for k in range(1, n_max + 1)]
        return zb, taylor

    series = log_deriv_series("log_xi", mpf(1) / 2, 2 * n_max, ctx)
    with workprec(bits + 16):
        zb = [mpf(0)] * (n_max + 1)
        for m in range(1, n_max + 1):
            zb[m] = ((-1) ** (m + 1) * series.values[2 * m - 1]
                     / (2 * mpmath.factorial(2 * m - 1)))
        taylor = [mpf(0)] + [series.values[2 * m - 1]
                             / mpmath.factorial(2 * m)
                             for m in range(1, n_max + 1)]
    return zb, taylor


def _binomial_values(variant: str, n_max: int, bits: int):
    zb, _taylor = _zb_row(variant, n_max, bits)
    values = {}
    cancel = {}
    with workprec(bits + 16):
        for n in range(1, n_max + 1):
            acc = mpf(0)
            peak = mpf(0)
            for m in range(1, n + 1):
                term = (mpf(-1) ** m / m) * math.comb(m + n - 1, 2 * m - 1) * zb[m]
                acc += term
                peak = max(peak, abs(term))
            lam = -n * acc
            values[n] = lam
            cancel[n] = float(max(0, mpmath.log10(peak * n / abs(lam)))) \
                if lam != 0 else float("inf")
    return values, cancel


def _composition_values(variant: str, n_max: int, bits: int):
    _zb, taylor = _zb_row(variant, n_max, bits)
    power = 1 if variant == "classic" else 2
    with workprec(bits + 16):
        composed = ps_shift_geometric_compose(taylor, power, n_max)
        return {n: n * composed[n] for n in range(1, n_max + 1)}


def _series_with_policy(variant: str, n_max: int, ctx: PrecisionContext,
                        method: str, compute):
    """Run a lambda route at escalated precision with double-and-compare."""
    target = ctx.target_digits if ctx.target_digits is not None else 15
    bits = _engine_bits(n_max, ctx)
    while True:
        lo = compute(variant, n_max, bits)
        hi = compute(variant, n_max, bits + 64)
        lo_values = lo[0] if isinstance(lo, tuple) else lo
        hi_values = hi[0] if isinstance(hi, tuple) else hi
        worst = min(agree_digits(lo_values[n], hi_values[n])
                    for n in range(1, n_max + 1))
        if worst >= target:
            with workprec(bits + 16):
                errors = {n: abs(lo_values[n] - hi_values[n])
                          + abs(hi_values[n]) * mpf(2) ** (-bits + 8)
                          for n in range(1, n_max + 1)}
            cancel = lo[1] if isinstance(lo, tuple) else {
                n: 0.0 for n in range(1, n_max + 1)}
            return LambdaSeries(variant=variant, values=hi_values,
                                method=method, precision_used=bits,
                                cancellation_digits=cancel, errors=errors)
        bits *= 2
        if bits > ctx.max_bits:
            raise EscalationError(
                f"lambda series stuck below {target} digits at n <= {n_max}")


def lambda_binomial(variant: str, n_max: int,
                    ctx: PrecisionContext | None = None) -> LambdaSeries:
    """lambda_n (or lambda_n^0) by the weighted binomial sum over Z_B values."""
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    return _series_with_policy(variant, n_max, ctx, "binomial_sum",
                               _binomial_values)


def lambda_composition(variant: str, n_max: int,
                       ctx: PrecisionContext | None = None) -> LambdaSeries:
    """lambda_n by exact power-series composition of the log Xi series.

    classic composes with z/(1-z) at basepoint 1; central composes the
    even series in w = t^2 with y/(1-y)^2 at basepoint 1/2.
    """
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    return _series_with_policy(variant, n_max, ctx, "series_composition",
                               _composition_values)


# ---------------------------------------------------------------------------
# Direct sums over a zero set
# ---------------------------------------------------------------------------

def lambda_direct(variant: str, n: int, zset: ZeroSet,
                  ctx: PrecisionContext | None = None,
                  tail: str | bool = "auto") -> RealMP:
    """Pair-summed direct value of lambda_n over an explicit zero set.

    tail="auto" applies the density tail exactly when the set carries a
    certified completeness height.
    """
    ctx = ctx or default_context()
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if tail == "auto":
        tail = zset.complete_below > 0
    kind = "lambda" if variant == "classic" else "lambda0"
    v = zero_sum(kind, zset, tail=tail, ctx=ctx, n=n)
    return RealMP(v.value.real, v.error + abs(v.value.imag), ctx.bits)


# ---------------------------------------------------------------------------
# Contour routes
# ---------------------------------------------------------------------------

def _tail_integral(a, t_c, prec):
    """integral(T..inf) log(tau/2pi) tau^(-a) dtau / 2pi, Re a > 1."""
    l = mpmath.log(t_c / (2 * mpmath.pi))
    return t_c ** (1 - a) * (l / (a - 1) + 1 / (a - 1) ** 2) / (2 * mpmath.pi)


def _zb_sigma_direct(sigma, zset: ZeroSet, t, prec):
    """Z_B(sigma|t) at complex sigma: direct sum plus smooth 3-term tail."""
    acc = mpc(0)
    tt = t * t
    for entry in zset.entries:
        for tau in entry.tau_members():
            acc += entry.multiplicity * (tau * tau + tt) ** (-sigma)
    t_c = zset.complete_below
    if t_c > 0:
        tail = (_tail_integral(2 * sigma, t_c, prec)
                - sigma * tt * _tail_integral(2 * sigma + 2, t_c, prec)
                + sigma * (sigma + 1) * tt * tt / 2
                * _tail_integral(2 * sigma + 4, t_c, prec))
        acc += tail
    return acc


def lambda_contour(variant: str, n: int, zset: ZeroSet,
                   ctx: PrecisionContext | None = None) -> RealMP:
    """Contour-quadrature lambda_n; loose 1e-4 relative tolerance by design.

    classic: trapezoid rule for the Gamma-kernel integral of Z_B(.|1/2)
    on a circle around sigma = 1..n inside {Re sigma >= 3/4}, with the
    second-kind values by direct sums over the set.  central: the
    equivalent single-contour coefficient integral of log Xi0 around the
    origin of the central disk variable (the set is not consulted).
    """
    ctx = ctx or default_context()
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    if not 1 <= n <= 6:
        raise DomainError("contour route is desk-limited to 1 <= n <= 6")
    prec = max(ctx.bits, 96) + 16
    with workprec(prec):
        if variant == "classic":
            if len(zset) == 0:
                raise DomainError("classic contour route needs a zero set")
            center = mpf(n + 1) / 2 + mpf("0.05")
            radius = mpf(n - 1) / 2 + mpf("0.3")

            def integrand(phi):
                sg = center + radius * mpmath.exp(mpc(0, 1) * phi)
                g = (mpmath.gamma(sg + n) * mpmath.gamma(sg - n)
                     / mpmath.gamma(2 * sg + 1))
                return g * _zb_sigma_direct(sg, zset, mpf(1) / 2, prec)

            def estimate(m_nodes):
                acc = mpc(0)
                for j in range(m_nodes):
                    phi = 2 * mpmath.pi * (j + mpf(1) / 2) / m_nodes
                    acc += integrand(phi) * mpmath.exp(mpc(0, 1) * phi)
                return -((-1) ** n) * 2 * n * radius * acc / m_nodes
        else:
            radius = mpf(1) / 2
            log_xi_half = mpmath.log(xi(mpf(1) / 2, ctx).value.real)

            def integrand(phi):
                y = radius * mpmath.exp(mpc(0, 1) * phi)
                x = mpf(1) / 2 + mpmath.sqrt(y) / (1 - y)
                return mpmath.log(xi(x, ctx).value) - log_xi_half

            def estimate(m_nodes):
                acc = mpc(0)
                for j in range(m_nodes):
                    phi = 2 * mpmath.pi * (j + mpf(1) / 2) / m_nodes
                    y = radius * mpmath.exp(mpc(0, 1) * phi)
                    acc += integrand(phi) * y ** (-n)
                return n * acc / m_nodes

        m_nodes = 48
        prev = estimate(m_nodes)
        for _ in range(5):
            m_nodes *= 2
            cur = estimate(m_nodes)
            if abs(cur - prev) <= mpf("1e-6") * max(abs(cur), mpf("1e-3")):
                err = abs(cur - prev) + abs(cur) * mpf("1e-5")
                return RealMP(cur.real, err + abs(cur.imag), ctx.bits)
            prev = cur
        raise DomainError(f"contour quadrature for n = {n} did not settle")


# ---------------------------------------------------------------------------
# Predictors
# ---------------------------------------------------------------------------

def predict_tempered(n: int, model: AsymptoticModel,
                     ctx: PrecisionContext | None = None) -> RealMP:
    """Tempered (RH-true) growth law 2 pi n [2 R_-2 (log n - 1 + gamma) + R_-1].

    With the Riemann constants this is (n/2)(log n - 1 + gamma - log 2pi),
    identical for the classic and central variants.
    """
    ctx = ctx or default_context()
    if n < 1:
        raise DomainError("need n >= 1")
    with ctx.workprec(8):
        val = (2 * mpmath.pi * n
               * (2 * model.r_minus2 * (mpmath.log(n) - 1 + mpmath.euler)
                  + model.r_minus1))
        return RealMP(val, abs(val) * mpf(2) ** (-ctx.bits + 4), ctx.bits)


def oscillation_rate(entry: ZeroEntry, variant: str,
                     ctx: PrecisionContext | None = None) -> RealMP:
    """Per-step growth rate contributed by one entry's growing branch.

    Zero for an on-line entry (the oscillatory factor has modulus one).
    """
    ctx = ctx or default_context()
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    with ctx.workprec(16):
        if entry.is_central:
            return RealMP(mpf(0), mpf(0), ctx.bits)
        tau = entry.tau_growing()
        if variant == "classic":
            rate = mpmath.log(abs((tau + mpc(0, "0.5")) / (tau - mpc(0, "0.5"))))
        else:
            th = 2 * mpmath.asin(1 / (2 * tau))
            rate = -mp.im(th)
        return RealMP(rate, abs(rate) * mpf(2) ** (-ctx.bits + 4), ctx.bits)


def predict_oscillation(zset: ZeroSet, variant: str, n: int,
                        ctx: PrecisionContext | None = None):
    """Predicted oscillatory amplitude term per planted zero at order n.

    Each returned term A satisfies: contribution to lambda_n is A + conj(A)
    = 2 Re A.  Raises if the set has no off-line entry.
    """
    ctx = ctx or default_context()
    if variant not in VARIANTS:
        raise DomainError(f"unknown variant {variant!r}")
    planted = zset.planted()
    if not planted:
        raise DomainError("no planted (beta != 1/2) zero in the set")
    out = []
    with ctx.workprec(16):
        for entry in planted:
            tau = entry.tau_growing()
            if variant == "classic":
                term = -((tau + mpc(0, "0.5")) / (tau - mpc(0, "0.5"))) ** n
            else:
                th = 2 * mpmath.asin(1 / (2 * tau))
                term = -mpmath.exp(mpc(0, n) * th)
            term *= entry.multiplicity
            out.append(ComplexMP(term, abs(term) * mpf(2) ** (-ctx.bits + 6),
                                 ctx.bits))
    return out


def _nongrowing_part(zset: ZeroSet, variant: str, n: int, prec: int):
    """Everything in the direct sum except the growing planted branches."""
    central = tuple(e for e in zset.entries if e.is_central)
    base = replace(zset, entries=central)
    ctx = PrecisionContext(bits=max(64, prec - 16))
    kind = "lambda" if variant == "classic" else "lambda0"
    tail = zset.complete_below > 0
    smooth = zero_sum(kind, base, tail=tail, ctx=ctx, n=n).value.real
    with workprec(prec):
        for entry in zset.planted():
            tau_dec = mpc(entry.gamma_ord, -(entry.beta - mpf(1) / 2))
            if variant == "classic":
                r = (tau_dec + mpc(0, "0.5")) / (tau_dec - mpc(0, "0.5"))
                decay = r ** n
            else:
                th = 2 * mpmath.asin(1 / (2 * tau_dec))
                decay = mpmath.exp(mpc(0, n) * th)
            smooth += entry.multiplicity * (4 - 2 * decay.real)
        return smooth


def criterion_report(series: LambdaSeries, model: AsymptoticModel,
                     zset: ZeroSet | None = None,
                     ctx: PrecisionContext | None = None) -> CriterionReport:
    """Classify a lambda sequence: tempered residuals vs growth signature.

    Residuals are (lambda_n - tempered(n)) / n.  For sets with planted
    zeros the oscillatory part of the sequence is isolated by removing
    the non-growing content of the direct sum, and the growth rate of
    its envelope is fitted against the per-zero prediction; a positive
    fitted rate with a clean fit is the violation signature.
    """
    ctx = ctx or default_context()
    if not series.values:
        return CriterionReport(variant=series.variant, n_range=(0, 0),
                               residuals={}, classification="inconclusive")
    ns = sorted(series.values)
    with ctx.workprec(8):
        residuals = {n: (series.values[n] - predict_tempered(n, model, ctx).value)
                     / n for n in ns}
    n_range = (ns[0], ns[-1])

    if zset is not None and zset.planted():
        prec = ctx.bits + 16
        osc = {}
        with workprec(prec):
            for n in ns:
                osc[n] = series.values[n] - _nongrowing_part(
                    zset, series.variant, n, prec)
        fitted, fit_err = _fit_envelope(osc)
        predicted = max(
            (oscillation_rate(e, series.variant, ctx) for e in zset.planted()),
            key=lambda r: r.value)
        if fitted is not None and fitted.value > 0 and fit_err < 0.10:
            cls = "violation-signature"
        else:
            cls = "inconclusive"
        return CriterionReport(variant=series.variant, n_range=n_range,
                               residuals=residuals, classification=cls,
                               fitted_growth_rate=fitted,
                               predicted_growth_rate=predicted,
                               fit_rel_error=fit_err)

    # no synthetic displacement: look for tempered behavior
    if len(ns) < 16:
        return CriterionReport(variant=series.variant, n_range=n_range,
                               residuals=residuals,
                               classification="inconclusive")
    lo_win = [abs(residuals[n]) for n in ns[: len(ns) // 2]]
    hi_win = [abs(residuals[n]) for n in ns[len(ns) // 2:]]
    ok = max(hi_win) < max(lo_win)
    return CriterionReport(variant=series.variant, n_range=n_range,
                           residuals=residuals,
                           classification="RH-consistent" if ok
                           else "inconclusive")


def _fit_envelope(osc: dict):
    """Fit log of the |osc| peak envelope linearly in n.

    Returns (rate as RealMP, relative fit error); (None, inf) if there
    are not enough usable peaks.
    """
    ns = sorted(osc)
    mags = {n: abs(osc[n]) for n in ns}
    peaks = []
    for i in range(1, len(ns) - 1):
        a, b, c = mags[ns[i - 1]], mags[ns[i]], mags[ns[i + 1]]
        if b >= a and b >= c and b > 0:
            peaks.append((ns[i], b))
    if len(peaks) < 4:
        return None, float("inf")
    xs = np.array([float(n) for n, _m in peaks])
    ys = np.array([float(mpmath.log(m)) for _n, m in peaks])
    design = np.vstack([xs, np.ones_like(xs)]).T
    coef, _res, _rank, _sv = np.linalg.lstsq(design, ys, rcond=None)
    fit = design @ coef
    rms = float(np.sqrt(np.mean((ys - fit) ** 2)))
    span = abs(coef[0]) * (xs[-1] - xs[0])
    rel = rms / span if span > 0 else float("inf")
    rate = RealMP(mpf(coef[0]), mpf(rms / max(xs[-1] - xs[0], 1.0)), mp.prec)
    return rate, rel
