"""The three superzeta families over the Riemann zeros.

First kind  Z_A(s|t)   = sum_rho (1/2 + t - rho)^(-s)
Second kind Z_B(sig|t) = sum_k   (tau_k^2 + t^2)^(-sig)
Third kind  Z_C(s|tau) = sum_k   (tau_k + tau)^(-s)

Exact rational special values live on the Fraction path and never round.
Transcendental values at positive integers come from the xi engine.
Non-integer s in the left half-plane is served by the continuation
formula through the partner zeta over the trivial zeros and a Mellin
integral of zeta'/zeta along a horizontal ray.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp, mpf, mpc, workprec

from .mpcore import bernoulli_poly, euler_number, hurwitz_zeta
from .precision import (
    ComplexMP,
    DomainError,
    PoleError,
    PrecisionContext,
    RealMP,
    default_context,
    to_mpc,
    to_mpf,
)
from .series import ps_compose, ps_revert_quadratic
from .xi import log_deriv_series, xi, xi_log_deriv
from .zeros import ZeroSet, zero_sum

__all__ = [
    "IllConditionedWarning",
    "SpecialValue",
    "za_rational",
    "za_deriv0",
    "za_positive",
    "za_fp1",
    "zs_trivial",
    "j_mellin",
    "za_continuation",
    "zb_rational",
    "zb_positive",
    "zb_deriv0",
    "zb_pole_probe",
    "zc_values",
    "zc_fp0",
]


class IllConditionedWarning(UserWarning):
    """Weights in a conversion formula amplify rounding; precision raised."""


@dataclass(frozen=True)
class SpecialValue:
    """A tagged superzeta value: exact Fraction or an error-carrying float.

    Exact payloads occur exactly on the closed-form rational path; every
    other payload carries a finite error bound.
    """

    family: str
    argument: object
    shift: object
    payload: object
    method: str

    _METHODS = ("table_closed_form", "xi_derivative", "zba_conversion",
                "z1e_confluence", "continuation", "zero_sum")

    def __post_init__(self):
        if self.method not in self._METHODS:
            raise DomainError(f"unknown method tag {self.method!r}")
        if self.is_exact:
            if self.method != "table_closed_form":
                raise DomainError("exact payload requires the closed-form path")
            if not isinstance(self.shift, (Fraction, int)):
                raise DomainError("exact payload requires a rational shift")

    @property
    def is_exact(self) -> bool:
        return isinstance(self.payload, (Fraction, int))

    @property
    def error(self):
        if self.is_exact:
            return mpf(0)
        return self.payload.error


# ---------------------------------------------------------------------------
# First kind: rational rows, boxed rows, positive integers
# ---------------------------------------------------------------------------

def za_rational(n: int, t) -> Fraction:
    """Z_A(-n | t) exactly: the rational row of the first-kind table."""
    if n < 0:
        raise DomainError("za_rational takes the row index n >= 0")
    t = Fraction(t)
    if n == 0:
        return Fraction(1, 2) * (t + Fraction(7, 2))
    half = Fraction(1, 2)
    return (Fraction(2 ** n, n + 1) * bernoulli_poly(n + 1, Fraction(1, 4) + t / 2)
            + (t + half) ** n + (t - half) ** n)


def za_deriv0(t, ctx: PrecisionContext | None = None) -> RealMP:
    """d/ds Z_A(s|t) at s = 0: -(log 2pi) t/2 + log(8 pi)/4 - log Xi(1/2+t)."""
    ctx = ctx or default_context()
    with ctx.workprec(16):
        t = to_mpf(t)
        xv = xi(mpf(1) / 2 + t, ctx)
        if not xv.value.real > 0:
            raise DomainError("basepoint 1/2 + t is at or beyond a zero of Xi")
        val = (-mpmath.log(2 * mpmath.pi) / 2 * t
               + mpmath.log(8 * mpmath.pi) / 4 - mpmath.log(xv.value.real))
        err = xv.error / xv.value.real + abs(val) * mpf(2) ** (-ctx.bits + 4)
        return RealMP(val, err, ctx.bits)


def za_positive(n: int, t, ctx: PrecisionContext | None = None) -> RealMP:
    """Z_A(n|t) = (-1)^(n-1)/(n-1)! (log Xi)^(n)(1/2 + t) for n >= 1."""
    ctx = ctx or default_context()
    if n < 1:
        raise DomainError("za_positive needs n >= 1")
    with ctx.workprec(16):
        b = mpf(1) / 2 + to_mpf(t)
    orders = ((n + 15) // 16) * 16  # batch the quadrature over order blocks
    series = log_deriv_series("log_xi", b, orders, ctx)
    d = series.derivative(n)
    with ctx.workprec(16):
        fact = mpmath.factorial(n - 1)
        return RealMP((-1) ** (n - 1) * d.value / fact, d.error / fact, ctx.bits)


def za_fp1(t, ctx: PrecisionContext | None = None) -> RealMP:
    """Finite part of Z_A at s = 1: log(2 pi)/2 + (log Xi)'(1/2 + t)."""
    ctx = ctx or default_context()
    with ctx.workprec(16):
        t = to_mpf(t)
        d = xi_log_deriv(mpf(1) / 2 + t, ctx)
        val = mpmath.log(2 * mpmath.pi) / 2 + d.value.real
        return RealMP(val, d.error + abs(val) * mpf(2) ** (-ctx.bits + 2),
                      ctx.bits)


# ---------------------------------------------------------------------------
# Partner zeta over the trivial zeros, and the continuation formula
# ---------------------------------------------------------------------------

def zs_trivial(s, t, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Z_S(s|t) = sum_k (1/2 + t + 2k)^(-s) = 2^(-s) zeta(s, 5/4 + t/2)."""
    ctx = ctx or default_context()
    if isinstance(t, (Fraction, int)):
        w = Fraction(5, 4) + Fraction(t) / 2
    else:
        with ctx.workprec(16):
            w = mpf(5) / 4 + to_mpf(t) / 2
    hz = hurwitz_zeta(s, w, 0, ctx)
    with ctx.workprec(16):
        factor = mpmath.power(2, -to_mpc(s))
    return hz * ComplexMP(factor, mpf(0), ctx.bits)


def j_mellin(s, t, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Mellin transform J(s|t) of zeta'/zeta along the ray from 1/2 + t.

    Valid for Re s < 1 and t > 1/2.  The segment [0, delta] is integrated
    term by term against the Taylor series of zeta'/zeta at the ray foot
    (term k contributes c_k delta^(k+1-s)/(k+1-s)); the remainder uses
    adaptive quadrature on [delta, Y] plus a 2^-x tail bound.
    """
    ctx = ctx or default_context()
    with ctx.workprec(16):
        s = to_mpc(s)
        t = to_mpf(t)
    if not mp.re(s) < 1:
        raise DomainError("j_mellin needs Re s < 1")
    if not t > mpf(1) / 2:
        raise DomainError("j_mellin needs t > 1/2 (singularity-free ray)")

    pad = 32
    prec = ctx.bits + pad
    with workprec(prec):
        b = mpf(1) / 2 + t
        rad = t - mpf(1) / 2  # distance to the pole of zeta at 1
        delta = min(mpf(1), rad / 2)
        # enough Taylor terms that (delta/rad)^N clears the target
        ratio = delta / rad
        n_terms = int(mpmath.ceil((ctx.bits + 8) * mpmath.log(2)
                                  / -mpmath.log(ratio))) + 4
        series = log_deriv_series("log_zeta", b, n_terms + 1, ctx)
        head = mpc(0)
        head_err = mpf(0)
        dpow = delta ** (1 - s)  # delta^(k+1-s)
        for k in range(n_terms + 1):
            ck = series.values[k] / mpmath.factorial(k)
            cke = series.errors[k] / mpmath.factorial(k)
            head += ck * dpow / (k + 1 - s)
            head_err += (cke + abs(ck) * mpf(2) ** (-prec + 4)) * abs(dpow)
            dpow *= delta

        def integrand(y):
            v, _e = _zeta_log_deriv_ray(b + y, prec)
            return v * y ** (-s)

        y_top = mpf(int(3.33 * (ctx.digits + 8)) + 8)
        y_top = max(y_top, 4 * abs(mp.re(s)) + 8)
        quad_val, quad_err = mpmath.quad(integrand, [delta, y_top],
                                         error=True, maxdegree=9)
        tail_bound = (4 * mpmath.power(2, -(b + y_top))
                      * y_top ** max(0, -mp.re(s)))
        value = head + quad_val
        err = head_err + abs(quad_err) + tail_bound
        return ComplexMP(value, err, ctx.bits)


def _zeta_log_deriv_ray(x, prec):
    from .xi import _pp_log_deriv
    pp, err = _pp_log_deriv(mpc(x), prec)
    return pp - 1 / (mpc(x) - 1), err


def za_continuation(s, t, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Z_A(s|t) for Re s < 1 via the continuation formula.

    Assembles -Z_S(s|t) + (t - 1/2)^(-s) + sin(pi s)/pi * J(s|t).
    Integer s is served by the closed forms instead and rejected here.
    """
    ctx = ctx or default_context()
    with ctx.workprec(16):
        s = to_mpc(s)
        t = to_mpf(t)
    if mp.im(s) == 0 and mp.re(s) == int(mp.re(s)):
        raise DomainError("integer s is served by the closed-form rows")
    if not mp.re(s) < 1:
        raise DomainError("continuation formula needs Re s < 1")
    if not t > mpf(1) / 2:
        raise DomainError("continuation restricted to real t > 1/2")
    zs = zs_trivial(s, t, ctx)
    jj = j_mellin(s, t, ctx)
    with ctx.workprec(16):
        power = ComplexMP((t - mpf(1) / 2) ** (-s), mpf(0), ctx.bits)
        sin_factor = ComplexMP(mpmath.sinpi(s) / mpmath.pi, mpf(0), ctx.bits)
    return -zs + power + sin_factor * jj


# ---------------------------------------------------------------------------
# Second kind
# ---------------------------------------------------------------------------

def zb_rational(m: int, t) -> Fraction:
    """Z_B(-m | t) exactly: the rational row of the second-kind table."""
    if m < 0:
        raise DomainError("zb_rational takes the row index m >= 0")
    t = Fraction(t)
    acc = Fraction(0)
    for j in range(m + 1):
        acc += (math.comb(m, j) * (-1) ** j * euler_number(2 * j)
                * (2 * t) ** (2 * (m - j)))
    return (t * t - Fraction(1, 4)) ** m - Fraction(1, 2 ** (2 * m + 3)) * acc


def zb_positive(m: int, t, ctx: PrecisionContext | None = None,
                route: str = "binomial") -> RealMP:
    """Z_B(m|t) for m >= 1.

    route="binomial": the double-residue conversion
       Z_B(m|t) = sum_{n=1..m} C(2m-n-1, m-1) (2t)^(n-2m) Z_A(n|t), t != 0,
    switching to the confluent expansion around t = 0 when |t| < 2^-8.
    route="series": chain rule through the variable w = 2ty + y^2, i.e.
    composing the log Xi Taylor series with the reverted quadratic.
    """
    ctx = ctx or default_context()
    if m < 1:
        raise DomainError("zb_positive needs m >= 1")
    with ctx.workprec(16):
        t_mp = to_mpf(t)

    if t_mp == 0:
        # confluence: Z_B0(m) = (1/2)(-1)^m Z_A0(2m)
        v = za_positive(2 * m, 0, ctx)
        return RealMP((-1) ** m * v.value / 2, v.error / 2, ctx.bits)

    if abs(t_mp) < mpf(2) ** -8:
        return _zb_confluent_expansion(m, t_mp, ctx)

    if route == "series":
        return _zb_series_route(m, t_mp, ctx)
    if route != "binomial":
        raise DomainError(f"unknown zb_positive route {route!r}")

    # conditioning of the (2t)^(n-2m) weights
    extra = 0
    if abs(2 * t_mp) < 1:
        extra = int((2 * m - 1) * -mpmath.log(abs(2 * t_mp), 2)) + 8
        if abs(2 * t_mp) < mpf(1) / 4:
            warnings.warn(
                f"(2t)^(n-2m) weights are ill-conditioned at t = {t_mp}; "
                f"raising working precision by {extra} bits",
                IllConditionedWarning, stacklevel=2)
    work = ctx.with_bits(ctx.bits + extra)
    orders = ((m + 15) // 16) * 16
    series = log_deriv_series("log_xi", mpf(1) / 2 + t_mp, orders, work)
    with workprec(work.bits + 16):
        acc = mpf(0)
        err = mpf(0)
        two_t = 2 * t_mp
        for n in range(1, m + 1):
            za_n = ((-1) ** (n - 1) * series.values[n - 1]
                    / mpmath.factorial(n - 1))
            za_e = series.errors[n - 1] / mpmath.factorial(n - 1)
            wgt = math.comb(2 * m - n - 1, m - 1) * two_t ** (n - 2 * m)
            acc += wgt * za_n
            err += abs(wgt) * za_e
        return RealMP(acc, err + abs(acc) * mpf(2) ** (-ctx.bits + 4), ctx.bits)


def _zb_confluent_expansion(m: int, t_mp, ctx) -> RealMP:
    """Z_B(m|t) = sum_j (-1)^j C(m+j-1, j) t^(2j) Z_B0(m+j), tiny |t|."""
    with ctx.workprec(16):
        t2 = t_mp * t_mp
        ratio = t2 / mpf(196)  # tau_1^2 ~ 199.8 bounds the term decay
        j_max = int(mpmath.ceil((ctx.bits + 8) * mpmath.log(2)
                                / -mpmath.log(ratio))) + 2
    orders = 2 * (m + j_max)
    series = log_deriv_series("log_xi", mpf(1) / 2, ((orders + 15) // 16) * 16,
                              ctx)
    with ctx.workprec(16):
        acc = mpf(0)
        err = mpf(0)
        tpow = mpf(1)
        for j in range(j_max + 1):
            mm = m + j
            zb0 = ((-1) ** mm * (-1) ** (2 * mm - 1) * series.values[2 * mm - 1]
                   / (2 * mpmath.factorial(2 * mm - 1)))
            zb0_e = series.errors[2 * mm - 1] / (2 * mpmath.factorial(2 * mm - 1))
            wgt = (-1) ** j * math.comb(m + j - 1, j) * tpow
            acc += wgt * zb0
            err += abs(wgt) * zb0_e
            tpow *= t2
        return RealMP(acc, err + abs(acc) * mpf(2) ** (-ctx.bits + 4), ctx.bits)


def _zb_series_route(m: int, t_mp, ctx) -> RealMP:
    """Z_B(m|t) = (-1)^(m-1) m [w^m] log Xi(1/2 + sqrt(t^2 + w))."""
    orders = 2 * m
    series = log_deriv_series("log_xi", mpf(1) / 2 + t_mp,
                              ((orders + 15) // 16) * 16, ctx)
    with workprec(ctx.bits + 32):
        outer = [mpf(0)] + [series.values[k - 1] / mpmath.factorial(k)
                            for k in range(1, orders + 1)]
        y_of_w = ps_revert_quadratic(t_mp, m)
        phi = ps_compose(outer, y_of_w, m)
        err = sum(series.errors[k - 1] / mpmath.factorial(k)
                  for k in range(1, orders + 1))
        val = (-1) ** (m - 1) * m * phi[m]
        cond = max(abs(c) for c in y_of_w) ** m if m else mpf(1)
        return RealMP(val, (err * cond + abs(val) * mpf(2) ** (-ctx.bits + 6)),
                      ctx.bits)


def zb_deriv0(t, ctx: PrecisionContext | None = None) -> RealMP:
    """d/dsigma Z_B(0|t) = log(8 pi)/4 - log Xi(1/2 + t)."""
    ctx = ctx or default_context()
    with ctx.workprec(16):
        t = to_mpf(t)
        xv = xi(mpf(1) / 2 + t, ctx)
        if not xv.value.real > 0:
            raise DomainError("basepoint 1/2 + t is at or beyond a zero of Xi")
        val = mpmath.log(8 * mpmath.pi) / 4 - mpmath.log(xv.value.real)
        err = xv.error / xv.value.real + abs(val) * mpf(2) ** (-ctx.bits + 4)
        return RealMP(val, err, ctx.bits)


def zb_pole_probe(eps_list, zset: ZeroSet, ctx: PrecisionContext | None = None,
                  t=0):
    """Fit Z_B(1/2 + eps | t) ~ a eps^-2 + b eps^-1 + c from tail-corrected sums.

    Returns (a, b) as RealMP with least-squares standard errors.
    """
    ctx = ctx or default_context()
    eps = [to_mpf(e) for e in eps_list]
    if len(set(float(e) for e in eps)) < 4:
        raise DomainError("pole probe needs at least 4 distinct epsilon values")
    if any(not 0 < e <= mpf("0.2") for e in eps):
        raise DomainError("epsilon values must lie in (0, 0.2]")
    with ctx.workprec(16):
        t = to_mpf(t)
    rows = []
    ys = []
    for e in eps:
        v = zero_sum("ZB", zset, sigma=mpf(1) / 2 + e, t=t, tail=True, ctx=ctx)
        rows.append([float(e) ** -2, float(e) ** -1, 1.0])
        ys.append(float(v.value.real))
    design = np.array(rows)
    target = np.array(ys)
    coef, _res, _rank, _sv = np.linalg.lstsq(design, target, rcond=None)
    resid = target - design @ coef
    dof = max(1, len(eps) - 3)
    sigma2 = float(resid @ resid) / dof
    cov = np.linalg.inv(design.T @ design) * sigma2
    a = RealMP(mpf(coef[0]), mpf(np.sqrt(max(cov[0, 0], 0.0))), ctx.bits)
    b = RealMP(mpf(coef[1]), mpf(np.sqrt(max(cov[1, 1], 0.0))), ctx.bits)
    return a, b


# ---------------------------------------------------------------------------
# Third kind
# ---------------------------------------------------------------------------

def zc_values(s, tau, zset: ZeroSet, ctx: PrecisionContext | None = None,
              tail: bool = True) -> ComplexMP:
    """Z_C(s|tau) by its direct series over the set, Re s > 1."""
    ctx = ctx or default_context()
    with ctx.workprec(16):
        s = to_mpc(s)
        tau = to_mpf(tau)
    if not mp.re(s) > 1:
        raise DomainError("Z_C direct series needs Re s > 1")
    if tau < 0:
        raise DomainError("zc_values takes tau >= 0")
    return zero_sum("ZC", zset, s=s, tau=tau, tail=tail, ctx=ctx)


def zc_fp0(tau, ctx: PrecisionContext | None = None) -> RealMP:
    """Finite part of Z_C(s|tau) at s = 0: 7/8 + (log 2pi / 2pi) tau."""
    ctx = ctx or default_context()
    with ctx.workprec(16):
        tau = to_mpf(tau)
        val = mpf(7) / 8 + mpmath.log(2 * mpmath.pi) / (2 * mpmath.pi) * tau
        return RealMP(val, abs(val) * mpf(2) ** (-ctx.bits + 2), ctx.bits)
