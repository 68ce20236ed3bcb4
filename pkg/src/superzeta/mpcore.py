"""Classical special functions at arbitrary precision.

The exact layer (Bernoulli/Euler numbers and polynomials) runs on
``fractions.Fraction`` and big integers and never rounds.  The floating
layer is built on one Euler-Maclaurin engine for the Hurwitz zeta
function and its s-derivatives; Dirichlet beta, polygamma and the
Stieltjes cumulants are assembled on top of it.  Exact and floating
paths never mix implicitly; conversion is explicit and one-way.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import mp, mpf, mpc, workprec

from .precision import (
    PrecisionContext,
    RealMP,
    ComplexMP,
    ConvergenceError,
    DomainError,
    PoleError,
    default_context,
    to_mpc,
    to_mpf,
)
from .series import ps_log

__all__ = [
    "bernoulli_number",
    "bernoulli_poly",
    "euler_number",
    "hurwitz_zeta",
    "riemann_zeta",
    "dirichlet_beta",
    "polygamma",
    "zeta_pole_series",
    "stieltjes_gamma",
    "stieltjes_cumulants",
    "taylor_coeffs_circle",
]


# ---------------------------------------------------------------------------
# Exact layer
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    """Exact Bernoulli number B_n, convention B_1 = -1/2."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    # sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1
    acc = Fraction(0)
    for j in range(n):
        acc += math.comb(n + 1, j) * bernoulli_number(j)
    return -acc / (n + 1)


def bernoulli_poly(n: int, w) -> Fraction:
    """Exact Bernoulli polynomial B_n(w) for rational w."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    w = Fraction(w)
    acc = Fraction(0)
    wp = Fraction(1)
    for k in range(n, -1, -1):
        acc += math.comb(n, k) * bernoulli_number(k) * wp
        wp *= w
    return acc


@lru_cache(maxsize=None)
def euler_number(n: int) -> int:
    """Exact Euler number E_n from the sech generating function; n even."""
    if n < 0 or n % 2 == 1:
        raise DomainError("Euler numbers are defined here for even n >= 0")
    if n == 0:
        return 1
    acc = 0
    for k in range(0, n, 2):
        acc += math.comb(n, k) * euler_number(k)
    return -acc


# ---------------------------------------------------------------------------
# Euler-Maclaurin Hurwitz zeta with s-derivatives
# ---------------------------------------------------------------------------

_LOG_CACHE: dict = {}


def _logs(w: mpf, n: int, prec: int):
    """ln(k + w) for k = 0..n-1, cached per (w, prec)."""
    key = (w._mpf_, prec)
    arr = _LOG_CACHE.get(key)
    if arr is None:
        arr = []
        _LOG_CACHE[key] = arr
        if len(_LOG_CACHE) > 64:
            # drop the oldest half; cheap and keeps memory bounded
            for k in list(_LOG_CACHE)[:32]:
                if k != key:
                    del _LOG_CACHE[k]
    with workprec(prec):
        for k in range(len(arr), n):
            arr.append(mpmath.log(k + w))
    return arr


def _poch_mul(p, s, c):
    """Update derivative vector of a polynomial under multiply by (s + c)."""
    d = len(p) - 1
    out = [mpc(0)] * (d + 1)
    for i in range(d + 1):
        out[i] = (s + c) * p[i]
        if i >= 1:
            out[i] += i * p[i - 1]
    return out


def _leibniz(p, negL_pows, d):
    """sum_i C(d,i) * p[i] * (-L)^(d-i) for the correction-term derivative."""
    acc = mpc(0)
    for i in range(d + 1):
        acc += math.comb(d, i) * p[i] * negL_pows[d - i]
    return acc


def _hurwitz_raw(s: mpc, w: mpf, d: int, prec: int):
    """Core Euler-Maclaurin evaluation at ambient precision ``prec``.

    Returns (value, truncation_error_estimate) as (mpc, mpf).  The error
    estimate is the magnitude of the first omitted correction term plus a
    rounding allowance.
    """
    digits = prec * 0.30103
    n_direct = max(int(0.4 * digits) + 1, int(0.25 * abs(mp.im(s))) + 8,
                   int(0.2 * abs(s)) + 8)
    tol_factor = mpf(2) ** (-prec)

    for _attempt in range(8):
        logs = _logs(w, n_direct, prec)
        main = mpc(0)
        for k in range(n_direct):
            term = mpmath.exp(-s * logs[k])
            if d:
                term *= (-logs[k]) ** d
            main += term

        u = n_direct + w
        L = mpmath.log(u)
        negL_pows = [mpc(1)]
        for _ in range(max(d, 1)):
            negL_pows.append(negL_pows[-1] * (-L))

        u_pow_1ms = mpmath.exp((1 - s) * L)
        # d-th derivative of u^(1-s)/(s-1) by the Leibniz rule
        tail = mpc(0)
        for i in range(d + 1):
            fact = math.comb(d, i) * (-1) ** (d - i) * math.factorial(d - i)
            tail += fact * negL_pows[i] * u_pow_1ms / (s - 1) ** (d - i + 1)

        u_pow_ms = u_pow_1ms / u
        half = mpf("0.5") * negL_pows[d] * u_pow_ms

        value = main + tail + half
        # rounding floor is set by the largest intermediate, not the result
        sigma = mp.re(s)
        grow = (u ** (-sigma) if sigma < 0 else mpf(1)) * max(L, mpf(1)) ** d
        max_mag = max(abs(value), abs(tail), grow, mpf(1))
        tol = tol_factor * max_mag

        # Bernoulli corrections; pochhammer-derivative vector p tracks
        # P_j(s) = s(s+1)...(s+2j-2) and its first d s-derivatives.
        p = [mpc(0)] * (d + 1)
        p[0] = mpc(s)
        if d >= 1:
            p[1] = mpc(1)
        upow = u_pow_ms / u  # u^(-s-2j+1) at j = 1
        uinv2 = 1 / (u * u)
        prev_mag = mp.inf
        converged = False
        err = mpf(0)
        j = 0
        while True:
            j += 1
            if j > 1:
                p = _poch_mul(p, s, 2 * j - 3)
                p = _poch_mul(p, s, 2 * j - 2)
                upow = upow * uinv2
            b_fac = mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j)
            term = b_fac * _leibniz(p, negL_pows, d) * upow
            mag = abs(term)
            if mag <= tol:
                value += term
                err = mag
                converged = True
                break
            if mag > prev_mag and j > 2:
                break  # corrections started diverging; need larger n_direct
            value += term
            prev_mag = mag
            if j > prec:
                break
        if converged:
            rounding = (n_direct + j + 8) * tol_factor * max_mag
            return value, err + rounding
        n_direct *= 2
        if n_direct > (1 << 22):
            break
    raise ConvergenceError(
        f"Euler-Maclaurin for zeta({s}, {w}) did not converge at {prec} bits")


def hurwitz_zeta(s, w, d: int = 0, ctx: PrecisionContext | None = None) -> ComplexMP:
    """d-th s-derivative of the Hurwitz zeta function zeta(s, w), w > 0.

    Euler-Maclaurin summation, differentiated analytically term by term;
    the reported error bound comes from the first omitted correction term.
    Raises :class:`PoleError` at the pole s = 1.
    """
    ctx = ctx or default_context()
    if d < 0:
        raise DomainError("derivative order must be >= 0")
    with ctx.workprec(10):
        s = to_mpc(s)
        w = to_mpf(w)
    if w <= 0:
        raise DomainError("hurwitz_zeta requires w > 0")
    if s == 1:
        raise PoleError("zeta(s, w) has its pole at s = 1")

    def run(bits):
        # pad for cancellation against k^|Re s|-sized main-sum terms
        digits = bits * 0.30103
        n_est = max(0.4 * digits, 0.25 * abs(complex(s).imag)) + 8
        sigma = complex(s).real
        pad = 28 + (int(-sigma * math.log2(n_est + float(w) + 2)) + 8
                    if sigma < 0 else 0)
        with workprec(bits + pad):
            v, e = _hurwitz_raw(to_mpc(s), to_mpf(w), d, bits + pad)
        run.err = e
        return v

    value, esc_err, bits = ctx.escalate(run)
    return ComplexMP(value, esc_err + run.err, bits)


def riemann_zeta(s, d: int = 0, ctx: PrecisionContext | None = None) -> ComplexMP:
    """zeta(s) = zeta(s, 1), with the same derivative convention."""
    return hurwitz_zeta(s, 1, d, ctx)


def dirichlet_beta(s, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Dirichlet beta via 4^(-s) [zeta(s,1/4) - zeta(s,3/4)] (entire).

    The point s = 1, where both Hurwitz terms have poles that cancel, is
    served through beta(1) = (psi(3/4) - psi(1/4)) / 4.
    """
    ctx = ctx or default_context()
    with ctx.workprec(10):
        s = to_mpc(s)
    if s == 1:
        a = polygamma(0, Fraction(3, 4), ctx)
        b = polygamma(0, Fraction(1, 4), ctx)
        quarter = RealMP(mpf("0.25"), mpf(0), ctx.bits)
        r = (a - b) * quarter
        return ComplexMP(r.value, r.error, r.bits)
    za = hurwitz_zeta(s, Fraction(1, 4), 0, ctx)
    zb = hurwitz_zeta(s, Fraction(3, 4), 0, ctx)
    with ctx.workprec(10):
        factor = mpmath.power(4, -s)
    return (za - zb) * ComplexMP(factor, mpf(0), ctx.bits)


# ---------------------------------------------------------------------------
# Polygamma
# ---------------------------------------------------------------------------

def polygamma(k: int, x, ctx: PrecisionContext | None = None) -> RealMP:
    """psi^(k)(x) for real x > 0: asymptotic series plus upward recurrence."""
    ctx = ctx or default_context()
    if k < 0:
        raise DomainError("polygamma order must be >= 0")
    with ctx.workprec(10):
        x = to_mpf(x)
    if x <= 0:
        raise DomainError("polygamma requires x > 0")

    def run(bits):
        pad = 24
        prec = bits + pad
        with workprec(prec):
            xx = mpf(x)
            digits = prec * 0.30103
            x0 = 0.38 * digits + 0.5 * k + 6
            m = max(0, int(mpmath.ceil(x0 - xx)))
            xa = xx + m
            tol = mpf(2) ** (-prec)
            # asymptotic series at xa
            if k == 0:
                acc = mpmath.log(xa) - 1 / (2 * xa)
            else:
                acc = (mpmath.factorial(k - 1) / xa ** k
                       + mpmath.factorial(k) / (2 * xa ** (k + 1)))
            xa2 = xa * xa
            xpow = xa ** (-(2 + k))  # xa^-(2j+k) at j = 1
            last = mp.inf
            j = 0
            while True:
                j += 1
                if j > 1:
                    xpow /= xa2
                coef = mpmath.bernoulli(2 * j)
                if k == 0:
                    term = -coef / (2 * j) * xpow  # -B_2j / (2j x^2j)
                else:
                    term = (coef * mpmath.factorial(2 * j + k - 1)
                            / mpmath.factorial(2 * j) * xpow)
                mag = abs(term)
                if mag <= tol * max(abs(acc), mpf(1)) or mag > last:
                    run.trunc = mag
                    break
                acc += term
                last = mag
            if k >= 1:
                acc *= (-1) ** (k - 1)
            # shift back down: psi^(k)(x) = psi^(k)(x+m) - sum over the gap
            if m:
                shift = mpf(0)
                for i in range(m):
                    shift += (xx + i) ** (-(k + 1))
                acc -= (-1) ** k * mpmath.factorial(k) * shift
            return acc

    value, esc_err, bits = ctx.escalate(run)
    return RealMP(value, esc_err + getattr(run, "trunc", mpf(0)), bits)


# ---------------------------------------------------------------------------
# Cauchy-circle Taylor coefficients (shared quadrature core)
# ---------------------------------------------------------------------------

def taylor_coeffs_circle(f, center, radius, n_orders: int, prec: int,
                         target_digits: float, m_start: int | None = None,
                         m_max: int = 1 << 15):
    """Taylor coefficients c_0..c_n of f at ``center`` by circle quadrature.

    Trapezoid rule on |z - center| = radius with node doubling until two
    successive node counts agree to ``target_digits`` (measured on the
    Fourier side, where the quadrature accuracy lives).  Assumes the
    conjugate symmetry f(conj z) = conj f(z), so only the upper half
    circle is evaluated.  Returns (coeffs, errors, nodes_used).
    """
    center = to_mpf(center)
    radius = to_mpf(radius)
    m = m_start or 64
    while m < 2 * (n_orders + 1):
        m *= 2
    with workprec(prec):
        vals = {}  # angle index over the densest grid seen so far

        def fill(mm):
            # indices are m_max-normalized so refinements reuse old nodes
            step = m_max // mm
            for i in range(0, m_max // 2 + 1, step):
                if i not in vals:
                    phi = 2 * mpmath.pi * i / m_max
                    z = center + radius * mpmath.exp(mpc(0, 1) * phi)
                    vals[i] = f(z)

        def fourier(mm):
            step = m_max // mm
            idx = list(range(0, m_max // 2 + 1, step))
            fs = [vals[i] for i in idx]
            fscale = max([abs(v) for v in fs] + [mpf(1)])
            roots = [mpmath.exp(mpc(0, -2) * mpmath.pi * i / m_max) for i in idx]
            coeffs = []
            for j in range(n_orders + 1):
                acc = fs[0] + ((-1) ** j) * fs[-1]
                for t in range(1, len(idx) - 1):
                    acc += 2 * (fs[t] * roots[t] ** j).real
                coeffs.append(acc / mm)
            return coeffs, fscale

        if m > m_max:
            raise ConvergenceError("circle quadrature node budget exceeded")
        fill(m)
        prev, fscale = fourier(m)
        while True:
            m2 = 2 * m
            if m2 > m_max:
                raise ConvergenceError(
                    f"circle quadrature did not settle below {m_max} nodes")
            fill(m2)
            cur, fscale = fourier(m2)
            tol = fscale * mpf(10) ** (-target_digits)
            worst = max(abs(a - b) for a, b in zip(prev, cur))
            if worst <= tol:
                rpow = mpf(1)
                coeffs, errors = [], []
                for j, (a, b) in enumerate(zip(prev, cur)):
                    err = (abs(a - b) + fscale * mpf(2) ** (-prec + 6)) / rpow
                    coeffs.append(b / rpow)
                    errors.append(err)
                    rpow *= radius
                return coeffs, errors, m2
            prev, m = cur, m2


# ---------------------------------------------------------------------------
# Laurent data of zeta at s = 1: Stieltjes constants and their cumulants
# ---------------------------------------------------------------------------

_POLE_SERIES_CACHE: dict = {}


def zeta_pole_series(n_terms: int, ctx: PrecisionContext | None = None):
    """Taylor coefficients c_0..c_n of y*zeta(1+y) at y = 0 (c_0 = 1).

    Computed as Cauchy-circle coefficients of radius 1/2 around the pole,
    the one differentiation mechanism shared with the xi engine.  Returns
    (coeffs as mpf list, errors as mpf list).
    """
    ctx = ctx or default_context()
    key = (ctx.bits,)
    cached = _POLE_SERIES_CACHE.get(key)
    if cached is not None and len(cached[0]) > n_terms:
        return cached[0][: n_terms + 1], cached[1][: n_terms + 1]

    prec = ctx.bits + 32
    radius = mpf("0.5")

    def g(z):
        # z = 1 + y on the circle; value y * zeta(1 + y)
        y = z - 1
        v = _hurwitz_raw(mpc(z), mpf(1), 0, prec)[0]
        return y * v

    # orders decay like (1/2)^j relative to the circle data, so ask for a
    # few digits beyond the target to keep high orders meaningful
    coeffs_c, errs, _m = taylor_coeffs_circle(
        g, mpf(1), radius, n_terms, prec, target_digits=ctx.digits + 3)
    with workprec(prec):
        coeffs = [c.real for c in coeffs_c]
    _POLE_SERIES_CACHE[key] = (coeffs, errs)
    return coeffs, errs


def stieltjes_gamma(n: int, ctx: PrecisionContext | None = None) -> RealMP:
    """Stieltjes constant gamma_n from the Laurent data at s = 1."""
    ctx = ctx or default_context()
    coeffs, errs = zeta_pole_series(n + 1, ctx)
    with ctx.workprec(10):
        fact = mpmath.factorial(n)
        return RealMP((-1) ** n * fact * coeffs[n + 1],
                      fact * errs[n + 1], ctx.bits)


def stieltjes_cumulants(n_max: int, ctx: PrecisionContext | None = None):
    """Cumulants g^c_1..g^c_n of log[y zeta(1+y)] as a list of RealMP."""
    ctx = ctx or default_context()
    if n_max < 1:
        raise DomainError("need n_max >= 1")
    coeffs, errs = zeta_pole_series(n_max, ctx)
    with ctx.workprec(32):
        h = ps_log(coeffs, n_max)
        out = []
        for n in range(1, n_max + 1):
            fact = mpmath.factorial(n)
            # log-series conditioning is mild; reuse the coefficient error
            out.append(RealMP(-((-1) ** n) * fact * h[n],
                              fact * (errs[n] + mpf(2) ** (-ctx.bits)),
                              ctx.bits))
    return out
