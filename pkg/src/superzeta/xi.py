"""The completed zeta function Xi and high-order derivatives of log Xi.

Xi(x) = x (x-1) pi^(-x/2) Gamma(x/2) zeta(x), normalized so Xi(0) = Xi(1) = 1.
The removable point x = 1 is handled through the entire product
P(x) = (x-1) zeta(x), whose Taylor data at 1 come from the same
Cauchy-circle machinery as everything else.

High-order derivatives of log Xi (and of log zeta) at real basepoints are
Cauchy-circle coefficients of the single-valued logarithmic derivative,
which avoids every branch question.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp, mpf, mpc, workprec

from .mpcore import _hurwitz_raw, taylor_coeffs_circle, zeta_pole_series
from .precision import (
    ComplexMP,
    DomainError,
    PrecisionContext,
    RealMP,
    default_context,
    to_mpc,
    to_mpf,
)
from .series import ps_diff, ps_div, ps_eval

__all__ = ["xi", "xi_log_deriv", "LogDerivSeries", "log_deriv_series",
           "FIRST_ZERO_ORDINATE"]

# first Riemann zero height, used only to bound analyticity disks
FIRST_ZERO_ORDINATE = 14.134725141734693


# ---------------------------------------------------------------------------
# zeta near its pole: P(x) = (x-1) zeta(x) and P'/P
# ---------------------------------------------------------------------------

_PP_CACHE: dict = {}


def _pole_series(prec: int):
    """Taylor coefficients at 1 of P(1+y) and of (P'/P)(1+y)."""
    key = prec
    hit = _PP_CACHE.get(key)
    if hit is not None:
        return hit
    ctx = PrecisionContext(bits=prec)
    n_terms = int(prec * 0.36) + 24
    coeffs, _errs = zeta_pole_series(n_terms, ctx)
    with workprec(prec + 16):
        dp = ps_diff(coeffs)
        pp = ps_div(dp, coeffs, n_terms - 1)
    _PP_CACHE[key] = (coeffs, pp)
    if len(_PP_CACHE) > 8:
        for k in list(_PP_CACHE)[:4]:
            if k != key:
                del _PP_CACHE[k]
    return _PP_CACHE[key]


def _p_entire(x: mpc, prec: int):
    """P(x) = (x-1) zeta(x), series route inside |x-1| < 1/4."""
    y = x - 1
    if abs(y) < mpf(1) / 4:
        coeffs, _ = _pole_series(prec)
        return ps_eval(coeffs, y), mpf(2) ** (-prec + 6)
    v, e = _hurwitz_raw(x, mpf(1), 0, prec)
    return y * v, e * abs(y)


def _pp_log_deriv(x: mpc, prec: int):
    """(P'/P)(x) = 1/(x-1) + zeta'/zeta(x), series route near the pole."""
    y = x - 1
    if abs(y) < mpf(1) / 4:
        _, pp = _pole_series(prec)
        return ps_eval(pp, y), mpf(2) ** (-prec + 8)
    z0, e0 = _hurwitz_raw(x, mpf(1), 0, prec)
    z1, e1 = _hurwitz_raw(x, mpf(1), 1, prec)
    if abs(z0) <= mpf(2) ** (-prec + 8) * max(abs(z1), 1):
        raise DomainError(f"zeta underflows working precision at x = {x}")
    val = 1 / y + z1 / z0
    err = (e1 + abs(val) * e0) / abs(z0)
    return val, err


# ---------------------------------------------------------------------------
# Xi and Xi'/Xi
# ---------------------------------------------------------------------------

def _xi_raw(x: mpc, prec: int):
    with workprec(prec):
        # Xi(x) = Xi(1-x) pushes evaluation away from the trivial-zero /
        # Gamma-pole cancellations on the negative axis
        if mp.re(x) < -1:
            x = 1 - x
        # x Gamma(x/2) = 2 Gamma(x/2 + 1) removes the spurious pole at 0
        p, perr = _p_entire(x, prec)
        pref = 2 * mpmath.power(mpmath.pi, -x / 2) * mpmath.gamma(x / 2 + 1)
        val = pref * p
        err = abs(pref) * perr + abs(val) * mpf(2) ** (-prec + 6)
        return val, err


def xi(x, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Completed zeta function, entire, Xi(0) = Xi(1) = 1."""
    ctx = ctx or default_context()
    with ctx.workprec(10):
        xx = to_mpc(x)
    val, err = _xi_raw(xx, ctx.bits + 24)
    return ComplexMP(val, err, ctx.bits)


def _xi_log_deriv_raw(x: mpc, prec: int):
    with workprec(prec):
        # reflection takes care of the removable 1/x + psi(x/2)/2 pole pair
        if abs(x) < mpf(1) / 4:
            v, e = _xi_log_deriv_raw(1 - x, prec)
            return -v, e
        pp, perr = _pp_log_deriv(x, prec)
        val = (1 / x - mpmath.log(mpmath.pi) / 2
               + mpmath.psi(0, x / 2) / 2 + pp)
        return val, perr + abs(val) * mpf(2) ** (-prec + 6)


def xi_log_deriv(x, ctx: PrecisionContext | None = None) -> ComplexMP:
    """Xi'/Xi(x) = 1/x + 1/(x-1) - log(pi)/2 + psi(x/2)/2 + zeta'/zeta(x)."""
    ctx = ctx or default_context()
    with ctx.workprec(10):
        xx = to_mpc(x)
    val, err = _xi_log_deriv_raw(xx, ctx.bits + 24)
    return ComplexMP(val, err, ctx.bits)


# ---------------------------------------------------------------------------
# High-order log-derivative series by circle quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogDerivSeries:
    """f^(n)(basepoint) for n = 1..N, f the tagged log function.

    ``values[n-1]`` holds f^(n)(b).  The radius is the quadrature circle
    actually used; it is always strictly inside the singularity-free disk
    of the tagged function.
    """

    function_tag: str
    basepoint: mpf
    radius: mpf
    values: tuple
    errors: tuple
    bits: int
    nodes: int

    @property
    def order_count(self) -> int:
        return len(self.values)

    def derivative(self, n: int) -> RealMP:
        """f^(n)(b) with its quadrature error estimate."""
        if not 1 <= n <= len(self.values):
            raise DomainError(f"order {n} outside computed range")
        return RealMP(self.values[n - 1], self.errors[n - 1], self.bits)

    def taylor_coefficient(self, n: int) -> mpf:
        """f^(n)(b) / n! (n >= 1)."""
        with workprec(self.bits + 8):
            return self.values[n - 1] / mpmath.factorial(n)


def _nearest_singularity(tag: str, b: mpf) -> mpf:
    if tag == "log_xi":
        return mpmath.sqrt((b - mpf(1) / 2) ** 2 + mpf(FIRST_ZERO_ORDINATE) ** 2)
    if tag in ("log_zeta", "log_abs_zeta"):
        cands = [abs(b - 1)]
        k = 2
        while k <= abs(b) + 4:
            cands.append(abs(b + k))
            k += 2
        cands.append(mpmath.sqrt((b - mpf(1) / 2) ** 2
                                 + mpf(FIRST_ZERO_ORDINATE) ** 2))
        return min(cands)
    raise DomainError(f"unknown function tag {tag!r}")


def _default_radius(tag: str, b: mpf) -> mpf:
    dist = _nearest_singularity(tag, b)
    if tag == "log_xi":
        return min(mpf("4.75"), mpf("0.9") * dist)
    return mpf("0.8") * dist


def _safe_radius(b: mpf, r: mpf) -> mpf:
    # keep real-axis nodes away from the pole, the origin and trivial zeros
    for _ in range(8):
        bad = False
        for node in (b - r, b + r):
            d = min(abs(node - 1), abs(node),
                    min(abs(node + 2 * k) for k in range(1, 12)))
            if d < mpf(1) / 64:
                bad = True
        if not bad:
            return r
        r = r * (1 - mpf(1) / 97)
    return r


_SERIES_CACHE: dict = {}


def log_deriv_series(tag: str, b, n_orders: int,
                     ctx: PrecisionContext | None = None,
                     radius=None) -> LogDerivSeries:
    """Derivatives 1..n_orders of log Xi / log zeta / log|zeta| at real b.

    Cauchy coefficients of the single-valued logarithmic derivative on a
    circle, trapezoid quadrature with node doubling until two successive
    node counts agree to the context's working digits.
    """
    ctx = ctx or default_context()
    if n_orders < 1:
        raise DomainError("need at least one derivative order")
    with ctx.workprec(10):
        b = to_mpf(b)

    prec = ctx.bits + 32
    with workprec(prec):
        dist = _nearest_singularity(tag, b)
        r = to_mpf(radius) if radius is not None else _default_radius(tag, b)
        if not r < dist:
            raise DomainError(
                f"radius {r} reaches the nearest {tag} singularity ({dist})")
        r = _safe_radius(b, r)

    key = (tag, b._mpf_, r._mpf_, ctx.bits)
    hit = _SERIES_CACHE.get(key)
    if hit is not None and hit.order_count >= n_orders:
        return hit

    if tag == "log_xi":
        f = lambda z: _xi_log_deriv_raw(z, prec)[0]
    else:
        f = lambda z: _pp_log_deriv(z, prec)[0] - 1 / (z - 1)

    coeffs, errs, nodes = taylor_coeffs_circle(
        f, b, r, n_orders - 1, prec, target_digits=ctx.digits + 2)

    with workprec(prec):
        values, errors = [], []
        fact = mpf(1)
        for n in range(1, n_orders + 1):
            fact *= max(1, n - 1)
            c = coeffs[n - 1]
            values.append(fact * c.real)
            errors.append(fact * (errs[n - 1] + abs(c.imag)))

    out = LogDerivSeries(function_tag=tag, basepoint=b, radius=r,
                         values=tuple(values), errors=tuple(errors),
                         bits=ctx.bits, nodes=nodes)
    _SERIES_CACHE[key] = out
    if len(_SERIES_CACHE) > 24:
        for k in list(_SERIES_CACHE)[:8]:
            if k != key:
                del _SERIES_CACHE[k]
    return out
