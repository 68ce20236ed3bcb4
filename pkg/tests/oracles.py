"""Independent oracles used to derive expected test values.

Everything here is deliberately written against definitions (generating
functions, direct series with tail bounds, alternating series), staying
independent of the library code paths it is used to check.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
from mpmath import mpf, mpc, workprec


def series_inverse(a, n):
    """1 / (sum a_k x^k) truncated at order n, exact Fractions, a[0] != 0."""
    out = [Fraction(0)] * (n + 1)
    out[0] = 1 / Fraction(a[0])
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a):
                acc += Fraction(a[j]) * out[k - j]
        out[k] = -acc * out[0]
    return out


def series_mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, ai in enumerate(a[: n + 1]):
        if ai == 0:
            continue
        for j in range(0, n + 1 - i):
            if j < len(b):
                out[i + j] += ai * Fraction(b[j])
    return out


def bernoulli_poly_gf(n, w):
    """B_n(w) from the generating function x e^{wx} / (e^x - 1), exact."""
    w = Fraction(w)
    # e^x - 1 = sum_{k>=1} x^k / k!  ->  x / (e^x - 1) = 1 / sum x^k/(k+1)!
    denom = [Fraction(1, math.factorial(k + 1)) for k in range(n + 1)]
    base = series_inverse(denom, n)
    expw = [w ** k / math.factorial(k) for k in range(n + 1)]
    prod = series_mul(base, expw, n)
    return prod[n] * math.factorial(n)


def euler_number_gf(n):
    """E_n from 1 / cosh x, exact."""
    cosh = [Fraction(1, math.factorial(k)) if k % 2 == 0 else Fraction(0)
            for k in range(n + 1)]
    sech = series_inverse(cosh, n)
    return sech[n] * math.factorial(n)


def hurwitz_direct(s, w, terms=100000, prec=80):
    """Direct-series zeta(s, w) for real s > 1 with an integral tail bound.

    Returns (value, bound) where bound >= the truncation error.
    """
    with workprec(prec):
        s = mpf(s)
        w = mpf(w)
        acc = mpf(0)
        for k in range(terms):
            acc += (k + w) ** (-s)
        # integral comparison: sum_{k>=K} (k+w)^-s <= int_{K-1}^inf (x+w)^-s dx
        bound = (terms - 1 + w) ** (1 - s) / (s - 1)
        return acc, bound


def dirichlet_beta_alternating(s, terms=200000, prec=80):
    """beta(s) by its alternating series; error <= first omitted term."""
    with workprec(prec):
        s = mpf(s)
        acc = mpf(0)
        for k in range(terms):
            acc += (-1) ** k * mpf(2 * k + 1) ** (-s)
        bound = mpf(2 * terms + 1) ** (-s)
        return acc, bound


def lerch_series(u, y, terms=2000, prec=80):
    """F(u, y) = sum_{n>=1} u^n / n^y: direct head plus a Levin-summed tail.

    For |u| = 1 the raw partial sums converge too slowly, so the tail is
    fed to mpmath's sequence-acceleration summation; the series itself is
    still the defining one.
    """
    with workprec(prec):
        u = mpc(u)
        y = mpc(y)
        acc = mpc(0)
        up = mpc(1)
        for n in range(1, terms + 1):
            up *= u
            acc += up / mpf(n) ** y
        tail = mpmath.nsum(lambda m: u ** (terms + m) / mpf(terms + m) ** y,
                           [1, mpmath.inf], method="l")
        return acc + tail


def jonquiere_rhs(x, w, prec=80, terms=4000):
    """Right side of Jonquiere's relation for zeta(x, w), Re x < 0."""
    with workprec(prec):
        x = mpc(x)
        w = mpf(w)
        i = mpc(0, 1)
        pref = mpmath.gamma(1 - x) / ((2 * mpmath.pi) ** (1 - x) * i)
        f1 = lerch_series(mpmath.exp(2 * i * mpmath.pi * w), 1 - x,
                          terms=terms, prec=prec)
        f2 = lerch_series(mpmath.exp(-2 * i * mpmath.pi * w), 1 - x,
                          terms=terms, prec=prec)
        return pref * (mpmath.exp(i * mpmath.pi * x / 2) * f1
                       - mpmath.exp(-i * mpmath.pi * x / 2) * f2)
