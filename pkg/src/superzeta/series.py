"""Dense truncated power-series arithmetic over mpmath numbers.

Series are plain lists ``a[0..N]`` with ``a[k]`` the coefficient of the
k-th power.  All routines run at the ambient mpmath precision; callers
wrap them in ``workprec`` blocks.
"""

from __future__ import annotations

from mpmath import mpf, mpc

__all__ = [
    "ps_mul",
    "ps_div",
    "ps_diff",
    "ps_integrate",
    "ps_log",
    "ps_eval",
    "ps_compose",
    "ps_shift_geometric_compose",
    "ps_revert_quadratic",
]


def _pad(a, n):
    if len(a) < n + 1:
        return list(a) + [mpf(0)] * (n + 1 - len(a))
    return list(a[: n + 1])


def ps_mul(a, b, n: int):
    """Product of two series, truncated at order ``n``."""
    a, b = _pad(a, n), _pad(b, n)
    out = [mpf(0)] * (n + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(0, n + 1 - i):
            out[i + j] += ai * b[j]
    return out


def ps_div(a, b, n: int):
    """Quotient series a/b truncated at order ``n``; requires b[0] != 0."""
    a, b = _pad(a, n), _pad(b, n)
    if b[0] == 0:
        raise ZeroDivisionError("series division needs nonzero constant term")
    out = [mpf(0)] * (n + 1)
    for k in range(n + 1):
        acc = a[k]
        for j in range(1, k + 1):
            acc -= b[j] * out[k - j]
        out[k] = acc / b[0]
    return out


def ps_diff(a):
    return [k * a[k] for k in range(1, len(a))]


def ps_integrate(a, n: int):
    """Antiderivative with zero constant term, truncated at order ``n``."""
    out = [mpf(0)] * (n + 1)
    for k in range(min(len(a), n)):
        out[k + 1] = a[k] / (k + 1)
    return out


def ps_log(a, n: int):
    """log of a series with a[0] near 1, via integrating a'/a.

    The returned constant term is log(a[0]); for inputs whose constant
    term is only 1 up to quadrature noise this folds the noise into the
    (usually unused) order-0 coefficient.
    """
    from mpmath import log as _mplog

    a = _pad(a, n)
    if a[0] == 0:
        raise ZeroDivisionError("series log needs nonzero constant term")
    da = ps_diff(a)
    out = ps_integrate(ps_div(da, a, n - 1) if n >= 1 else [], n)
    out[0] = _mplog(a[0])
    return out


def ps_eval(a, x):
    """Horner evaluation of the truncated series at ``x``."""
    acc = mpf(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def ps_compose(outer, inner, n: int):
    """outer(inner(y)) truncated at order ``n``; requires inner[0] == 0."""
    inner = _pad(inner, n)
    if inner[0] != 0:
        raise ValueError("composition needs inner series with zero constant term")
    acc = [mpf(0)] * (n + 1)
    for c in reversed(outer):
        acc = ps_mul(acc, inner, n)
        acc[0] += c
    return acc


def ps_shift_geometric_compose(coeffs, power: int, n: int):
    """Compose sum_{k>=1} coeffs[k] * u^k with u = y / (1-y)**power.

    Uses Horner steps where each multiplication by ``u`` is a coefficient
    shift followed by ``power`` cumulative-sum passes (multiplication by
    (1-y)^-1), so the whole composition costs O(len(coeffs) * power * n)
    additions.  ``coeffs`` is indexed from 0; coeffs[0] is ignored.
    """
    acc = [mpf(0)] * (n + 1)
    for k in range(len(coeffs) - 1, 0, -1):
        acc[0] += coeffs[k]
        # acc *= u:  shift by one power of y ...
        acc = [mpf(0)] + acc[:n]
        # ... then divide by (1-y)^power via prefix sums
        for _ in range(power):
            for i in range(1, n + 1):
                acc[i] = acc[i] + acc[i - 1]
    return acc


def ps_revert_quadratic(t2, n: int):
    """Series y(w) solving w = 2*t*y + y**2 with y(0)=0, t = t2 nonzero.

    Iterates y <- (w - y^2) / (2 t); each pass extends the correct order
    by one, so ``n`` passes suffice for truncation order ``n``.
    """
    two_t = 2 * t2
    y = [mpf(0)] * (n + 1)
    if n >= 1:
        y[1] = 1 / two_t
    for _ in range(n):
        y2 = ps_mul(y, y, n)
        new = [mpf(0)] * (n + 1)
        if n >= 1:
            new[1] = (1 - y2[1]) / two_t
        for k in range(2, n + 1):
            new[k] = -y2[k] / two_t
        y = new
    return y
