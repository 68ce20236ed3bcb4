"""Working-precision management and error-carrying multiprecision values.

Every numeric operation in the package threads a :class:`PrecisionContext`
through to the mpmath layer.  Results come back wrapped in :class:`RealMP`
or :class:`ComplexMP`, which pair an mpmath value with a conservatively
propagated absolute error bound.  The bounds are forward estimates, not
certified enclosures.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from mpmath import mp, mpf, mpc, workprec

__all__ = [
    "PrecisionContext",
    "RealMP",
    "ComplexMP",
    "SuperzetaError",
    "DomainError",
    "PoleError",
    "ConvergenceError",
    "EscalationError",
    "default_context",
    "to_mpf",
    "to_mpc",
    "agree_digits",
]

LN2_OVER_LN10 = 0.30102999566398119521  # decimal digits per bit


class SuperzetaError(Exception):
    """Base class for numeric failures raised by this package."""


class DomainError(SuperzetaError, ValueError):
    """An argument lies outside an operation's domain."""


class PoleError(DomainError):
    """Evaluation was requested exactly at a pole."""


class ConvergenceError(SuperzetaError):
    """A truncation scheme could not reach the requested accuracy."""


class EscalationError(ConvergenceError):
    """Precision escalation hit the configured cap without agreement."""


@dataclass(frozen=True)
class PrecisionContext:
    """Binary working precision plus the escalation policy.

    ``policy`` is either ``"fixed"`` (run once at ``bits``) or
    ``"double-and-compare"``: a result is accepted only when runs at
    ``bits`` and ``bits + 64`` agree to ``target_digits`` decimal digits,
    doubling ``bits`` otherwise until ``max_bits`` is exceeded.
    """

    bits: int = 192
    policy: str = "fixed"
    target_digits: int | None = None
    max_bits: int = 1 << 16

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError("PrecisionContext.bits must be >= 64")
        if self.max_bits < self.bits:
            raise ValueError("PrecisionContext.max_bits must be >= bits")
        if self.policy not in ("fixed", "double-and-compare"):
            raise ValueError(f"unknown escalation policy {self.policy!r}")

    @property
    def digits(self) -> int:
        """Decimal digits nominally carried by ``bits``."""
        return max(1, int(self.bits * LN2_OVER_LN10) - 1)

    @property
    def goal_digits(self) -> int:
        """Digits the escalation loop must reproduce between runs."""
        if self.target_digits is not None:
            return self.target_digits
        return max(6, self.digits - 6)

    def with_bits(self, bits: int) -> "PrecisionContext":
        return PrecisionContext(bits=max(64, bits), policy=self.policy,
                                target_digits=self.target_digits,
                                max_bits=max(self.max_bits, bits))

    def workprec(self, pad: int = 0):
        """mpmath working-precision context manager at ``bits + pad``."""
        return workprec(self.bits + pad)

    def escalate(self, fn: Callable[[int], "mpf | mpc"],
                 target_digits: int | None = None):
        """Run ``fn(bits)`` under the escalation policy.

        Returns ``(value, error, bits_used)``.  With the fixed policy the
        error is one ulp of the result; with double-and-compare it is the
        observed difference between the two runs (plus an ulp).
        """
        target = target_digits if target_digits is not None else self.goal_digits
        if self.policy == "fixed":
            v = fn(self.bits)
            return v, _ulp(v, self.bits), self.bits
        bits = self.bits
        while True:
            v1 = fn(bits)
            v2 = fn(bits + 64)
            if agree_digits(v1, v2) >= target:
                err = abs(to_mpc(v1) - to_mpc(v2)) + _ulp(v2, bits + 64)
                return v2, err, bits
            bits *= 2
            if bits > self.max_bits:
                raise EscalationError(
                    f"no {target}-digit agreement below max_bits={self.max_bits}")


def default_context(bits: int | None = None, **kw) -> PrecisionContext:
    """Context at ``bits``, honoring the SUPERZETA_PREC_BITS override."""
    if bits is None:
        env = os.environ.get("SUPERZETA_PREC_BITS")
        bits = int(env) if env else 192
    return PrecisionContext(bits=bits, **kw)


def _ulp(v, bits: int) -> mpf:
    m = abs(to_mpc(v))
    scale = m if m > 0 else mpf(1)
    return scale * mpf(2) ** (-bits + 2)


def agree_digits(a, b) -> float:
    """Decimal digits to which two mp values agree (absolute/relative mix)."""
    a, b = to_mpc(a), to_mpc(b)
    diff = abs(a - b)
    if diff == 0:
        return mp.inf
    scale = max(abs(a), abs(b), mpf(1))
    import math
    return -math.log10(float(diff / scale))


Number = Union[int, float, Fraction, mpf, mpc, "RealMP", "ComplexMP"]


_FZERO = (0, 0, 0, 0)  # libmp zero mantissa tuple


def to_mpf(x) -> mpf:
    """Conversion to mpf; existing mpf values pass through unrounded."""
    if isinstance(x, RealMP):
        return x.value
    if hasattr(x, "_mpf_"):
        return x
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def to_mpc(x) -> mpc:
    if isinstance(x, RealMP):
        x = x.value
    elif isinstance(x, ComplexMP):
        return x.value
    if hasattr(x, "_mpc_"):
        return x
    if hasattr(x, "_mpf_"):
        return mp.make_mpc((x._mpf_, _FZERO))
    if isinstance(x, Fraction):
        return mp.make_mpc(((mpf(x.numerator) / x.denominator)._mpf_, _FZERO))
    return mpc(x)


def _err_of(x) -> mpf:
    if isinstance(x, (RealMP, ComplexMP)):
        return x.error
    return mpf(0)


@dataclass(frozen=True)
class RealMP:
    """Arbitrary-precision real with an absolute error bound.

    The bound is finite by construction and combined conservatively by the
    arithmetic below (first order in the errors, plus an ulp per operation).
    """

    value: mpf
    error: mpf = field(default_factory=lambda: mpf(0))
    bits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", to_mpf(self.value))
        object.__setattr__(self, "error", abs(to_mpf(self.error)))
        if self.bits == 0:
            object.__setattr__(self, "bits", mp.prec)
        if not mp.isfinite(self.error):
            raise ValueError("error bound must be finite")

    # -- arithmetic with conservative bound combination --------------------
    def _wrap(self, value, error):
        return RealMP(value, error + _ulp(value, self.bits), self.bits)

    def __add__(self, other):
        with workprec(self.bits + 8):
            return self._wrap(self.value + to_mpf(other),
                              self.error + _err_of(other))

    __radd__ = __add__

    def __neg__(self):
        with workprec(self.bits + 8):
            return RealMP(-self.value, self.error, self.bits)

    def __sub__(self, other):
        with workprec(self.bits + 8):
            return self._wrap(self.value - to_mpf(other),
                              self.error + _err_of(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        with workprec(self.bits + 8):
            ov, oe = to_mpf(other), _err_of(other)
            err = abs(self.value) * oe + abs(ov) * self.error + self.error * oe
            return self._wrap(self.value * ov, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        with workprec(self.bits + 8):
            ov, oe = to_mpf(other), _err_of(other)
            q = self.value / ov
            err = (self.error + abs(q) * oe) / abs(ov)
            return self._wrap(q, err)

    def __abs__(self):
        with workprec(self.bits + 8):
            return RealMP(abs(self.value), self.error, self.bits)

    def __float__(self):
        return float(self.value)

    def agrees_with(self, other, digits: int) -> bool:
        return agree_digits(self.value, to_mpf(other)) >= digits


@dataclass(frozen=True)
class ComplexMP:
    """Arbitrary-precision complex value with one absolute error bound."""

    value: mpc
    error: mpf = field(default_factory=lambda: mpf(0))
    bits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "value", to_mpc(self.value))
        object.__setattr__(self, "error", abs(to_mpf(self.error)))
        if self.bits == 0:
            object.__setattr__(self, "bits", mp.prec)
        if not mp.isfinite(self.error):
            raise ValueError("error bound must be finite")

    def _wrap(self, value, error):
        return ComplexMP(value, error + _ulp(value, self.bits), self.bits)

    def __add__(self, other):
        with workprec(self.bits + 8):
            return self._wrap(self.value + to_mpc(other),
                              self.error + _err_of(other))

    __radd__ = __add__

    def __neg__(self):
        with workprec(self.bits + 8):
            return ComplexMP(-self.value, self.error, self.bits)

    def __sub__(self, other):
        with workprec(self.bits + 8):
            return self._wrap(self.value - to_mpc(other),
                              self.error + _err_of(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        with workprec(self.bits + 8):
            ov, oe = to_mpc(other), _err_of(other)
            err = abs(self.value) * oe + abs(ov) * self.error + self.error * oe
            return self._wrap(self.value * ov, err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        with workprec(self.bits + 8):
            ov, oe = to_mpc(other), _err_of(other)
            q = self.value / ov
            err = (self.error + abs(q) * oe) / abs(ov)
            return self._wrap(q, err)

    @property
    def real(self) -> RealMP:
        return RealMP(self.value.real, self.error, self.bits)

    @property
    def imag(self) -> RealMP:
        return RealMP(self.value.imag, self.error, self.bits)

    def __complex__(self):
        return complex(self.value)

    def agrees_with(self, other, digits: int) -> bool:
        return agree_digits(self.value, to_mpc(other)) >= digits
