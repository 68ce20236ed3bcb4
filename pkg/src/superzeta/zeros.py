"""Riemann zeros: finding, ingestion, synthetic sets, and zero sums.

Zero finding brackets sign changes of the real-valued function
t -> Xi(1/2 + i t) on a grid finer than the local mean gap, then refines
each bracket at working precision with a bracket-preserving iteration.
A fast float64 scan (vectorized Euler-Maclaurin plus log-Gamma phase)
only accelerates the bracketing; every refined root is certified by
multiprecision sign evaluations of Xi itself, and the bracket count is
cross-checked against the smooth counting estimate.

Zero sums over a set carry an optional tail correction
integral(T_c..inf) (1/2pi) log(tau/2pi) f(tau) dtau with f the summand
profile; the tail's own magnitude is added to the error bound.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp, mpf, mpc, workprec
from scipy.optimize import brentq
from scipy.special import loggamma

from .precision import (
    ComplexMP,
    DomainError,
    PrecisionContext,
    RealMP,
    SuperzetaError,
    default_context,
    to_mpc,
    to_mpf,
)
from .xi import _xi_raw

__all__ = [
    "AsymptoticModel",
    "ZeroEntry",
    "ZeroSet",
    "MissedZeroError",
    "SymmetryError",
    "TailUnavailableError",
    "counting_estimate",
    "find_zeros",
    "load_zeros",
    "save_zeros",
    "make_zero_set",
    "plant_offline",
    "theta",
    "zero_sum",
]


class MissedZeroError(SuperzetaError):
    """Grid count and counting estimate disagree beyond repair."""


class SymmetryError(DomainError):
    """A zero file cannot be closed under the four-fold symmetry."""


class TailUnavailableError(DomainError):
    """Tail correction requested for a set without a certified height."""


# ---------------------------------------------------------------------------
# Density model and counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticModel:
    """Pole constants (R_-2, R_-1) of the second-kind family at 1/2.

    They drive both the tempered large-order predictor and the smooth
    counting of zero ordinates.  R_-2 must be positive.
    """

    r_minus2: mpf
    r_minus1: mpf

    def __post_init__(self):
        object.__setattr__(self, "r_minus2", to_mpf(self.r_minus2))
        object.__setattr__(self, "r_minus1", to_mpf(self.r_minus1))
        if not self.r_minus2 > 0:
            raise DomainError("R_-2 must be positive")

    @classmethod
    def riemann(cls, bits: int = 192) -> "AsymptoticModel":
        with workprec(bits):
            return cls(1 / (8 * mpmath.pi),
                       -mpmath.log(2 * mpmath.pi) / (4 * mpmath.pi))


def counting_estimate(t_height, model: AsymptoticModel) -> RealMP:
    """Smooth ordinate-counting value N(T) ~ 2T [2 R_-2 (log T - 1) + R_-1]."""
    with workprec(max(mp.prec, 64) + 16):
        t_height = to_mpf(t_height)
        if t_height <= 0:
            raise DomainError("counting height must be positive")
        val = 2 * t_height * (2 * model.r_minus2 * (mpmath.log(t_height) - 1)
                              + model.r_minus1)
        return RealMP(val, abs(val) * mpf(2) ** (-50), mp.prec)


# ---------------------------------------------------------------------------
# Zero entries and sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroEntry:
    """One representative of a symmetric quadruple {rho, 1-rho, conj pair}.

    beta is the canonical real part (>= 1/2), gamma_ord > 0 the ordinate.
    For beta = 1/2 the quadruple collapses to a conjugate pair.
    """

    beta: mpf
    gamma_ord: mpf
    multiplicity: int = 1
    provenance: str = "synthetic"

    def __post_init__(self):
        object.__setattr__(self, "beta", to_mpf(self.beta))
        object.__setattr__(self, "gamma_ord", to_mpf(self.gamma_ord))
        if not self.gamma_ord > 0:
            raise DomainError("zero ordinate must be positive")
        if not mpf("0.5") <= self.beta < 1:
            raise DomainError("canonical beta must lie in [1/2, 1)")
        if self.multiplicity < 1:
            raise DomainError("multiplicity must be >= 1")

    @property
    def is_central(self) -> bool:
        return self.beta == mpf("0.5")

    def tau_members(self):
        """tau values with positive real part: one for a central pair,
        the conjugate pair (gamma -/+ i(beta-1/2)) for a planted quadruple."""
        if self.is_central:
            return (self.gamma_ord,)
        delta = self.beta - mpf("0.5")
        return (mpc(self.gamma_ord, -delta), mpc(self.gamma_ord, delta))

    def tau_growing(self):
        """The arg tau > 0 member driving oscillatory growth (None if central)."""
        if self.is_central:
            return None
        return mpc(self.gamma_ord, self.beta - mpf("0.5"))


@dataclass(frozen=True)
class ZeroSet:
    """Ordered multiset of zero quadruples with a tail-density model.

    complete_below is the certification height T_c: every zero with
    ordinate <= T_c is present.  Zero means unknown (no tail corrections).
    """

    entries: tuple
    complete_below: mpf
    tail_model: AsymptoticModel

    def __post_init__(self):
        object.__setattr__(self, "complete_below", to_mpf(self.complete_below))
        ords = [e.gamma_ord for e in self.entries]
        if any(b > a for a, b in zip(ords[1:], ords)):
            raise DomainError("entries must be sorted by ordinate")
        seen = set()
        for e in self.entries:
            key = (e.beta._mpf_, e.gamma_ord._mpf_)
            if key in seen:
                raise DomainError(f"duplicate zero entry {key}")
            seen.add(key)

    def __len__(self):
        return len(self.entries)

    @property
    def is_critical(self) -> bool:
        return all(e.is_central for e in self.entries)

    def planted(self):
        return tuple(e for e in self.entries if not e.is_central)

    def count_below(self, t_height) -> int:
        t_height = to_mpf(t_height)
        return sum(e.multiplicity for e in self.entries
                   if e.gamma_ord <= t_height)

    def without(self, entry: ZeroEntry) -> "ZeroSet":
        kept = tuple(e for e in self.entries if e is not entry)
        if len(kept) == len(self.entries):
            raise DomainError("entry not in set")
        return replace(self, entries=kept)


def make_zero_set(zeros, complete_below=0, model: AsymptoticModel | None = None,
                  provenance: str = "synthetic", bits: int = 192) -> ZeroSet:
    """Build a ZeroSet from (beta, gamma[, mult]) items, symmetrizing.

    beta and 1 - beta denote the same quadruple and are merged; a merge
    with conflicting multiplicities raises :class:`SymmetryError`.
    """
    model = model or AsymptoticModel.riemann(bits)
    with workprec(bits):
        canonical = {}
        order = []
        for item in zeros:
            beta, gamma = to_mpf(item[0]), to_mpf(item[1])
            mult = int(item[2]) if len(item) > 2 else 1
            if beta < mpf("0.5"):
                beta = 1 - beta
            if not mpf("0.5") <= beta < 1:
                raise DomainError(f"beta {beta} outside the critical strip")
            key = (beta._mpf_, gamma._mpf_)
            if key in canonical:
                if canonical[key][2] != mult:
                    raise SymmetryError(
                        f"conflicting multiplicities for zero at {gamma}")
                continue
            canonical[key] = (beta, gamma, mult)
            order.append(key)
        entries = [ZeroEntry(beta=v[0], gamma_ord=v[1], multiplicity=v[2],
                             provenance=provenance)
                   for v in canonical.values()]
        entries.sort(key=lambda e: (e.gamma_ord, e.beta))
        return ZeroSet(entries=tuple(entries),
                       complete_below=to_mpf(complete_below),
                       tail_model=model)


def plant_offline(base: ZeroSet, k: int, beta_new) -> ZeroSet:
    """Replace the k-th (1-based) on-line entry by an off-line quadruple.

    beta_new = 1/2 is the identity; otherwise beta_new must lie in (1/2, 1).
    """
    if not 1 <= k <= len(base.entries):
        raise DomainError(f"zero index {k} out of range")
    entry = base.entries[k - 1]
    if not entry.is_central:
        raise DomainError("can only displace an on-line (beta = 1/2) entry")
    with workprec(192):
        beta_new = to_mpf(beta_new)
    if beta_new == mpf("0.5"):
        return base
    if not mpf("0.5") < beta_new < 1:
        raise DomainError("planted beta must lie in (1/2, 1)")
    moved = ZeroEntry(beta=beta_new, gamma_ord=entry.gamma_ord,
                      multiplicity=entry.multiplicity, provenance="synthetic")
    entries = list(base.entries)
    entries[k - 1] = moved
    return replace(base, entries=tuple(entries))


# ---------------------------------------------------------------------------
# File formats
# ---------------------------------------------------------------------------

def load_zeros(path, fmt: str = "ordinates_text", bits: int = 192) -> ZeroSet:
    """Read a ZeroSet from a text ordinate list or a zeroset JSON file."""
    if fmt == "ordinates_text":
        complete_below = 0
        zeros = []
        with open(path, "r", encoding="utf-8") as fh, workprec(bits):
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    body = line[1:].strip()
                    if body.lower().startswith("complete_below"):
                        complete_below = mpf(body.split(":", 1)[1].strip())
                    continue
                try:
                    zeros.append((mpf("0.5"), mpf(line)))
                except ValueError as exc:
                    raise DomainError(
                        f"{path}:{lineno}: unreadable ordinate {line!r}") from exc
        return make_zero_set(zeros, complete_below=complete_below,
                             provenance="file", bits=bits)
    if fmt == "zeroset_json":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"{path}: invalid JSON ({exc})") from exc
        with workprec(bits):
            zeros = [(mpf(str(z.get("beta", 0.5))), mpf(str(z["gamma"])),
                      int(z.get("mult", 1)))
                     for z in doc.get("zeros", [])]
            complete_below = mpf(str(doc.get("complete_below", 0)))
        return make_zero_set(zeros, complete_below=complete_below,
                             provenance="file", bits=bits)
    raise DomainError(f"unknown zero file format {fmt!r}")


def save_zeros(zset: ZeroSet, path, fmt: str = "ordinates_text",
               digits: int = 20) -> None:
    if fmt == "ordinates_text":
        if not zset.is_critical:
            raise DomainError("text format stores on-line ordinates only")
        with open(path, "w", encoding="utf-8") as fh:
            if zset.complete_below > 0:
                fh.write(f"# complete_below: "
                         f"{mpmath.nstr(zset.complete_below, digits)}\n")
            for e in zset.entries:
                for _ in range(e.multiplicity):
                    fh.write(mpmath.nstr(e.gamma_ord, digits) + "\n")
        return
    if fmt == "zeroset_json":
        doc = {
            "complete_below": float(zset.complete_below),
            "zeros": [{"beta": float(e.beta),
                       "gamma": mpmath.nstr(e.gamma_ord, digits),
                       "mult": e.multiplicity} for e in zset.entries],
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=1)
        return
    raise DomainError(f"unknown zero file format {fmt!r}")


# ---------------------------------------------------------------------------
# Zero finding
# ---------------------------------------------------------------------------

_B2J_FACS = None  # B_2j/(2j)! as float64, filled lazily


def _b2j_facs(j_max=14):
    global _B2J_FACS
    if _B2J_FACS is None:
        with workprec(80):
            _B2J_FACS = [float(mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j))
                         for j in range(1, j_max + 1)]
    return _B2J_FACS


def _scan_sign_values(ts: np.ndarray) -> np.ndarray:
    """Float64 values sharing the sign of Xi(1/2 + i t) on the grid.

    Euler-Maclaurin main sum for zeta plus the phase of the completing
    prefactor; the positive modulus of the prefactor is dropped.
    """
    out = np.empty_like(ts)
    facs = _b2j_facs()
    chunk = 192
    for lo in range(0, len(ts), chunk):
        t = ts[lo:lo + chunk]
        n_direct = max(24, int(0.56 * t[-1]) + 12)
        s = 0.5 + 1j * t
        k = np.arange(1, n_direct, dtype=np.float64)
        zeta = (np.exp(-s[:, None] * np.log(k)[None, :])).sum(axis=1)
        u = float(n_direct)
        ln_u = np.log(u)
        zeta += np.exp((1 - s) * ln_u) / (s - 1)
        zeta += 0.5 * np.exp(-s * ln_u)
        poch = s.copy()
        upow = np.exp(-(s + 1) * ln_u)
        for j, fac in enumerate(facs, start=1):
            if j > 1:
                poch = poch * (s + 2 * j - 3) * (s + 2 * j - 2)
                upow = upow / (u * u)
            zeta += fac * poch * upow
        x = 0.5 + 1j * t
        phase = (np.imag(np.log(x) + np.log(x - 1)) - (t / 2) * np.log(np.pi)
                 + np.imag(loggamma(x / 2)))
        out[lo:lo + chunk] = np.real(np.exp(1j * phase) * zeta)
    return out


def _scan_point(t: float) -> float:
    return float(_scan_sign_values(np.array([t], dtype=np.float64))[0])


def _grid(t_lo: float, t_hi: float, factor: float) -> np.ndarray:
    ts = [t_lo]
    t = t_lo
    while t < t_hi:
        gap = 2 * np.pi / max(np.log(max(t, 8.0) / (2 * np.pi)), 0.8)
        t += gap / factor
        ts.append(t)
    return np.asarray(ts)


def _height_for_count(k_count: int, model: AsymptoticModel) -> float:
    """Invert the smooth counting function, with headroom."""
    target = k_count + 4
    t = max(20.0, 2 * np.pi * target / max(np.log(max(target, 6)), 1.0))
    r2, r1 = float(model.r_minus2), float(model.r_minus1)
    for _ in range(60):
        est = 2 * t * (2 * r2 * (np.log(t) - 1) + r1) + 0.875
        dens = 4 * r2 * np.log(t) + 2 * r1
        step = (target - est) / max(dens, 1e-9)
        t += step
        if abs(step) < 1e-9 * t:
            break
    return t * 1.02 + 10


def _xi_sign_value(t: mpf, prec: int) -> mpf:
    v, _err = _xi_raw(mpc(mpf("0.5"), t), prec)
    return v.real


def _refine_bracket(t_lo: float, t_hi: float, ctx: PrecisionContext) -> mpf:
    """Bracket-preserving refinement of one sign change to ctx precision."""
    prec = ctx.bits + 24
    with workprec(prec):
        # cheap float64 stage first
        try:
            mid = brentq(_scan_point, t_lo, t_hi, xtol=1e-12, rtol=1e-14)
            half = max(4e-12, 1e-13 * abs(mid))
            a, b = mpf(mid) - half, mpf(mid) + half
        except ValueError:
            a, b = mpf(t_lo), mpf(t_hi)
        fa, fb = _xi_sign_value(a, prec), _xi_sign_value(b, prec)
        widen = 0
        while mpmath.sign(fa) == mpmath.sign(fb):
            # float stage overshot; fall back to the full bracket
            a, b = mpf(t_lo), mpf(t_hi)
            fa, fb = _xi_sign_value(a, prec), _xi_sign_value(b, prec)
            widen += 1
            if widen > 1:
                raise MissedZeroError(
                    f"sign evaluation indeterminate in [{t_lo}, {t_hi}]")
        tol = max(abs(b), mpf(1)) * mpf(2) ** (-ctx.bits)
        side = 0
        while b - a > tol:
            # Illinois step; guaranteed to keep the bracket
            m = (a * fb - b * fa) / (fb - fa)
            if not a < m < b:
                m = (a + b) / 2
            fm = _xi_sign_value(m, prec)
            if fm == 0:
                return m
            if mpmath.sign(fm) == mpmath.sign(fa):
                a, fa = m, fm
                if side == -1:
                    fb /= 2
                side = -1
            else:
                b, fb = m, fm
                if side == 1:
                    fa /= 2
                side = 1
        return (a + b) / 2


def find_zeros(k_count: int, ctx: PrecisionContext | None = None) -> ZeroSet:
    """First k_count critical-line ordinates by sign-change bracketing.

    The bracket count is cross-checked window by window against the
    smooth counting estimate (offset by its constant 7/8 term); windows
    that disagree by two or more are rescanned on a finer grid before
    giving up.
    """
    ctx = ctx or default_context()
    if k_count < 1:
        raise DomainError("need k_count >= 1")
    model = AsymptoticModel.riemann(ctx.bits)
    t_hi = _height_for_count(k_count, model)
    r2, r1 = float(model.r_minus2), float(model.r_minus1)

    def smooth(t):
        return 2 * t * (2 * r2 * (np.log(t) - 1) + r1) + 0.875

    brackets = []
    t_lo = 3.0
    factor = 6.0
    while True:
        ts = _grid(t_lo, t_hi, factor)
        vals = _scan_sign_values(ts)
        idx = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
        brackets = [(float(ts[i]), float(ts[i + 1])) for i in idx]
        # windowed counting check against the smooth estimate
        ok = True
        for t_chk in np.linspace(40.0, t_hi, 24):
            found = sum(1 for a, b in brackets if b <= t_chk)
            if abs(found - smooth(t_chk)) >= 2.5:
                ok = False
                break
        if ok and len(brackets) >= k_count:
            break
        factor *= 2
        if factor > 100:
            raise MissedZeroError(
                "grid count disagrees with the counting estimate; "
                f"found {len(brackets)} brackets below {t_hi}")

    ordinates = [_refine_bracket(a, b, ctx) for a, b in brackets[:k_count]]
    with workprec(ctx.bits):
        entries = tuple(ZeroEntry(beta=mpf("0.5"), gamma_ord=g,
                                  provenance="found")
                        for g in ordinates)
        return ZeroSet(entries=entries, complete_below=ordinates[-1],
                       tail_model=model)


# ---------------------------------------------------------------------------
# Preimage angle of the central conformal map
# ---------------------------------------------------------------------------

def theta(entry: ZeroEntry, ctx: PrecisionContext | None = None) -> ComplexMP:
    """theta with sin(theta/2) = 1/(2 tau), branch Re theta in [0, pi].

    For an on-line entry tau is real and theta is real; for a planted
    quadruple the arg tau > 0 member is used.
    """
    ctx = ctx or default_context()
    with ctx.workprec(16):
        tau = entry.tau_growing() if not entry.is_central else entry.gamma_ord
        val = 2 * mpmath.asin(1 / (2 * to_mpc(tau)))
        return ComplexMP(val, abs(val) * mpf(2) ** (-ctx.bits + 4), ctx.bits)


# ---------------------------------------------------------------------------
# Zero sums with tail corrections
# ---------------------------------------------------------------------------

def _require(cond, msg):
    if not cond:
        raise DomainError(msg)


def _summand(kind: str, entry: ZeroEntry, params: dict, prec: int):
    """Contribution of one entry (full pair/quadruple), real for real input."""
    taus = entry.tau_members()
    acc = mpc(0)
    if kind == "ZA":
        s, t = params["s"], params["t"]
        for tau in taus:
            acc += (t - mpc(0, 1) * tau) ** (-s) + (t + mpc(0, 1) * tau) ** (-s)
    elif kind == "ZB":
        sg, t = params["sigma"], params["t"]
        for tau in taus:
            acc += (tau * tau + t * t) ** (-sg)
    elif kind == "ZC":
        s, tau0 = params["s"], params["tau"]
        for tau in taus:
            acc += (tau + tau0) ** (-s)
    elif kind == "lambda":
        n = params["n"]
        for tau in taus:
            r = (tau + mpc(0, "0.5")) / (tau - mpc(0, "0.5"))
            rn = r ** n
            acc += (1 - rn) + (1 - 1 / rn)
    elif kind == "lambda0":
        n = params["n"]
        for tau in taus:
            th = 2 * mpmath.asin(1 / (2 * to_mpc(tau)))
            acc += 2 - mpmath.exp(mpc(0, n) * th) - mpmath.exp(mpc(0, -n) * th)
    else:
        raise DomainError(f"unknown zero-sum kind {kind!r}")
    return entry.multiplicity * acc


def _profile(kind: str, params: dict):
    """Critical-line summand as a function of a real ordinate (tail use)."""
    if kind == "ZA":
        s, t = params["s"], params["t"]
        return lambda g: ((t - mpc(0, 1) * g) ** (-s)
                          + (t + mpc(0, 1) * g) ** (-s))
    if kind == "ZB":
        sg, t = params["sigma"], params["t"]
        return lambda g: (g * g + t * t) ** (-sg)
    if kind == "ZC":
        s, tau0 = params["s"], params["tau"]
        return lambda g: (g + tau0) ** (-s)
    if kind == "lambda":
        n = params["n"]
        return lambda g: 2 - 2 * mpmath.cos(2 * n * mpmath.atan(1 / (2 * g)))
    if kind == "lambda0":
        n = params["n"]
        return lambda g: 2 - 2 * mpmath.cos(2 * n * mpmath.asin(1 / (2 * g)))
    raise DomainError(f"unknown zero-sum kind {kind!r}")


def zero_sum(kind: str, zset: ZeroSet, tail: bool = False,
             ctx: PrecisionContext | None = None, **params) -> ComplexMP:
    """Truncated sum over the set, optionally with a density-integral tail.

    Kinds and their parameters: "ZA" (s, t), "ZB" (sigma, t), "ZC"
    (s, tau), "lambda" (n), "lambda0" (n).  Direct sums demand the
    stated convergence region (Re s > 1; Re sigma > 1/2).
    """
    ctx = ctx or default_context()
    prec = ctx.bits + 16
    with workprec(prec):
        params = {k: (to_mpc(v) if k in ("s", "sigma") else
                      (int(v) if k == "n" else to_mpf(v)))
                  for k, v in params.items()}
        if kind == "ZA":
            _require(mp.re(params["s"]) > 1, "ZA series needs Re s > 1")
        elif kind == "ZB":
            _require(mp.re(params["sigma"]) > mpf("0.5"),
                     "ZB series needs Re sigma > 1/2")
        elif kind == "ZC":
            _require(mp.re(params["s"]) > 1, "ZC series needs Re s > 1")
        elif kind in ("lambda", "lambda0"):
            _require(params["n"] >= 1, "need n >= 1")
        else:
            raise DomainError(f"unknown zero-sum kind {kind!r}")

        acc = mpc(0)
        for entry in zset.entries:
            acc += _summand(kind, entry, params, prec)
        err = (len(zset.entries) + 4) * abs(acc) * mpf(2) ** (-prec)

        if tail:
            t_c = zset.complete_below
            if not t_c > 0:
                raise TailUnavailableError(
                    "tail correction needs complete_below > 0")
            prof = _profile(kind, params)
            dens = lambda g: mpmath.log(g / (2 * mpmath.pi)) / (2 * mpmath.pi)
            tail_val, quad_err = mpmath.quad(
                lambda g: dens(g) * prof(g), [t_c, mpmath.inf],
                error=True, maxdegree=7)
            acc += tail_val
            err += abs(tail_val) + abs(quad_err)
        return ComplexMP(acc, err, ctx.bits)
