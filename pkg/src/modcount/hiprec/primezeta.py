"""Prime zeta functions P(s) and P_{3,l}(s) by Moebius inversion of log zeta / log L.

All logarithms are taken as log1p of the "minus one" series, so the results
carry relative (not merely absolute) precision even for large s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..arith import mobius, primes_upto
from ..config import DEFAULT_DIGITS
from ..errors import UsageError
from .bigreal import BigReal, as_rational, memo, mpctx, to_mpf, validated
from .zeta import MIN_S, l_series_minus_one_mp, zeta_minus_one_mp


@dataclass(frozen=True)
class PrimeClass:
    """Primes p = l (mod k).  (1, 0) is every prime; (3, 0) is the single prime 3."""

    k: int
    l: int

    def __post_init__(self) -> None:
        if (self.k, self.l) not in _P_MIN:
            raise UsageError(f"unsupported prime class ({self.k},{self.l}); use 1,0 or 3,0 / 3,1 / 3,2")

    @property
    def p_min(self) -> int:
        return _P_MIN[(self.k, self.l)]

    @property
    def finite(self) -> bool:
        return (self.k, self.l) == (3, 0)

    def __contains__(self, p: int) -> bool:
        if self.k == 1:
            return True
        if self.l == 0:
            return p == 3
        return p % 3 == self.l

    def primes_upto(self, limit: int) -> list[int]:
        return [int(p) for p in primes_upto(limit) if int(p) in self]

    def next_prime_above(self, limit: int) -> int | None:
        if self.finite:
            return None if limit >= 3 else 3
        hi = max(2 * limit, 64)
        while True:
            for p in primes_upto(hi):
                if p > limit and int(p) in self:
                    return int(p)
            hi *= 2

    @classmethod
    def parse(cls, text: str | tuple | list | PrimeClass) -> PrimeClass:
        if isinstance(text, PrimeClass):
            return text
        if isinstance(text, str):
            parts = text.replace(" ", "").split(",")
        else:
            parts = list(text)
        try:
            k, l = (int(x) for x in parts)
        except (TypeError, ValueError):
            raise UsageError(f"prime class must look like 'k,l', got {text!r}") from None
        return cls(k, l)

    def __str__(self) -> str:
        return f"{self.k},{self.l}"


_P_MIN = {(1, 0): 2, (3, 0): 3, (3, 1): 7, (3, 2): 2}

ALL_PRIMES = PrimeClass(1, 0)
ONE_MOD_3 = PrimeClass(3, 1)
TWO_MOD_3 = PrimeClass(3, 2)
THREE = PrimeClass(3, 0)


def _check(s: Fraction) -> None:
    if s < MIN_S:
        raise UsageError(f"prime zeta is only supported for s >= 3/2 (got {s})")


def _log1p(x):
    return mpctx().log1p(x)


def _stop(term, acc, dps: int) -> bool:
    return abs(term) < abs(acc) * mpctx().mpf(10) ** (-(dps + 5))


def prime_zeta_mp(s, dps: int):
    """P(s) = sum_n mu(n)/n log zeta(ns)."""
    s = as_rational(s)
    _check(s)
    key = ("P", s, dps)
    cache = memo()
    if key in cache:
        return cache[key]
    ctx = mpctx()
    with ctx.workdps(dps + 5):
        acc = _log1p(zeta_minus_one_mp(s, dps + 5))
        n = 2
        while True:
            mu = mobius(n)
            if mu:
                term = _log1p(zeta_minus_one_mp(n * s, dps + 5)) / n
                if _stop(term, acc, dps):
                    break
                acc += mu * term
            n += 1
        cache[key] = +acc
    return cache[key]


def _extra_digits(s: Fraction, p_min: int) -> int:
    # the brackets below are differences of terms of size 2^-ns whose sum is ~ p_min^-ns
    return math.ceil(float(s) * math.log10(p_min / 2)) + 5


def prime_zeta_mod3_mp(cls: PrimeClass, s, dps: int):
    """P_{3,l}(s) by inversion over odd n of the log L_0 / L_1 identities."""
    s = as_rational(s)
    _check(s)
    cls = PrimeClass.parse(cls)
    if cls.k != 3:
        raise UsageError("prime_zeta_mod3 needs a class modulo 3")
    if cls.finite:
        return mpctx().mpf(3) ** (-to_mpf(s))
    key = ("P3", cls.l, s, dps)
    cache = memo()
    if key in cache:
        return cache[key]
    ctx = mpctx()
    work = dps + _extra_digits(s, cls.p_min)

    def bracket(t: Fraction):
        u0 = _log1p(l_series_minus_one_mp(0, t, work))
        u1 = _log1p(l_series_minus_one_mp(1, t, work))
        if cls.l == 2:
            return u0 - u1
        return u0 + u1 - _log1p(l_series_minus_one_mp(0, 2 * t, work))

    with ctx.workdps(work):
        acc = bracket(s)
        n = 3
        while True:
            mu = mobius(n)
            if mu:
                term = bracket(n * s) / n
                if _stop(term, acc, dps):
                    break
                acc += mu * term
            n += 2
        cache[key] = acc / 2
    return cache[key]


def prime_zeta_class_mp(cls: PrimeClass, s, dps: int):
    cls = PrimeClass.parse(cls)
    if cls.k == 1:
        return prime_zeta_mp(s, dps)
    return prime_zeta_mod3_mp(cls, s, dps)


def character_prime_sum_at_one_mp(dps: int):
    """sum_p chi_1(p)/p (conditionally convergent), from log L_1(1) = log(pi / 3 sqrt 3).

    log L_1(1) = sum_{m odd} [P_{3,1} - P_{3,2}](m)/m + sum_{m even} [P - 3^-m](m)/m,
    and every term except m = 1 is an absolutely convergent prime zeta value.
    """
    key = ("chi_at_one", dps)
    cache = memo()
    if key in cache:
        return cache[key]
    ctx = mpctx()
    with ctx.workdps(dps + 5):
        acc = ctx.log(ctx.pi / (3 * ctx.sqrt(3)))
        tol = ctx.mpf(10) ** (-(dps + 5))
        m = 2
        while True:
            if m % 2 == 0:
                term = (prime_zeta_mp(m, dps + 5) - ctx.mpf(3) ** (-m)) / m
            else:
                term = (prime_zeta_mod3_mp(ONE_MOD_3, m, dps + 5) - prime_zeta_mod3_mp(TWO_MOD_3, m, dps + 5)) / m
            if abs(term) < tol:
                break
            acc -= term
            m += 1
        cache[key] = +acc
    return cache[key]


def prime_zeta(s, digits: int = DEFAULT_DIGITS) -> BigReal:
    s = as_rational(s)
    _check(s)
    return validated(lambda dps: prime_zeta_mp(s, dps), digits, f"P({s})")


def prime_zeta_mod3(cls, s, digits: int = DEFAULT_DIGITS) -> BigReal:
    s = as_rational(s)
    _check(s)
    cls = PrimeClass.parse(cls)
    return validated(lambda dps: prime_zeta_mod3_mp(cls, s, dps), digits, f"P_{{{cls}}}({s})")


def prime_zeta_class(cls, s, digits: int = DEFAULT_DIGITS) -> BigReal:
    cls = PrimeClass.parse(cls)
    if cls.k == 1:
        return prime_zeta(s, digits)
    return prime_zeta_mod3(cls, s, digits)
