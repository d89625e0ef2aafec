"""Hurwitz and Riemann zeta by Euler-Maclaurin, and the two Dirichlet L-series mod 3."""

from __future__ import annotations

import math
import threading
from fractions import Fraction

from ..config import DEFAULT_DIGITS
from ..errors import UsageError
from .bigreal import BigReal, as_rational, memo, mpctx, to_mpf, validated

MIN_S = Fraction(3, 2)


_BERNOULLI = [Fraction(1)]
_BERNOULLI_LOCK = threading.Lock()


def bernoulli(m: int) -> Fraction:
    """B_m as an exact rational (B_1 = -1/2 convention), cached."""
    table = _BERNOULLI
    if m < len(table):
        return table[m]
    with _BERNOULLI_LOCK:
        while len(table) <= m:
            k = len(table)
            acc = Fraction(0)
            binom = 1
            for j in range(k):
                acc += binom * table[j]
                binom = binom * (k + 1 - j) // (j + 1)
            table.append(-acc / (k + 1))
    return table[m]


def _check_s(s: Fraction) -> None:
    if s <= 1:
        raise UsageError(f"s must exceed 1 (got {s}); values near the pole are out of scope")


def hurwitz_mp(s, a, dps: int):
    """zeta(s, a) = sum_{k>=0} (k+a)^-s for rational s > 1, a > 0, at ``dps`` digits.

    Relative precision holds for every a > 0, so zeta(s, 2) = zeta(s) - 1 is
    accurate even when s is large.
    """
    s = as_rational(s)
    a = as_rational(a)
    _check_s(s)
    if a <= 0:
        raise UsageError(f"Hurwitz parameter must be positive, got {a}")
    key = ("hurwitz", s, a, dps)
    cache = memo()
    if key in cache:
        return cache[key]
    ctx = mpctx()
    with ctx.workdps(dps + 10):
        s_ = to_mpf(s)
        a_ = to_mpf(a)
        M = max(20, math.ceil(0.6 * dps))
        K = _direct_terms(s, a, dps)
        if K <= M:
            cache[key] = value = ctx.fsum((k + a_) ** (-s_) for k in range(K))
            return value
        while True:
            value = _euler_maclaurin(ctx, s_, a_, M, dps)
            if value is not None:
                break
            M *= 2
    cache[key] = value
    return value


def _direct_terms(s: Fraction, a: Fraction, dps: int) -> int:
    """Terms K after which sum_{k>=K} (k+a)^-s <= (K+a)^-s + (K+a)^(1-s)/(s-1) is negligible.

    The total is at least a^-s, so it suffices that the bound sits 10^-(dps+10) below it.
    """
    sf = float(s)
    need = sf * math.log10(a) + dps + 11 - math.log10(min(1.0, sf - 1))
    return max(1, math.ceil(10 ** (need / (sf - 1)) - float(a)) + 1)


def _euler_maclaurin(ctx, s, a, M: int, dps: int):
    head = ctx.fsum((k + a) ** (-s) for k in range(M))
    x = M + a
    total = head + x ** (1 - s) / (s - 1) + x ** (-s) / 2
    eps = ctx.mpf(10) ** (-(dps + 10)) * abs(total)
    xpow = x ** (-s - 1)
    x2 = x * x
    poch = s  # rising factorial (s)_{2j-1}
    fact = 2  # (2j)!
    prev = ctx.inf
    j = 1
    while True:
        b = bernoulli(2 * j)
        term = ctx.mpf(b.numerator) / (b.denominator * fact) * poch * xpow
        mag = abs(term)
        if mag < eps:
            return +total
        if mag >= prev:
            return None  # asymptotic series turned before reaching eps: need a longer head
        total += term
        prev = mag
        poch *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        xpow /= x2
        j += 1


def _validated(fn, s, digits: int, what: str) -> BigReal:
    s = as_rational(s)
    if s < MIN_S:
        raise UsageError(f"{what} is only supported for s >= 3/2 (got {s})")
    return validated(fn, digits, f"{what}({s})")


def hurwitz_zeta(s, a, digits: int = DEFAULT_DIGITS) -> BigReal:
    a = as_rational(a)
    if not 0 < a <= 1:
        raise UsageError(f"a must lie in (0, 1], got {a}")
    return _validated(lambda dps: hurwitz_mp(s, a, dps), s, digits, "hurwitz_zeta")


def zeta_mp(s, dps: int):
    return hurwitz_mp(s, 1, dps)


def zeta_minus_one_mp(s, dps: int):
    """zeta(s) - 1, relatively accurate for large s."""
    return hurwitz_mp(s, 2, dps)


def riemann_zeta(s, digits: int = DEFAULT_DIGITS) -> BigReal:
    return _validated(lambda dps: zeta_mp(s, dps), s, digits, "riemann_zeta")


# chi_0 and chi_1 mod 3 at n = 1, 2
_CHI2 = {0: 1, 1: -1}


def l_series_mp(j: int, s, dps: int):
    """L_j(s) = 3^-s (zeta(s,1/3) + chi_j(2) zeta(s,2/3))."""
    if j not in _CHI2:
        raise UsageError(f"character index must be 0 or 1, got {j}")
    ctx = mpctx()
    with ctx.workdps(dps + 5):
        s_ = to_mpf(s)
        return ctx.mpf(3) ** (-s_) * (
            hurwitz_mp(s, Fraction(1, 3), dps) + _CHI2[j] * hurwitz_mp(s, Fraction(2, 3), dps)
        )


def l_series_minus_one_mp(j: int, s, dps: int):
    """L_j(s) - 1, relatively accurate for large s (terms n >= 2 summed directly)."""
    if j not in _CHI2:
        raise UsageError(f"character index must be 0 or 1, got {j}")
    ctx = mpctx()
    with ctx.workdps(dps + 5):
        s_ = to_mpf(s)
        return ctx.mpf(3) ** (-s_) * (
            hurwitz_mp(s, Fraction(4, 3), dps) + _CHI2[j] * hurwitz_mp(s, Fraction(2, 3), dps)
        )


def l_series_mod3(j: int, s, digits: int = DEFAULT_DIGITS) -> BigReal:
    return _validated(lambda dps: l_series_mp(j, s, dps), s, digits, f"L_{j}")
