"""Gamma at positive rationals via Spouge's approximation."""

from __future__ import annotations

import math
from fractions import Fraction

from ..config import DEFAULT_DIGITS
from ..errors import PrecisionError, UsageError
from .bigreal import BigReal, agree, as_rational, memo, mpctx, to_mpf, validated


def spouge_parameter(dps: int) -> int:
    return math.ceil(1.3 * dps)


def gamma_spouge_mp(q, dps: int, a: int | None = None):
    """Gamma(q) for rational q > 0.

    Relative error of the approximation is below a^-1/2 (2 pi)^-(a+1/2); the
    coefficient sum cancels about a*log10(e) digits, which the working
    precision absorbs.
    """
    q = as_rational(q)
    if q <= 0:
        raise UsageError(f"gamma needs a positive argument, got {q}")
    a = spouge_parameter(dps) if a is None else a
    key = ("spouge", q, dps, a)
    cache = memo()
    if key in cache:
        return cache[key]
    ctx = mpctx()
    with ctx.workdps(dps + math.ceil(0.5 * a) + 10):
        z = to_mpf(q - 1)
        e = ctx.e
        acc = ctx.sqrt(2 * ctx.pi)
        fact = ctx.mpf(1)  # (k-1)!
        for k in range(1, a):
            if k > 1:
                fact *= k - 1
            c_k = (-1) ** (k - 1) * ctx.mpf(a - k) ** (k - ctx.mpf(1) / 2) * e ** (a - k) / fact
            acc += c_k / (z + k)
        za = z + a
        value = za ** (z + ctx.mpf(1) / 2) * ctx.exp(-za) * acc
    cache[key] = value
    return value


def gamma(q, digits: int = DEFAULT_DIGITS) -> BigReal:
    """Gamma(q), cross-checked by a second Spouge run with parameter a + 5."""
    q = as_rational(q)

    def compute(dps: int):
        first = gamma_spouge_mp(q, dps)
        second = gamma_spouge_mp(q, dps, spouge_parameter(dps) + 5)
        with mpctx().workdps(dps):
            if not agree(first, second, dps - 5):
                raise PrecisionError(f"Spouge runs disagree for gamma({q})")
        return first

    return validated(compute, digits, f"gamma({q})")


def gamma_two_thirds(digits: int = DEFAULT_DIGITS) -> BigReal:
    return gamma(Fraction(2, 3), digits)
