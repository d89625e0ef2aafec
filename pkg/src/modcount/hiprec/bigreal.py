"""Big-real plumbing on top of mpmath.

Every evaluation runs in a thread-private mpmath context, so concurrent callers
never share a precision setting.  Public results are :class:`BigReal` values
that have survived a two-precision recomputation check.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

from mpmath.ctx_mp import MPContext

from ..errors import PrecisionError, UsageError

Rational = Union[int, Fraction]

GUARD_DIGITS = 15
CHECK_EXTRA = 10

_tls = threading.local()


def mpctx() -> MPContext:
    """The calling thread's private mpmath context."""
    ctx = getattr(_tls, "ctx", None)
    if ctx is None:
        ctx = _tls.ctx = MPContext()
        _tls.cache = {}
    return ctx


def memo() -> dict:
    """Per-thread memo table for values tied to this thread's context."""
    mpctx()
    return _tls.cache


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise UsageError(f"not a rational number: {x!r}") from None
    raise UsageError(f"expected a rational number, got {type(x).__name__}")


def to_mpf(x: Rational):
    ctx = mpctx()
    q = as_rational(x)
    return ctx.mpf(q.numerator) / q.denominator


def mpf_to_fraction(v) -> Fraction:
    """Exact binary value of an mpf."""
    if not v:
        return Fraction(0)
    sign, man, exp, _ = v._mpf_  # man_exp drops the sign
    if not man:
        raise ValueError(f"not a finite number: {v}")
    return Fraction(-man if sign else man) * Fraction(2) ** exp


def fixed_string(v, places: int, truncate: bool = False) -> str:
    """Decimal string with exactly ``places`` digits after the point.

    Rounds half-to-even by default; ``truncate`` chops toward zero instead.
    """
    q = mpf_to_fraction(v) * 10**places
    if truncate:
        k = math.trunc(q)
    else:
        k = round(q)  # Fraction.__round__ is round-half-even
    sign = "-" if k < 0 else ""
    digits = str(abs(k)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


@dataclass(frozen=True)
class BigReal:
    """A real number known to ``digits`` significant decimal digits."""

    value: object  # mpmath mpf
    digits: int

    def __float__(self) -> float:
        return float(self.value)

    def fixed(self, places: int | None = None, truncate: bool = False) -> str:
        return fixed_string(self.value, self.digits if places is None else places, truncate)

    def decimal(self, sig: int | None = None) -> str:
        """Plain decimal (no exponent) carrying ``sig`` significant digits."""
        sig = self.digits if sig is None else sig
        if not self.value:
            return "0"
        exp10 = math.floor(math.log10(abs(float(self.value))))
        return fixed_string(self.value, max(0, sig - 1 - exp10))

    def sci(self, sig: int | None = None) -> str:
        sig = self.digits if sig is None else sig
        if not self.value:
            return "0"
        exp10 = math.floor(float(mpctx().log10(abs(self.value))))
        scaled = mpf_to_fraction(self.value) / Fraction(10) ** exp10
        k = round(scaled * 10 ** (sig - 1))
        if abs(k) >= 10**sig:
            k = round(Fraction(k, 10))
            exp10 += 1
        s = str(abs(k))
        sign = "-" if k < 0 else ""
        return f"{sign}{s[0]}.{s[1:]}e{exp10:+d}"

    def __str__(self) -> str:
        return self.sci()


def agree(a, b, digits: int) -> bool:
    """True when a and b agree to ``digits`` significant digits."""
    ctx = mpctx()
    scale = max(abs(a), abs(b))
    if not scale:
        return True
    return abs(a - b) <= scale * ctx.mpf(10) ** (-digits - 1)


def validated(compute: Callable[[int], object], digits: int, what: str) -> BigReal:
    """Run ``compute(dps)`` at two working precisions and insist they agree to ``digits``."""
    if digits < 1:
        raise UsageError("digits must be >= 1")
    ctx = mpctx()
    low = compute(digits + GUARD_DIGITS)
    high = compute(digits + GUARD_DIGITS + CHECK_EXTRA)
    with ctx.workdps(digits + GUARD_DIGITS + CHECK_EXTRA):
        if not agree(low, high, digits):
            raise PrecisionError(
                f"{what}: recomputation at +{CHECK_EXTRA} digits disagrees "
                f"({ctx.nstr(low, digits)} vs {ctx.nstr(high, digits)})"
            )
    return BigReal(high, digits)
