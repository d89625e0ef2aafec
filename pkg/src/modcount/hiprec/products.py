"""Euler products over primes in a residue class, evaluated to high precision.

A product spec is f(p) = prod_i poly_i(1/p) ** e_i with poly_i(0) = 1.  The
primes up to a cutoff are multiplied out directly (exactly, where every
exponent is an integer); the rest is exp(sum_n (c_n/n) * [P_class(n) - head
sums]), with c_n the exact Taylor coefficients of log f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..config import DEFAULT_CUTOFF, DEFAULT_DIGITS
from ..errors import DivergentProduct, UsageError
from .bigreal import BigReal, as_rational, mpctx, to_mpf, validated
from .primezeta import ONE_MOD_3, TWO_MOD_3, PrimeClass, character_prime_sum_at_one_mp, prime_zeta_class_mp


@dataclass(frozen=True)
class ProductFactor:
    """poly(x) ** exponent, x = 1/p; ``poly`` holds ascending coefficients."""

    poly: tuple[Fraction, ...]
    exponent: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        poly = tuple(as_rational(c) for c in self.poly)
        while len(poly) > 1 and poly[-1] == 0:
            poly = poly[:-1]
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "exponent", as_rational(self.exponent))
        if not poly or poly[0] != 1:
            raise UsageError(f"factor polynomial must have constant term 1, got {[str(c) for c in poly]}")

    @classmethod
    def of(cls, *coeffs, exponent=1) -> ProductFactor:
        return cls(tuple(as_rational(c) for c in coeffs), as_rational(exponent))

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def at(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.poly):
            acc = acc * x + c
        return acc

    def growth(self) -> float:
        """Largest 1/|root| of poly: the geometric rate of its log coefficients."""
        if self.degree == 0 or self.exponent == 0:
            return 0.0
        roots = np.roots([float(c) for c in reversed(self.poly)])
        return float(max(1.0 / abs(r) for r in roots))

    def to_json(self) -> dict:
        return {"poly": [str(c) for c in self.poly], "exponent": str(self.exponent)}


@dataclass(frozen=True)
class LogSeriesExpansion:
    """log f(p) = sum_{n>=1} (c_n / n) p^-n; ``coefficients[n]`` is c_n (index 0 unused)."""

    coefficients: tuple[Fraction, ...]

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1

    def c(self, n: int) -> Fraction:
        return self.coefficients[n]

    def evaluate(self, x: Fraction) -> Fraction:
        return sum((self.coefficients[n] / n * x**n for n in range(1, self.n_max + 1)), Fraction(0))


def _log_poly(poly: Sequence[Fraction], n_max: int) -> list[Fraction]:
    """Coefficients l_1..l_n_max of log poly(x), from poly * L' = poly'."""
    p = list(poly) + [Fraction(0)] * max(0, n_max + 1 - len(poly))
    out = [Fraction(0)] * (n_max + 1)
    for n in range(1, n_max + 1):
        acc = n * p[n]
        for k in range(1, n):
            acc -= k * out[k] * p[n - k]
        out[n] = acc / n
    return out


def expand_log_series(
    factors: Iterable[ProductFactor], n_max: int, allow_linear: bool = False
) -> LogSeriesExpansion:
    if n_max < 2:
        raise UsageError("n_max must be at least 2")
    total = [Fraction(0)] * (n_max + 1)
    for f in factors:
        if f.exponent == 0:
            continue
        logs = _log_poly(f.poly, n_max)
        for n in range(1, n_max + 1):
            total[n] += f.exponent * logs[n]
    coeffs = tuple(Fraction(0) if n == 0 else n * total[n] for n in range(n_max + 1))
    if coeffs[1] != 0 and not allow_linear:
        raise DivergentProduct(
            f"c_1 = {coeffs[1]} is nonzero: log f(p) ~ c_1/p, so the product over primes diverges"
        )
    return LogSeriesExpansion(coeffs)


def coefficient_bound(factors: Sequence[ProductFactor], n: int) -> float:
    """Upper bound on |c_n|: every root r of a factor polynomial contributes |e| |r|^-n."""
    out = 0.0
    for f in factors:
        if f.exponent and f.degree:
            out += abs(float(f.exponent)) * f.degree * f.growth() ** n
    return out


@dataclass(frozen=True)
class ClassProduct:
    """One residue class of primes together with the factors of f on it."""

    cls: PrimeClass
    factors: tuple[ProductFactor, ...]

    def __init__(self, cls, factors: Iterable[ProductFactor]):
        object.__setattr__(self, "cls", PrimeClass.parse(cls))
        object.__setattr__(self, "factors", tuple(factors))

    def growth(self) -> float:
        return max((f.growth() for f in self.factors), default=0.0)


@dataclass
class ProductEvaluation:
    value: BigReal
    head_exact: Fraction
    has_numeric_head: bool
    cutoff: int
    n_terms: int
    linear_terms: dict[str, Fraction] = field(default_factory=dict)


def head_product(part: ClassProduct, cutoff: int) -> tuple[Fraction, list[tuple[int, ProductFactor, Fraction]]]:
    """Exact product over p <= cutoff of integer-exponent factors, plus the leftover
    (p, factor, poly value) triples whose exponent is fractional."""
    exact = Fraction(1)
    numeric = []
    for p in part.cls.primes_upto(cutoff):
        x = Fraction(1, p)
        for f in part.factors:
            v = f.at(x)
            if f.exponent.denominator == 1:
                exact *= v ** int(f.exponent)
            else:
                numeric.append((p, f, v))
    return exact, numeric


def _tail_terms_needed(parts: Sequence[ClassProduct], cutoff: int, digits: int) -> int:
    """Smallest n0 for which the neglected sum over n > n0 is below 10^-digits."""
    target = -digits * math.log(10)
    need = 2
    for part in parts:
        if part.cls.finite or not part.factors:
            continue
        q = part.cls.next_prime_above(cutoff)
        weight = sum(abs(float(f.exponent)) * f.degree for f in part.factors)
        rho = part.growth()
        if weight == 0 or rho == 0:
            continue
        r = rho / q
        if r >= 1:
            raise DivergentProduct(
                f"tail series for class {part.cls} needs growth {rho:.3g} < first tail prime {q}; raise the cutoff"
            )
        n0 = 2
        while True:
            log_bound = math.log(weight) + (n0 + 1) * math.log(r) - math.log(1 - r)
            log_bound += math.log((1 + q / n0) / (n0 + 1))
            if log_bound < target:
                break
            n0 += 1
        need = max(need, n0)
    return need


def _evaluate_mp(
    parts: Sequence[ClassProduct],
    cutoff: int,
    dps: int,
    n_terms: int,
    linear: Fraction,
    head_exact: Fraction,
    numeric_head: list,
):
    ctx = mpctx()
    amplification = 0
    for part in parts:
        rho = part.growth()
        if rho > part.cls.p_min:
            amplification = max(amplification, math.ceil(n_terms * math.log10(rho / part.cls.p_min)))
    work = dps + amplification + 5
    with ctx.workdps(work):
        log_total = ctx.log(to_mpf(head_exact))
        for p, f, v in numeric_head:
            log_total += to_mpf(f.exponent) * ctx.log(to_mpf(v))
        if linear:
            head_chi = ctx.fsum(
                ctx.mpf(1) / p if p % 3 == 1 else -ctx.mpf(1) / p for p in ONE_MOD_3.primes_upto(cutoff) + TWO_MOD_3.primes_upto(cutoff)
            )
            log_total += to_mpf(linear) * (character_prime_sum_at_one_mp(work) - head_chi)
        for part in parts:
            if part.cls.finite or not part.factors:
                continue
            expansion = expand_log_series(part.factors, max(n_terms, 2), allow_linear=True)
            head_primes = part.cls.primes_upto(cutoff)
            for n in range(2, n_terms + 1):
                c = expansion.c(n)
                if c == 0:
                    continue
                tail = prime_zeta_class_mp(part.cls, n, work) - ctx.fsum(ctx.mpf(p) ** (-n) for p in head_primes)
                log_total += to_mpf(c / n) * tail
        return ctx.exp(log_total)


def _linear_coefficient(parts: Sequence[ClassProduct]) -> Fraction:
    """Coefficient of sum_p chi_1(p)/p left over once the 1/p terms are collected.

    The 1/p terms must cancel except for a chi_1-balanced combination
    c * (sum_{p=1(3)} 1/p - sum_{p=2(3)} 1/p), which converges conditionally.
    """
    by_class: dict[tuple[int, int], Fraction] = {}
    for part in parts:
        if part.cls.finite or not part.factors:
            continue
        c1 = expand_log_series(part.factors, 2, allow_linear=True).c(1)
        key = (part.cls.k, part.cls.l)
        by_class[key] = by_class.get(key, Fraction(0)) + c1
    everything = by_class.get((1, 0), Fraction(0))
    c31 = by_class.get((3, 1), Fraction(0)) + everything
    c32 = by_class.get((3, 2), Fraction(0)) + everything
    if c31 + c32 != 0:
        raise DivergentProduct(
            f"nonzero c_1 (= {c31} on p=1 mod 3, {c32} on p=2 mod 3): the 1/p terms do not cancel"
        )
    return c31


def euler_product(
    parts: Sequence[ClassProduct],
    cutoff: int = DEFAULT_CUTOFF,
    digits: int = DEFAULT_DIGITS,
    max_n: int | None = None,
    allow_conditional: bool = True,
) -> ProductEvaluation:
    """Product of f over several prime classes (their union must not overlap).

    With ``allow_conditional`` the 1/p terms may survive as a multiple of
    sum_p chi_1(p)/p; otherwise any nonzero c_1 is rejected.
    """
    parts = list(parts)
    for part in parts:
        if cutoff < part.cls.p_min:
            raise UsageError(f"cutoff {cutoff} is below the least prime {part.cls.p_min} of class {part.cls}")
    if allow_conditional:
        linear = _linear_coefficient(parts)
    else:
        for part in parts:
            if part.factors:
                expand_log_series(part.factors, 2)
        linear = Fraction(0)
    head_exact = Fraction(1)
    numeric_head: list = []
    for part in parts:
        exact, numeric = head_product(part, cutoff)
        head_exact *= exact
        numeric_head.extend(numeric)
    if head_exact <= 0 or any(v <= 0 for _, _, v in numeric_head):
        raise DivergentProduct("a head factor is nonpositive; the product is not of the form exp(sum log f)")

    if linear and cutoff < 3:
        raise UsageError("a conditionally convergent product needs cutoff >= 3")
    used: list[int] = []

    def compute(dps: int):
        n_terms = max_n if max_n is not None else _tail_terms_needed(parts, cutoff, dps)
        used.append(n_terms)
        return _evaluate_mp(parts, cutoff, dps, n_terms, linear, head_exact, numeric_head)

    value = validated(compute, digits, "prime product")
    return ProductEvaluation(
        value=value,
        head_exact=head_exact,
        has_numeric_head=bool(numeric_head),
        cutoff=cutoff,
        n_terms=used[-1],
        linear_terms={"chi_1": linear} if linear else {},
    )


def prime_product(
    factors: Sequence[ProductFactor],
    cls,
    cutoff: int = DEFAULT_CUTOFF,
    digits: int = DEFAULT_DIGITS,
    max_n: int | None = None,
) -> BigReal:
    """prod_{p in cls} f(p); rejects any spec whose log series has c_1 != 0."""
    part = ClassProduct(cls, factors)
    return euler_product([part], cutoff, digits, max_n, allow_conditional=False).value


def parse_product_spec(doc: dict) -> ClassProduct:
    """ProductSpec JSON: {"class": [k, l], "factors": [{"poly": [...], "exponent": "..."}]}."""
    if not isinstance(doc, dict):
        raise UsageError("product spec must be a JSON object")
    try:
        cls = PrimeClass.parse(doc.get("class", [1, 0]))
        raw = doc["factors"]
    except KeyError:
        raise UsageError("product spec needs a 'factors' list") from None
    if not isinstance(raw, list):
        raise UsageError("'factors' must be a list")
    factors = []
    for item in raw:
        if not isinstance(item, dict) or "poly" not in item:
            raise UsageError(f"bad factor entry {item!r}")
        poly = item["poly"]
        if not isinstance(poly, list) or not poly:
            raise UsageError(f"'poly' must be a non-empty list, got {poly!r}")
        factors.append(ProductFactor(tuple(as_rational(str(c)) for c in poly), as_rational(str(item.get("exponent", "1")))))
    return ClassProduct(cls, factors)


def product_spec_to_json(part: ClassProduct) -> dict:
    return {"class": [part.cls.k, part.cls.l], "factors": [f.to_json() for f in part.factors]}


__all__ = [
    "ClassProduct",
    "LogSeriesExpansion",
    "ProductEvaluation",
    "ProductFactor",
    "coefficient_bound",
    "euler_product",
    "expand_log_series",
    "head_product",
    "parse_product_spec",
    "prime_product",
]
