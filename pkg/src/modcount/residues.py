"""Exact counts of roots and power images modulo n.

Eight problems have closed forms, evaluated multiplicatively from per-prime-power
local factors.  Two (x^2 = -1 in the unit group, sixth powers in Z_n) are
oracle-backed only.  Every closed form is checked against brute force in the
test suite.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import arith
from .arith import Factorization, IntOrFact
from .config import DEFAULT_ORACLE_CAP
from .errors import CapExceeded, UnsupportedKind, UsageError


class ProblemKind(str, enum.Enum):
    SQRT_UNITY = "sqrt_unity"
    CBRT_UNITY = "cbrt_unity"
    SQRT_NULLITY = "sqrt_nullity"
    CBRT_NULLITY = "cbrt_nullity"
    SQUARES_UNITS = "squares_units"
    CUBES_UNITS = "cubes_units"
    SQUARES_RING = "squares_ring"
    CUBES_RING = "cubes_ring"
    SQRT_NEG_UNITY = "sqrt_neg_unity"
    SIXTH_POWERS_RING = "sixth_powers_ring"

    @classmethod
    def parse(cls, name: str | ProblemKind) -> ProblemKind:
        if isinstance(name, ProblemKind):
            return name
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(k.value for k in cls)
            raise UsageError(f"unknown problem {name!r}; expected one of {known}") from None

    @property
    def closed_form(self) -> bool:
        return self not in ORACLE_ONLY

    @property
    def conjectural(self) -> bool:
        return self is ProblemKind.CUBES_RING

    @property
    def unit_group(self) -> bool:
        return self in _UNIT_GROUP

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


ORACLE_ONLY = frozenset({ProblemKind.SQRT_NEG_UNITY, ProblemKind.SIXTH_POWERS_RING})
CLOSED_FORM_KINDS = tuple(k for k in ProblemKind if k not in ORACLE_ONLY)

_UNIT_GROUP = frozenset(
    {
        ProblemKind.SQRT_UNITY,
        ProblemKind.CBRT_UNITY,
        ProblemKind.SQUARES_UNITS,
        ProblemKind.CUBES_UNITS,
        ProblemKind.SQRT_NEG_UNITY,
    }
)

_DESCRIPTIONS = {
    ProblemKind.SQRT_UNITY: "solutions of x^2 = 1 in (Z/n)*",
    ProblemKind.CBRT_UNITY: "solutions of x^3 = 1 in (Z/n)*",
    ProblemKind.SQRT_NULLITY: "solutions of x^2 = 0 in Z/n",
    ProblemKind.CBRT_NULLITY: "solutions of x^3 = 0 in Z/n",
    ProblemKind.SQUARES_UNITS: "squares in (Z/n)*",
    ProblemKind.CUBES_UNITS: "cubes in (Z/n)*",
    ProblemKind.SQUARES_RING: "squares in Z/n",
    ProblemKind.CUBES_RING: "cubes in Z/n (conjectural local factors)",
    ProblemKind.SQRT_NEG_UNITY: "solutions of x^2 = -1 in (Z/n)*",
    ProblemKind.SIXTH_POWERS_RING: "sixth powers (= squares that are also cubes) in Z/n",
}


@dataclass(frozen=True)
class CountResult:
    n: int
    kind: ProblemKind
    value: int
    method: str  # "formula" | "oracle"
    conjectural: bool = field(default=False)


def _exact_div(num: int, den: int, what: str) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"{what}: {num}/{den} is not an integer")
    return q


def _sqrt_unity_local(p: int, r: int) -> int:
    if p == 2:
        return 1 if r == 1 else (2 if r == 2 else 4)
    return 2


def _cbrt_unity_local(p: int, r: int) -> int:
    if p == 3:
        return 1 if r == 1 else 3
    return 3 if p % 3 == 1 else 1


def _squares_ring_local(p: int, r: int) -> int:
    if p == 2:
        return _exact_div(2 ** (r - 1) + (4 if r % 2 == 0 else 5), 3, "b(2^r)")
    tail = p + 2 if r % 2 == 0 else 2 * p + 1
    return _exact_div(p ** (r + 1) + tail, 2 * (p + 1), "b(p^r)")


# conjectured table; p = 3 offsets indexed by r mod 3
_CUBES_RING_P3 = (10, 30, 12)


def _cubes_ring_local(p: int, r: int) -> int:
    if p == 3:
        return _exact_div(3 ** (r + 1) + _CUBES_RING_P3[r % 3], 13, "b(3^r)")
    big = p ** (r + 2)
    if p % 3 == 2:
        tail = (p + 1, p * p + p, p * p + 1)[r % 3]
        return _exact_div(big + tail, p * p + p + 1, "b(p^r)")
    tail = (2 * p * p + 3 * p + 3, 3 * p * p + 3 * p + 2, 3 * p * p + 2 * p + 3)[r % 3]
    return _exact_div(big + tail, 3 * (p * p + p + 1), "b(p^r)")


def sqrt_neg_unity_rule(p: int, r: int) -> int:
    """Local count of x^2 = -1 mod p^r.  Derived, not quoted: callers gate it with
    validate_sqrt_neg_unity_rule()."""
    if p == 2:
        return 1 if r == 1 else 0
    return 2 if p % 4 == 1 else 0


def local_factor(kind: ProblemKind | str, p: int, r: int) -> int:
    """Value of the multiplicative counting function at p**r."""
    kind = ProblemKind.parse(kind)
    if r < 1:
        if r == 0:
            return 1
        raise UsageError(f"exponent must be >= 1, got {r}")
    if kind is ProblemKind.SQRT_UNITY:
        return _sqrt_unity_local(p, r)
    if kind is ProblemKind.CBRT_UNITY:
        return _cbrt_unity_local(p, r)
    if kind is ProblemKind.SQRT_NULLITY:
        return p ** (r // 2)
    if kind is ProblemKind.CBRT_NULLITY:
        return p ** (2 * r // 3)
    if kind is ProblemKind.SQUARES_UNITS:
        return _exact_div(p ** (r - 1) * (p - 1), _sqrt_unity_local(p, r), "phi/a")
    if kind is ProblemKind.CUBES_UNITS:
        return _exact_div(p ** (r - 1) * (p - 1), _cbrt_unity_local(p, r), "phi/a")
    if kind is ProblemKind.SQUARES_RING:
        return _squares_ring_local(p, r)
    if kind is ProblemKind.CUBES_RING:
        return _cubes_ring_local(p, r)
    raise UnsupportedKind(f"{kind.value} has no closed-form local factor")


def count_formula(kind: ProblemKind | str, f: IntOrFact) -> CountResult:
    kind = ProblemKind.parse(kind)
    if not kind.closed_form:
        raise UnsupportedKind(f"{kind.value} is oracle-backed; use count_oracle")
    fact = f if isinstance(f, Factorization) else arith.factorize(f)
    value = 1
    for p, r in fact:
        value *= local_factor(kind, p, r)
    return CountResult(fact.n, kind, value, "formula", kind.conjectural)


def sqrt_unity_case_split(f: IntOrFact) -> int:
    """a(n) from the global mod-8 case split on 2**omega(n)."""
    fact = f if isinstance(f, Factorization) else arith.factorize(f)
    w = arith.omega(fact)
    m = fact.n % 8
    if m in (2, 6):
        return 2 ** (w - 1)
    if m == 0:
        return 2 ** (w + 1)
    return 2**w


def cbrt_unity_case_split(f: IntOrFact) -> int:
    """a(n) from the global mod-9 case split on 3**omega_tilde(n)."""
    fact = f if isinstance(f, Factorization) else arith.factorize(f)
    w = arith.omega_tilde(fact)
    return 3 ** (w + 1) if fact.n % 9 == 0 else 3**w


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

_IMAGE_POWER = {
    ProblemKind.SQUARES_UNITS: 2,
    ProblemKind.CUBES_UNITS: 3,
    ProblemKind.SQUARES_RING: 2,
    ProblemKind.CUBES_RING: 3,
    ProblemKind.SIXTH_POWERS_RING: 6,
}


def _powmod(x: np.ndarray, k: int, n: int) -> np.ndarray:
    # repeated multiply-reduce keeps every product below n**2 < 2**63
    out = x % n
    for _ in range(k - 1):
        out = out * x % n
    return out


def coprime_mask(n: int) -> np.ndarray:
    mask = np.ones(n, dtype=bool)
    if n == 1:
        return mask
    for p in arith.factorize(n).primes:
        mask[::p] = False
    return mask


class OracleScratch:
    """Per-n scratch shared across several oracle kinds (x, x^2, x^3 mod n, units mask)."""

    def __init__(self, n: int):
        self.n = n
        self.x = np.arange(n, dtype=np.int64)
        self._cache: dict[object, np.ndarray] = {}

    def power(self, k: int) -> np.ndarray:
        if k not in self._cache:
            if k == 1:
                self._cache[k] = self.x
            elif k == 6:
                self._cache[k] = _powmod(self.power(2), 3, self.n)
            else:
                self._cache[k] = _powmod(self.x, k, self.n)
        return self._cache[k]

    @property
    def units(self) -> np.ndarray:
        if "units" not in self._cache:
            self._cache["units"] = coprime_mask(self.n)
        return self._cache["units"]

    def count(self, kind: ProblemKind) -> int:
        n = self.n
        if n == 1:
            return 1
        if kind in _IMAGE_POWER:
            vals = self.power(_IMAGE_POWER[kind])
            if kind.unit_group:
                vals = vals[self.units]
            seen = np.zeros(n, dtype=bool)
            seen[vals] = True
            return int(np.count_nonzero(seen))
        if kind is ProblemKind.SQRT_UNITY:
            hit = self.power(2) == 1
        elif kind is ProblemKind.CBRT_UNITY:
            hit = self.power(3) == 1
        elif kind is ProblemKind.SQRT_NEG_UNITY:
            hit = self.power(2) == n - 1
        elif kind is ProblemKind.SQRT_NULLITY:
            hit = self.power(2) == 0
        elif kind is ProblemKind.CBRT_NULLITY:
            hit = self.power(3) == 0
        else:  # pragma: no cover
            raise UnsupportedKind(kind.value)
        if kind.unit_group:
            hit &= self.units
        return int(np.count_nonzero(hit))


def count_oracle(kind: ProblemKind | str, n: int, cap: int = DEFAULT_ORACLE_CAP) -> CountResult:
    """Exhaustive count over Z_n (units only for the unit-group problems)."""
    kind = ProblemKind.parse(kind)
    n = int(n)
    if n < 1:
        raise UsageError(f"n must be >= 1, got {n}")
    if n > cap:
        raise CapExceeded(
            f"oracle refuses n = {n}: exhaustive enumeration is O(n) memory and time, cap is {cap}"
        )
    return CountResult(n, kind, OracleScratch(n).count(kind), "oracle", kind.conjectural)


def squares_and_cubes_oracle(n: int) -> int:
    """Elements of Z_n that are both a square and a cube (counted directly, not as sixth powers)."""
    s = OracleScratch(n)
    sq = np.zeros(n, dtype=bool)
    cu = np.zeros(n, dtype=bool)
    sq[s.power(2)] = True
    cu[s.power(3)] = True
    return int(np.count_nonzero(sq & cu))


@lru_cache(maxsize=4)
def validate_sqrt_neg_unity_rule(limit: int = 10**4) -> bool:
    """Check the multiplicative x^2 = -1 rule against brute force for every n <= limit."""
    for n in range(1, limit + 1):
        rule = 1
        for p, r in arith.factorize(n):
            rule *= sqrt_neg_unity_rule(p, r)
        if rule != count_oracle(ProblemKind.SQRT_NEG_UNITY, n).value:
            raise AssertionError(f"x^2=-1 rule disagrees with the oracle at n={n}")
    return True


def count(kind: ProblemKind | str, n: int, oracle_cap: int = DEFAULT_ORACLE_CAP) -> CountResult:
    """Best available evaluator: closed form when it exists, validated rule or oracle otherwise."""
    kind = ProblemKind.parse(kind)
    if kind.closed_form:
        return count_formula(kind, n)
    if kind is ProblemKind.SQRT_NEG_UNITY and n > 1:
        validate_sqrt_neg_unity_rule()
        value = 1
        for p, r in arith.factorize(n):
            value *= sqrt_neg_unity_rule(p, r)
        return CountResult(n, kind, value, "oracle", False)
    return count_oracle(kind, n, oracle_cap)


__all__ = [
    "CLOSED_FORM_KINDS",
    "CountResult",
    "ProblemKind",
    "count",
    "count_formula",
    "count_oracle",
    "local_factor",
]
