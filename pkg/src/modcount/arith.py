"""Integer substrate: primality, factorization, block sieves and the elementary
arithmetic functions (phi, omega, omega-tilde, mu) used by every count.

Integers are capped at 2**63 - 1 for factorization.  Primality is exact on the
whole 64-bit range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from . import config
from .errors import CapExceeded, UsageError

MAX_N = (1 << 63) - 1

# Deterministic for every n < 3.3e24 (Sorenson & Webster), which covers 64 bits.
MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_TRIAL_LIMIT = 1 << 16


@lru_cache(maxsize=8)
def primes_upto(limit: int) -> np.ndarray:
    """All primes p <= limit as an int64 array (plain Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    out = np.flatnonzero(sieve).astype(np.int64)
    out.flags.writeable = False
    return out


_SMALL_PRIMES: tuple[int, ...] = tuple(int(p) for p in primes_upto(_TRIAL_LIMIT))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho(n: int) -> int:
    """A nontrivial factor of the odd composite n (Brent's variant, fixed polynomials)."""
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"pollard rho failed on {n}")  # pragma: no cover


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _rho(n)
    _split(d, out)
    _split(n // d, out)


@dataclass(frozen=True)
class Factorization:
    """n together with its prime-power decomposition, primes strictly increasing."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, r in self.factors:
            if p <= last or r < 1:
                raise ValueError(f"malformed factor list {self.factors}")
            last = p
            prod *= p**r
        if prod != self.n:
            raise ValueError(f"factors multiply to {prod}, not {self.n}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def divisors(self) -> list[int]:
        divs = [1]
        for p, r in self.factors:
            divs = [d * p**e for d in divs for e in range(r + 1)]
        return sorted(divs)


IntOrFact = Union[int, Factorization]


def factorize(n: int) -> Factorization:
    n = int(n)
    if n < 1:
        raise UsageError(f"factorize needs n >= 1, got {n}")
    if n > MAX_N:
        raise CapExceeded(f"n = {n} exceeds the 63-bit factorization cap")
    m = n
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            r = 0
            while m % p == 0:
                m //= p
                r += 1
            found[p] = r
    if m > 1:
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def _fact(f: IntOrFact) -> Factorization:
    return f if isinstance(f, Factorization) else factorize(f)


def euler_phi(f: IntOrFact) -> int:
    out = 1
    for p, r in _fact(f):
        out *= p ** (r - 1) * (p - 1)
    return out


def omega(f: IntOrFact) -> int:
    return len(_fact(f))


def omega_tilde(f: IntOrFact) -> int:
    """Number of distinct primes p = 1 (mod 3) dividing n."""
    return sum(1 for p, _ in _fact(f) if p % 3 == 1)


def mobius(f: IntOrFact) -> int:
    fact = _fact(f)
    if any(r > 1 for _, r in fact):
        return 0
    return -1 if len(fact) % 2 else 1


def mobius_upto(limit: int) -> np.ndarray:
    """mu(0..limit) as int8, mu(0) = 0."""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_upto(limit):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    return mu


@dataclass(frozen=True)
class SpfSieve:
    """Smallest prime factor of every integer in [lo, hi)."""

    lo: int
    hi: int
    spf: np.ndarray

    def __getitem__(self, m: int) -> int:
        if not self.lo <= m < self.hi:
            raise IndexError(m)
        return int(self.spf[m - self.lo])

    def factorize(self, m: int) -> Factorization:
        """Factor m in the block: peel off the sieved spf, finish the cofactor by division."""
        p = self[m]
        found: dict[int, int] = {}
        rest = m
        while rest % p == 0:
            rest //= p
            found[p] = found.get(p, 0) + 1
        # every other prime factor is >= p; the cofactor is small relative to m
        for q, r in factorize(rest):
            found[q] = found.get(q, 0) + r
        return Factorization(m, tuple(sorted(found.items())))


def spf_sieve(lo: int, hi: int, max_block: int | None = None) -> SpfSieve:
    if not 2 <= lo < hi:
        raise UsageError(f"spf_sieve needs 2 <= lo < hi, got [{lo}, {hi})")
    if hi - 1 > MAX_N:
        raise CapExceeded("spf_sieve range exceeds 63 bits")
    cap = config.block_size() if max_block is None else max_block
    if hi - lo > cap:
        raise CapExceeded(f"block of {hi - lo} integers exceeds the block budget {cap}")
    spf = np.zeros(hi - lo, dtype=np.int64)
    for p in primes_upto(math.isqrt(hi - 1)):
        p = int(p)
        start = max(p * p, (lo + p - 1) // p * p)
        if start >= hi:
            continue
        view = spf[start - lo :: p]
        view[view == 0] = p
    unset = spf == 0
    spf[unset] = np.arange(lo, hi, dtype=np.int64)[unset]
    return SpfSieve(lo, hi, spf)
