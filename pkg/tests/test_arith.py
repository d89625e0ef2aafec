import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from modcount import arith
from modcount.errors import CapExceeded, UsageError


def trial_factor(n):
    out, p = [], 2
    while p * p <= n:
        r = 0
        while n % p == 0:
            n //= p
            r += 1
        if r:
            out.append((p, r))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def slow_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_primes_upto_matches_trial_division():
    got = [int(p) for p in arith.primes_upto(2000)]
    assert got == [n for n in range(2001) if slow_is_prime(n)]
    assert list(arith.primes_upto(1)) == []
    assert list(arith.primes_upto(2)) == [2]


def test_is_prime_small_range():
    assert [n for n in range(-5, 5000) if arith.is_prime(n)] == [n for n in range(5000) if slow_is_prime(n)]


@pytest.mark.parametrize(
    "n, expected",
    [
        (2**61 - 1, True),
        (2**64 - 59, True),  # largest 64-bit prime
        (561, False),  # Carmichael
        (3215031751, False),  # strong pseudoprime to bases 2, 3, 5, 7
        (3825123056546413051, False),  # strong pseudoprime to bases 2..23
        (2**62 + 1, False),
    ],
)
def test_is_prime_hard_cases(n, expected):
    assert arith.is_prime(n) is expected


def test_factorize_known():
    assert arith.factorize(600851475143).factors == ((71, 1), (839, 1), (1471, 1), (6857, 1))
    assert arith.factorize(1).factors == ()
    big = (2**31 - 1) * (2**31 + 11)
    assert arith.factorize(big).n == big


def test_factorize_semiprime_of_two_large_primes():
    p, q = 4294967291, 2147483647  # 2^32 - 5 and 2^31 - 1
    assert arith.factorize(p * q).factors == ((q, 1), (p, 1))


def test_factorize_limits():
    with pytest.raises(UsageError):
        arith.factorize(0)
    with pytest.raises(CapExceeded):
        arith.factorize(2**63)


@given(st.integers(min_value=1, max_value=10**7))
@settings(max_examples=300, deadline=None)
def test_factorize_agrees_with_trial_division(n):
    assert arith.factorize(n).factors == trial_factor(n)


@given(st.lists(st.sampled_from([3, 5, 7, 65537, 999983, 2147483647, 4294967291]), min_size=1, max_size=3))
@settings(max_examples=100, deadline=None)
def test_factorize_products_of_known_primes(ps):
    n = math.prod(ps)
    assume(n <= arith.MAX_N)
    fact = arith.factorize(n)
    assert math.prod(p**r for p, r in fact) == n
    assert sorted(p for p, r in fact for _ in range(r)) == sorted(ps)


def test_factorization_rejects_bad_lists():
    with pytest.raises(ValueError):
        arith.Factorization(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        arith.Factorization(12, ((2, 1), (3, 1)))


def test_divisors():
    assert arith.factorize(36).divisors() == [1, 2, 3, 4, 6, 9, 12, 18, 36]


@given(st.integers(min_value=1, max_value=3000))
@settings(max_examples=150, deadline=None)
def test_arithmetic_functions_by_definition(n):
    assert arith.euler_phi(n) == sum(1 for x in range(1, n + 1) if math.gcd(x, n) == 1)
    primes = [p for p in range(2, n + 1) if n % p == 0 and slow_is_prime(p)]
    assert arith.omega(n) == len(primes)
    assert arith.omega_tilde(n) == sum(1 for p in primes if p % 3 == 1)
    squarefree = all(n % (p * p) for p in primes)
    assert arith.mobius(n) == ((-1) ** len(primes) if squarefree else 0)


def test_mobius_upto_matches_pointwise():
    mu = arith.mobius_upto(5000)
    assert mu[0] == 0
    assert all(int(mu[n]) == arith.mobius(n) for n in range(1, 5001))
    # sum_{d | n} mu(d) = [n = 1]
    assert all(sum(int(mu[d]) for d in arith.factorize(n).divisors()) == (n == 1) for n in range(1, 500))


def test_spf_sieve_block():
    sv = arith.spf_sieve(10**6, 10**6 + 5000)
    for m in range(10**6, 10**6 + 5000, 7):
        assert sv[m] == trial_factor(m)[0][0]
        assert sv.factorize(m) == arith.factorize(m)
    with pytest.raises(IndexError):
        sv[10]


def test_spf_sieve_caps(monkeypatch):
    with pytest.raises(UsageError):
        arith.spf_sieve(1, 10)
    with pytest.raises(CapExceeded):
        arith.spf_sieve(2, 100, max_block=50)
    monkeypatch.setenv("MODCOUNT_BLOCK_SIZE", "16")
    with pytest.raises(CapExceeded):
        arith.spf_sieve(2, 100)


def test_block_size_env_rejects_garbage(monkeypatch):
    monkeypatch.setenv("MODCOUNT_BLOCK_SIZE", "lots")
    with pytest.raises(ValueError):
        arith.spf_sieve(2, 10)


def test_primes_upto_dtype():
    assert arith.primes_upto(100).dtype.kind == "i"
    assert np.all(np.diff(arith.primes_upto(10**5)) > 0)
