import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcount import arith
from modcount.errors import CapExceeded, UnsupportedKind, UsageError
from modcount.residues import (
    CLOSED_FORM_KINDS,
    ProblemKind,
    cbrt_unity_case_split,
    count,
    count_formula,
    count_oracle,
    local_factor,
    sqrt_neg_unity_rule,
    sqrt_unity_case_split,
    squares_and_cubes_oracle,
)

K = ProblemKind


def brute(kind, n):
    """Set-based enumeration, independent of the numpy oracle."""
    units = [x for x in range(n) if math.gcd(x, n) == 1] if n > 1 else [0]
    ring = range(n)
    if kind is K.SQRT_UNITY:
        return sum(1 for x in units if (x * x - 1) % n == 0)
    if kind is K.CBRT_UNITY:
        return sum(1 for x in units if (x**3 - 1) % n == 0)
    if kind is K.SQRT_NEG_UNITY:
        return sum(1 for x in units if (x * x + 1) % n == 0)
    if kind is K.SQRT_NULLITY:
        return sum(1 for x in ring if x * x % n == 0)
    if kind is K.CBRT_NULLITY:
        return sum(1 for x in ring if x**3 % n == 0)
    if kind is K.SQUARES_UNITS:
        return len({x * x % n for x in units})
    if kind is K.CUBES_UNITS:
        return len({x**3 % n for x in units})
    if kind is K.SQUARES_RING:
        return len({x * x % n for x in ring})
    if kind is K.CUBES_RING:
        return len({x**3 % n for x in ring})
    if kind is K.SIXTH_POWERS_RING:
        return len({x**6 % n for x in ring})
    raise AssertionError(kind)


@pytest.mark.parametrize(
    "kind, n, expected",
    [
        (K.SQRT_UNITY, 8, 4),
        (K.SQRT_UNITY, 1, 1),
        (K.CBRT_UNITY, 9, 3),
        (K.SQRT_NULLITY, 12, 2),
        (K.CBRT_NULLITY, 8, 4),
        (K.SQUARES_UNITS, 5, 2),
        (K.CUBES_UNITS, 7, 2),
        (K.SQUARES_RING, 9, 4),
        (K.CUBES_RING, 7, 3),
    ],
)
def test_formula_examples(kind, n, expected):
    assert count_formula(kind, n).value == expected
    assert brute(kind, n) == expected


@pytest.mark.parametrize(
    "kind, n, expected",
    [(K.SQRT_NEG_UNITY, 5, 2), (K.SQRT_NEG_UNITY, 4, 0), (K.SIXTH_POWERS_RING, 7, 2), (K.SQUARES_RING, 8, 3)],
)
def test_oracle_examples(kind, n, expected):
    assert count_oracle(kind, n).value == expected
    assert brute(kind, n) == expected


@pytest.mark.parametrize(
    "kind, p, r, expected",
    [(K.SQRT_NULLITY, 2, 3, 2), (K.CBRT_NULLITY, 3, 4, 9), (K.SQUARES_RING, 2, 3, 3), (K.CUBES_RING, 3, 2, 3)],
)
def test_local_factor_examples(kind, p, r, expected):
    assert local_factor(kind, p, r) == expected


@pytest.mark.parametrize("kind", list(K))
def test_numpy_oracle_matches_set_enumeration(kind):
    for n in range(1, 400):
        assert count_oracle(kind, n).value == brute(kind, n), n


@pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
def test_formula_matches_enumeration_on_prime_powers(kind):
    for p in (2, 3, 5, 7, 11, 13):
        r = 1
        while p**r <= 20000:
            assert local_factor(kind, p, r) == count_oracle(kind, p**r).value, (p, r)
            r += 1


@pytest.mark.parametrize("kind", CLOSED_FORM_KINDS)
def test_formula_matches_oracle_up_to_3000(kind):
    bad = [n for n in range(1, 3001) if count_formula(kind, n).value != count_oracle(kind, n).value]
    assert bad == []


def test_integrality_of_local_formulas():
    primes = [int(p) for p in arith.primes_upto(10**4)]
    for kind in CLOSED_FORM_KINDS:
        for p in primes:
            for r in range(1, 13):
                assert local_factor(kind, p, r) >= 1


@given(st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=200, deadline=None)
def test_multiplicativity(m, n):
    if math.gcd(m, n) != 1:
        return
    for kind in CLOSED_FORM_KINDS:
        assert count(kind, m * n).value == count(kind, m).value * count(kind, n).value


def test_duality_and_case_splits():
    for n in range(1, 10**4 + 1):
        fact = arith.factorize(n)
        phi = arith.euler_phi(fact)
        a2 = count_formula(K.SQRT_UNITY, fact).value
        a3 = count_formula(K.CBRT_UNITY, fact).value
        assert count_formula(K.SQUARES_UNITS, fact).value * a2 == phi
        assert count_formula(K.CUBES_UNITS, fact).value * a3 == phi
        assert sqrt_unity_case_split(fact) == a2
        assert cbrt_unity_case_split(fact) == a3


def test_sixth_powers_are_squares_that_are_cubes():
    for n in range(1, 2001):
        assert squares_and_cubes_oracle(n) == count_oracle(K.SIXTH_POWERS_RING, n).value


def test_sqrt_neg_unity_rule_and_count():
    assert [sqrt_neg_unity_rule(2, r) for r in (1, 2, 3)] == [1, 0, 0]
    assert sqrt_neg_unity_rule(13, 5) == 2 and sqrt_neg_unity_rule(7, 1) == 0
    rng = random.Random(7)
    for n in [1, 2, 5, 25, 65, 130, 1105] + [rng.randrange(1, 10**5) for _ in range(50)]:
        assert count(K.SQRT_NEG_UNITY, n).value == count_oracle(K.SQRT_NEG_UNITY, n).value


def test_cubes_ring_is_flagged():
    assert count(K.CUBES_RING, 7).conjectural
    assert count_oracle(K.CUBES_RING, 7).conjectural
    assert not count(K.SQUARES_RING, 7).conjectural


def test_errors():
    with pytest.raises(UsageError):
        ProblemKind.parse("fourth_powers")
    with pytest.raises(UsageError):
        count_oracle(K.SQRT_UNITY, 0)
    with pytest.raises(CapExceeded):
        count_oracle(K.SQUARES_RING, 10**6 + 1)
    with pytest.raises(CapExceeded):
        count_oracle(K.SQUARES_RING, 5000, cap=1000)
    with pytest.raises(UnsupportedKind):
        local_factor(K.SIXTH_POWERS_RING, 2, 1)
    with pytest.raises(UnsupportedKind):
        count_formula(K.SQRT_NEG_UNITY, 5)


def test_large_n_uses_formula():
    n = 2**61 - 1  # prime
    assert count(K.SQUARES_RING, n).value == (n + 1) // 2
    assert count(K.SQRT_UNITY, n).value == 2
