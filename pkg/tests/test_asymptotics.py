import math
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modcount import arith, asymptotics
from modcount.asymptotics import (
    FORMS,
    checkpoints,
    dirichlet_closed_form,
    dirichlet_partial_sum,
    get_summand,
    partial_sum,
    progression_registry,
    progression_target,
    sieve_totals,
    summand_names,
)
from modcount.errors import CapExceeded, UsageError
from modcount.hiprec import Coefficient
from modcount.residues import ProblemKind, count_oracle

AUX = {
    "phi": lambda n: arith.euler_phi(n),
    "2^omega": lambda n: 2 ** arith.omega(n),
    "3^omega_tilde": lambda n: 3 ** arith.omega_tilde(n),
    "phi/2^omega": lambda n: F(arith.euler_phi(n), 2 ** arith.omega(n)),
    "phi/3^omega_tilde": lambda n: F(arith.euler_phi(n), 3 ** arith.omega_tilde(n)),
}


def naive(name, n):
    if name in AUX:
        return AUX[name](n)
    return count_oracle(ProblemKind(name), n).value


def naive_sum(name, N, k=1, l=0):
    return sum((naive(name, n) for n in range(1, N + 1) if n % k == l % k), 0)


def test_worked_examples():
    assert partial_sum("phi", 10).exact_sum == 32 == naive_sum("phi", 10)
    # 1+2+2+2+2+4+2+2+2+4
    assert partial_sum("2^omega", 10).exact_sum == 23 == naive_sum("2^omega", 10)
    assert partial_sum("sqrt_unity", 10, (8, 0)).exact_sum == 4
    assert partial_sum("sixth_powers_ring", 50).exact_sum == naive_sum("sixth_powers_ring", 50)


@pytest.mark.parametrize("name", [n for n in summand_names() if n != "sixth_powers_ring"])
def test_exact_against_naive_loop(name):
    N = 1500
    assert partial_sum(name, N).exact_sum == naive_sum(name, N)
    assert partial_sum(name, N, (8, 3)).exact_sum == naive_sum(name, N, 8, 3)
    assert partial_sum(name, N, (9, 0)).exact_sum == naive_sum(name, N, 9, 0)


def test_checkpoint_sums_and_ratios():
    rep = partial_sum("squares_ring", 2000)
    assert [c.N for c in rep.checkpoints] == checkpoints(2000)
    for c in rep.checkpoints:
        assert c.exact_sum == naive_sum("squares_ring", c.N)
    assert rep.checkpoints[-1].ratio.decimal(10) == rep.ratio.decimal(10)


def test_checkpoints_shape():
    assert checkpoints(10) == [3, 5, 10]
    assert checkpoints(1000) == [4, 8, 16, 32, 63, 125, 250, 500, 1000]
    assert checkpoints(2) == []


@given(st.integers(1, 2500), st.integers(3, 400), st.sampled_from([1, 8, 9, 72]))
@settings(max_examples=30, deadline=None)
def test_block_size_and_modulus_do_not_change_sums(N, block, modulus):
    names = ["phi", "phi/2^omega", "cubes_ring", "sqrt_neg_unity"]
    tot = sieve_totals([get_summand(n) for n in names], N, modulus=modulus, block=block)
    ref = sieve_totals([get_summand(n) for n in names], N, modulus=1, block=1 << 16)
    for n in names:
        assert tot.total(n) == ref.total(n)
        if N <= 300:
            assert ref.total(n) == naive_sum(n, N)


def test_progression_partition_at_1e5():
    names = summand_names()
    names.remove("sixth_powers_ring")
    tot8 = sieve_totals([get_summand(n) for n in names], 10**5, modulus=8)
    tot9 = sieve_totals([get_summand(n) for n in names], 10**5, modulus=9)
    for n in names:
        assert sum(tot8.total(n, r) for r in range(8)) == tot8.total(n) == tot9.total(n)
        assert sum(tot9.total(n, r) for r in range(9)) == tot9.total(n)


def test_sqrt_unity_rebuilt_from_two_omega_classes():
    tot = sieve_totals([get_summand("2^omega"), get_summand("sqrt_unity")], 10**5, modulus=8)
    t = lambda r: tot.total("2^omega", r)  # noqa: E731
    rebuilt = t(1) + t(3) + t(5) + t(7) + F(t(2) + t(6), 2) + t(4) + 2 * t(0)
    assert rebuilt == tot.total("sqrt_unity")


def test_cbrt_unity_rebuilt_from_three_omega_tilde_classes():
    tot = sieve_totals([get_summand("3^omega_tilde"), get_summand("cbrt_unity")], 10**5, modulus=9)
    rebuilt = sum(tot.total("3^omega_tilde", r) for r in range(1, 9)) + 3 * tot.total("3^omega_tilde", 0)
    assert rebuilt == tot.total("cbrt_unity")


def test_threads_are_deterministic():
    names = [get_summand(n) for n in ("phi/3^omega_tilde", "squares_units", "cbrt_nullity")]
    one = sieve_totals(names, 300000, modulus=72, threads=1, block=4096)
    four = sieve_totals(names, 300000, modulus=72, threads=4, block=4096)
    assert one.totals == four.totals


def test_registry_lookups():
    mpmath.mp.dps = 30
    t = progression_target("2^omega", 8, 0)
    assert float(t.form.coefficient.evaluate(20).value) == pytest.approx(float(1 / mpmath.pi**2), rel=1e-15)
    t = progression_target("3^omega_tilde", 9, 3)
    c = FORMS["3^omega_tilde"].coefficient
    assert t.form.coefficient == c.scaled(F(1, 9))
    # C below is the bare closed form times product, without the weight's own scalar
    base = FORMS["phi/2^omega"].coefficient
    assert progression_target("phi/2^omega", 8, 2).form.coefficient == Coefficient(F(1, 40), base.closed, base.product)
    assert progression_target("phi/2^omega", 8, 5).form.coefficient == Coefficient(F(1, 10), base.closed, base.product)
    base = FORMS["phi/3^omega_tilde"].coefficient
    assert progression_target("phi/3^omega_tilde", 9, 5).form.coefficient == Coefficient(F(1, 16), base.closed, base.product)
    assert progression_target("phi/3^omega_tilde", 9, 6).form.coefficient == Coefficient(F(1, 24), base.closed, base.product)
    assert progression_target("phi", 8, 0) is None
    assert len(progression_registry()) == 8 + 9 + 8 + 9


def test_progression_coefficients_add_up_to_the_whole():
    # the residue-class coefficients of each auxiliary weight must sum to the unrestricted one
    for name, k in (("2^omega", 8), ("3^omega_tilde", 9), ("phi/2^omega", 8), ("phi/3^omega_tilde", 9)):
        total = sum(progression_target(name, k, r).form.coefficient.scalar for r in range(k))
        assert total == FORMS[name].coefficient.scalar, name


def test_forms_flag_conjectural_cubes_ring():
    assert FORMS["cubes_ring"].conjectural
    rep = partial_sum("cubes_ring", 100)
    assert rep.conjectural
    assert not partial_sum("squares_ring", 100).conjectural


def test_phi_ratio_at_1e6():
    rep = partial_sum("phi", 10**6)
    assert abs(float(rep.ratio.value) - 1) < 1e-3


def test_errors():
    with pytest.raises(UsageError):
        partial_sum("fourth_powers", 10)
    with pytest.raises(CapExceeded):
        partial_sum("phi", 10**9 + 1)
    with pytest.raises(CapExceeded):
        partial_sum("phi", 5000, cap=1000)
    with pytest.raises(CapExceeded):
        partial_sum("sixth_powers_ring", asymptotics.SIXTH_POWERS_SUM_CAP + 1)
    with pytest.raises(UsageError):
        partial_sum("phi", 10, (8, 3, 1))


def test_dirichlet_trivial_and_closed_forms():
    assert float(dirichlet_partial_sum("sqrt_nullity", 2, 1).value) == 1.0
    # sum phi(n)/n^3 = zeta(2)/zeta(3), tail ~ 1/N
    name, closed = dirichlet_closed_form("phi", 3)
    mpmath.mp.dps = 30
    assert float(closed.value) == pytest.approx(float(mpmath.zeta(2) / mpmath.zeta(3)), rel=1e-15)
    part = float(dirichlet_partial_sum("phi", 3, 10**5).value)
    assert 0 < float(closed.value) - part < 1e-4
    _, tw = dirichlet_closed_form("2^omega", 2)
    part = float(dirichlet_partial_sum("2^omega", 2, 10**5).value)
    assert 0 < float(tw.value) - part < 20 * math.log(1e5) / 1e5
    assert dirichlet_closed_form("cubes_ring", 2) is None
    with pytest.raises(UsageError):
        dirichlet_partial_sum("phi", F(5, 4), 10)
