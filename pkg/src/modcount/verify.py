"""Reproduction checks for the published numbers, runnable from the CLI (``verify``)
and from the acceptance tests.

Expected values below are frozen published digits or closed forms; nothing here
is read back from the registries under test.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import arith
from .asymptotics import FORMS, SIEVE_SUMMANDS, build_report, dirichlet_partial_sum, partial_sum, progression_registry, sieve_totals
from .errors import UsageError
from .hiprec.bigreal import agree, mpctx, to_mpf, validated
from .hiprec.constants import COEFFICIENTS, PRODUCTS, product_value
from .hiprec.primezeta import ONE_MOD_3, TWO_MOD_3, prime_zeta_mp, prime_zeta_mod3_mp
from .hiprec.products import ClassProduct, ProductFactor, euler_product, head_product
from .hiprec.zeta import l_series_mp, zeta_mp
from .residues import CLOSED_FORM_KINDS, OracleScratch, ProblemKind, count_formula

F = Fraction

PUBLISHED_CONSTANTS = {
    "K_cbrt_unity": "0.9410349413195354517900322",
    "K_squares_units": "0.8121057111631225117062509",
    "K_cubes_units": "0.9477556177621765519078142",
    "K_cbrt_nullity": "0.2867474284344787341078927",
    "K_squares_ring": "1.2569136102101885959492115",
    "K_cubes_ring": "1.4225831466986636811460982",
}

GOLDEN_HEAD = F(3247695, 3430336)
GOLDEN_ROWS = {
    2: "0.9409438379523896292195206",
    3: "0.9410387732177050567463275",
    4: "0.9410348096648041499806620",
    5: "0.9410349470255355752383278",
    10: "0.9410349413195343277214763",
    15: "0.9410349413195354517903566",
}

PUBLISHED_COEFFICIENTS = {
    "cbrt_unity_sum": "0.317",
    "squares_units_sum": "0.246",
    "cubes_units_sum": "0.330",
    "squares_ring_sum": "0.376",
    "cubes_ring_sum": "0.484",
}

# Checks known to miss their stated tolerance, with the reason; see the README.
KNOWN_MISSES = {
    "form cbrt_nullity": "logarithmic approach: ratio ~ 1 + 13/ln N",
    "target 3^omega_tilde (9,1)": "logarithmic approach: ratio ~ 1 + 4.5/ln N",
    "target 3^omega_tilde (9,4)": "logarithmic approach: ratio ~ 1 + 4.5/ln N",
    "target 3^omega_tilde (9,7)": "logarithmic approach: ratio ~ 1 + 4.5/ln N",
    "cubes_units_sum": "published print 0.330... is truncated",
    "squares_ring_sum": "published print 0.376... is truncated",
    "cubes_ring_sum": "published print 0.484... is truncated",
}

DIGITS = 30


@dataclass
class Check:
    criterion: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.note}]" if self.note and not self.passed else ""
        return f"{status}  [{self.criterion}] {self.name}: {self.detail} ({self.seconds:.1f} s){extra}"


@dataclass
class SuiteResult:
    suite: str
    fast: bool
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _timed(fn: Callable[[], tuple[bool, str]]) -> tuple[bool, str, float]:
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# ---------------------------------------------------------------- 1, 2, 3, 9: constants and products


def check_constant(name: str, digits: int = DIGITS, time_limit: float = 10.0) -> Check:
    expected = PUBLISHED_CONSTANTS[name]
    places = len(expected.split(".")[1])

    def run():
        text = product_value(name, digits).fixed(places, truncate=True)
        return text == expected, f"{text} vs {expected}"

    ok, detail, dt = _timed(run)
    if dt >= time_limit:
        ok, detail = False, detail + f"; exceeded {time_limit:.0f} s"
    return Check(1, name, ok, detail, dt)


GOLDEN_SPEC = ClassProduct(ONE_MOD_3, [ProductFactor.of(1, -1), ProductFactor.of(1, 2), ProductFactor.of(1, 1, exponent=-1)])


def check_golden_trace(time_limit: float = 5.0) -> list[Check]:
    out = []
    t0 = time.perf_counter()
    head, numeric = head_product(GOLDEN_SPEC, 31)
    ok = head == GOLDEN_HEAD and not numeric
    out.append(Check(2, "head product at cutoff 31", ok, f"{head} vs {GOLDEN_HEAD}", time.perf_counter() - t0))
    for n, expected in GOLDEN_ROWS.items():
        t1 = time.perf_counter()
        got = euler_product([GOLDEN_SPEC], cutoff=31, digits=DIGITS, max_n=n).value
        text = got.fixed(25, truncate=True)
        out.append(Check(2, f"truncated at n={n}", text == expected, f"{text} vs {expected}", time.perf_counter() - t1))
    total = time.perf_counter() - t0
    out.append(Check(2, "golden trace runtime", total < time_limit, f"{total:.2f} s < {time_limit:.0f} s", total))
    return out


def check_coefficients() -> list[Check]:
    out = []
    for name, expected in PUBLISHED_COEFFICIENTS.items():
        t0 = time.perf_counter()
        value = COEFFICIENTS[name].evaluate(20)
        ok = abs(float(value.value) - float(expected)) <= 5e-4
        detail = f"{value.fixed(6)} vs {expected} +- 0.0005; truncates to {value.fixed(3, truncate=True)}"
        out.append(Check(3, name, ok, f"{COEFFICIENTS[name]} = {detail}", time.perf_counter() - t0, KNOWN_MISSES.get(name, "")))
    return out


def _within(got: float, expected: float, tol: float) -> tuple[bool, str]:
    return abs(got - expected) <= tol, f"{got:.6f} vs {expected} +- {tol}"


def check_cutoff_invariance() -> Check:
    def run():
        ctx = mpctx()
        parts = PRODUCTS["K_cbrt_unity"].parts
        vals = {c: euler_product(parts, cutoff=c, digits=DIGITS).value for c in (7, 31, 101)}
        with ctx.workdps(DIGITS + 10):
            ok = agree(vals[7].value, vals[31].value, 28) and agree(vals[31].value, vals[101].value, 28)
        return ok, " / ".join(f"{c}: {v.fixed(30)}" for c, v in vals.items())

    ok, detail, dt = _timed(run)
    return Check(9, "K_cbrt_unity cutoff invariance {7, 31, 101} to 28 digits", ok, detail, dt)


# ---------------------------------------------------------------- 4, 5: exact counts


def check_oracle_equivalence(limit: int = 10**4, n_random: int = 1000, hi: int = 10**6, seed: int = 20240101) -> Check:
    rng = random.Random(seed)
    sample = list(range(1, limit + 1)) + rng.sample(range(limit + 1, hi + 1), n_random)

    def run():
        bad = []
        for n in sample:
            scratch = OracleScratch(n)
            f = arith.factorize(n)
            for kind in CLOSED_FORM_KINDS:
                if count_formula(kind, f).value != scratch.count(kind):
                    bad.append((kind.value, n))
        return not bad, f"{len(sample)} values x {len(CLOSED_FORM_KINDS)} problems, mismatches: {bad[:5] or 0}"

    ok, detail, dt = _timed(run)
    if dt >= 120:
        ok, detail = False, detail + "; exceeded 120 s"
    return Check(4, "formula = oracle", ok, detail, dt)


def check_duality(limit: int = 10**4) -> Check:
    def run():
        bad = []
        for n in range(1, limit + 1):
            s = OracleScratch(n)
            phi = arith.euler_phi(n)
            if s.count(ProblemKind.SQUARES_UNITS) * s.count(ProblemKind.SQRT_UNITY) != phi:
                bad.append(("squares", n))
            if s.count(ProblemKind.CUBES_UNITS) * s.count(ProblemKind.CBRT_UNITY) != phi:
                bad.append(("cubes", n))
        return not bad, f"n <= {limit}, oracle counts, mismatches: {bad[:5] or 0}"

    ok, detail, dt = _timed(run)
    return Check(5, "b(n) a(n) = phi(n) in both unit groups", ok, detail, dt)


# ---------------------------------------------------------------- 6, 7, 10: sums


def _ratio_of(name: str, N: int, prog, total) -> float:
    return float(build_report(name, N, prog, [(N, total)], "sieve").ratio.value)


def check_phi_sum(N: int = 10**6) -> Check:
    def run():
        rep = partial_sum("phi", N)
        return _within(float(rep.ratio.value), 1.0, 1e-3)

    ok, detail, dt = _timed(run)
    if dt >= 5:
        ok, detail = False, detail + "; exceeded 5 s"
    return Check(6, f"sum phi(n), N={N:.0e}, ratio in [0.999, 1.001]", ok, detail, dt)


def _trend(name: str, prog, big: int, small: int, tot_big, tot_small, tol: float) -> tuple[bool, str]:
    rb = _ratio_of(name, big, prog, tot_big)
    rs = _ratio_of(name, small, prog, tot_small)
    ok = abs(rb - 1) <= tol and abs(rb - 1) < abs(rs - 1)
    return ok, f"ratio {rb:.5f} at {big:.0e} (tol {tol}), {rs:.5f} at {small:.0e}"


def check_two_omega(N: int = 10**7, small: int = 10**5) -> Check:
    def run():
        big = partial_sum("2^omega", N).exact_sum
        sm = partial_sum("2^omega", small).exact_sum
        return _trend("2^omega", None, N, small, big, sm, 0.15)

    ok, detail, dt = _timed(run)
    if dt >= 60:
        ok, detail = False, detail + "; exceeded 60 s"
    return Check(6, f"sum 2^omega(n), N={N:.0e}, +-15% and trend", ok, detail, dt)


def check_all_forms(N: int = 10**7, small: int = 10**5, tol: float = 0.2) -> list[Check]:
    summands = [SIEVE_SUMMANDS[name] for name in FORMS]
    t0 = time.perf_counter()
    big = sieve_totals(summands, N, modulus=72)
    sm = sieve_totals(summands, small, modulus=72)
    shared = (time.perf_counter() - t0) / (len(FORMS) + len(progression_registry()))

    def residue_total(tt, name, k, l):
        return sum((tt.total(name, r) for r in range(72) if r % k == l), start=tt.total(name, 0) * 0)

    out = []
    for name in FORMS:
        t1 = time.perf_counter()
        ok, detail = _trend(name, None, N, small, big.total(name), sm.total(name), tol)
        label = f"form {name}"
        out.append(Check(6, label, ok, detail, shared + time.perf_counter() - t1, KNOWN_MISSES.get(label, "")))
    for t in progression_registry():
        name, k, l = t.form.name, t.modulus, t.residue
        label = f"target {name} ({k},{l})"
        t1 = time.perf_counter()
        ok, detail = _trend(name, (k, l), N, small, residue_total(big, name, k, l), residue_total(sm, name, k, l), tol)
        out.append(Check(6, label, ok, detail, shared + time.perf_counter() - t1, KNOWN_MISSES.get(label, "")))
    return out


def check_sqrt_neg_unity(N: int = 10**6) -> Check:
    def run():
        rep = partial_sum("sqrt_neg_unity", N)
        return _within(float(rep.ratio.value), 1.0, 0.05)

    ok, detail, dt = _timed(run)
    return Check(6, f"sum of x^2=-1 counts, N={N:.0e}, vs (3/(2 pi)) N", ok, detail, dt)


def check_dirichlet(N: int = 10**7) -> Check:
    def run():
        partial = dirichlet_partial_sum("sqrt_nullity", 2, N)

        def closed(dps):
            ctx = mpctx()
            z2, z3, z4 = zeta_mp(2, dps), zeta_mp(3, dps), zeta_mp(4, dps)
            with ctx.workdps(dps):
                return z3 * z2 / z4

        target = validated(closed, 20, "zeta(3) zeta(2) / zeta(4)")
        diff = abs(float(partial.value) - float(target.value))
        bound = 4 / math.sqrt(N)
        return diff <= bound, f"|{float(partial.value):.12f} - {target.fixed(12)}| = {diff:.2e} <= {bound:.2e}"

    ok, detail, dt = _timed(run)
    if dt >= 30:
        ok, detail = False, detail + "; exceeded 30 s"
    return Check(7, f"sum a(n)/n^2 (x^2=0), N={N:.0e}, vs zeta(3)zeta(2)/zeta(4)", ok, detail, dt)


def check_determinism(N: int = 10**6) -> Check:
    def run():
        summands = list(SIEVE_SUMMANDS.values())
        one = sieve_totals(summands, N, modulus=72, threads=1, block=1 << 16)
        four = sieve_totals(summands, N, modulus=72, threads=4, block=1 << 16)
        return one.totals == four.totals, f"{len(summands)} summands, N={N:.0e}, all residues mod 72 and checkpoints"

    ok, detail, dt = _timed(run)
    return Check(10, "threads 1 vs 4 give identical sums", ok, detail, dt)


# ---------------------------------------------------------------- 8: prime zeta


def direct_prime_power_sum(s: int, limit: int, residue: int | None = None) -> float:
    """sum p^-s over primes p <= limit (optionally p = residue mod 3) plus the
    tail estimate int_limit^inf dt / (t^s ln t) (halved for a residue class)."""
    p = arith.primes_upto(limit).astype(np.float64)
    if residue is not None:
        p = p[p.astype(np.int64) % 3 == residue]
    head = math.fsum(p ** (-s))
    ctx = mpctx()
    with ctx.workdps(30):
        tail = float(ctx.e1((s - 1) * ctx.log(limit)))
    return head + (tail / 2 if residue is not None else tail)


def check_prime_zeta() -> list[Check]:
    out = []
    ctx = mpctx()
    dps = DIGITS + 15
    for s in (2, 3, 4, 5):
        t0 = time.perf_counter()
        P = prime_zeta_mp(s, dps)
        a = prime_zeta_mod3_mp(ONE_MOD_3, s, dps)
        b = prime_zeta_mod3_mp(TWO_MOD_3, s, dps)
        with ctx.workdps(dps):
            rhs = a + b + ctx.mpf(3) ** (-s)
            ok = agree(P, rhs, 28)
            detail = f"P = {ctx.nstr(P, 30)}, |P - sum| = {ctx.nstr(abs(P - rhs), 3)}"
        out.append(Check(8, f"P({s}) = P31 + P32 + 3^-{s}", ok, detail, time.perf_counter() - t0))
    for s in (2, 3, F(7, 2)):
        t0 = time.perf_counter()
        L0 = l_series_mp(0, s, dps)
        z = zeta_mp(s, dps)
        with ctx.workdps(dps):
            rhs = z * (1 - ctx.mpf(3) ** (-to_mpf(s)))
            ok = agree(L0, rhs, 28)
            detail = f"|L0 - zeta(1-3^-s)| = {ctx.nstr(abs(L0 - rhs), 3)}"
        out.append(Check(8, f"L0({s}) = zeta({s}) (1 - 3^-{s})", ok, detail, time.perf_counter() - t0))
    t0 = time.perf_counter()
    direct = direct_prime_power_sum(2, 10**7)
    with ctx.workdps(dps):
        P2 = float(prime_zeta_mp(2, dps))
    rel = abs(P2 - direct) / P2
    out.append(Check(8, "P(2) vs direct sum over p <= 1e7 + tail", rel < 1e-9, f"{P2:.15f} vs {direct:.15f}, rel {rel:.1e}", time.perf_counter() - t0))
    return out


# ---------------------------------------------------------------- suite


def published_checks(fast: bool = False) -> Iterator[Check]:
    big = 10**6 if fast else 10**7
    for name in PUBLISHED_CONSTANTS:
        yield check_constant(name)
    yield from check_golden_trace()
    yield from check_coefficients()
    yield check_oracle_equivalence()
    yield check_duality()
    yield check_phi_sum()
    yield check_two_omega(big)
    yield from check_all_forms(big)
    yield check_sqrt_neg_unity()
    yield check_dirichlet(big)
    yield from check_prime_zeta()
    yield check_cutoff_invariance()
    yield check_determinism()


SUITES = {"paper": published_checks}


def run_suite(name: str, fast: bool = False, on_check: Callable[[Check], None] | None = None) -> SuiteResult:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    result = SuiteResult(name, fast)
    for check in SUITES[name](fast):
        result.checks.append(check)
        if on_check:
            on_check(check)
    return result
