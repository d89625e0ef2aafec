"""Exact partial sums of multiplicative summands by a segmented sieve, compared with
their predicted main terms coef * N^alpha * (ln N)^beta.

Each segment is factored once (small primes by strided division, the leftover
cofactor is a single large prime), after which any number of summands are
evaluated from per-prime local-factor tables.  Segment totals are exact Python
integers (or Fractions for phi/2^omega and phi/3^omega_tilde, grouped by the
exponent of the denominator) and are merged in segment order, so results do not
depend on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import config
from .arith import primes_upto
from .errors import CapExceeded, UsageError
from .hiprec.bigreal import BigReal, mpctx, to_mpf
from .hiprec.constants import COEFFICIENTS, Coefficient
from .residues import ProblemKind, count_oracle, local_factor, sqrt_neg_unity_rule, validate_sqrt_neg_unity_rule

F = Fraction
REPORT_DIGITS = 20
SIXTH_POWERS_SUM_CAP = 10**4
MIN_CHECKPOINT = 3


# ---------------------------------------------------------------- summands


def _phi_local(p: int, r: int) -> int:
    return p ** (r - 1) * (p - 1)


@dataclass(frozen=True)
class Summand:
    """n -> f(n) / base^g(n) with f multiplicative and g additive (g(p^r) = hit(p) in {0, 1})."""

    name: str
    local: Callable[[int, int], int]
    prime_values: Callable[[np.ndarray], np.ndarray]  # f(q) for primes q
    base: int = 1
    hit: Callable[[np.ndarray], np.ndarray] | None = None
    kind: ProblemKind | None = None

    @property
    def grouped(self) -> bool:
        return self.base != 1

    @property
    def conjectural(self) -> bool:
        return self.kind is not None and self.kind.conjectural

    def value(self, n: int) -> Fraction | int:
        """Slow reference evaluation at a single n."""
        from .arith import factorize

        num, g = 1, 0
        for p, r in factorize(n):
            num *= self.local(p, r)
            if self.grouped and self.hit(np.array([p]))[0]:
                g += 1
        return F(num, self.base**g) if self.grouped else num


def _where_mod3(q: np.ndarray, one, other) -> np.ndarray:
    return np.where(q % 3 == 1, one, other)


_KIND_PRIME_VALUES: dict[ProblemKind, Callable[[np.ndarray], np.ndarray]] = {
    ProblemKind.SQRT_UNITY: lambda q: np.full_like(q, 2),
    ProblemKind.CBRT_UNITY: lambda q: _where_mod3(q, 3, 1),
    ProblemKind.SQRT_NULLITY: lambda q: np.ones_like(q),
    ProblemKind.CBRT_NULLITY: lambda q: np.ones_like(q),
    ProblemKind.SQUARES_UNITS: lambda q: (q - 1) // 2,
    ProblemKind.CUBES_UNITS: lambda q: _where_mod3(q, (q - 1) // 3, q - 1),
    ProblemKind.SQUARES_RING: lambda q: (q + 1) // 2,
    ProblemKind.CUBES_RING: lambda q: _where_mod3(q, (q + 2) // 3, q),
    ProblemKind.SQRT_NEG_UNITY: lambda q: np.where(q % 4 == 1, 2, 0),
}


def _kind_summand(kind: ProblemKind) -> Summand:
    local = sqrt_neg_unity_rule if kind is ProblemKind.SQRT_NEG_UNITY else (lambda p, r, k=kind: local_factor(k, p, r))
    return Summand(kind.value, local, _KIND_PRIME_VALUES[kind], kind=kind)


_ALL = lambda q: np.ones_like(q, dtype=bool)  # noqa: E731
_ONE_MOD_3 = lambda q: q % 3 == 1  # noqa: E731

AUXILIARY: dict[str, Summand] = {
    s.name: s
    for s in (
        Summand("phi", _phi_local, lambda q: q - 1),
        Summand("2^omega", lambda p, r: 2, lambda q: np.full_like(q, 2)),
        Summand("3^omega_tilde", lambda p, r: 3 if p % 3 == 1 else 1, lambda q: _where_mod3(q, 3, 1)),
        Summand("phi/2^omega", _phi_local, lambda q: q - 1, base=2, hit=_ALL),
        Summand("phi/3^omega_tilde", _phi_local, lambda q: q - 1, base=3, hit=_ONE_MOD_3),
    )
}

_ALIASES = {
    "two_omega": "2^omega",
    "three_omega_tilde": "3^omega_tilde",
    "phi_two_omega": "phi/2^omega",
    "phi_three_omega_tilde": "phi/3^omega_tilde",
}

SIEVE_SUMMANDS: dict[str, Summand] = {
    **AUXILIARY,
    **{k.value: _kind_summand(k) for k in ProblemKind if k is not ProblemKind.SIXTH_POWERS_RING},
}


def summand_names() -> list[str]:
    return list(AUXILIARY) + [k.value for k in ProblemKind]


def get_summand(name: str) -> Summand | None:
    """Sieve summand by name; None for sixth_powers_ring (oracle loop only)."""
    name = _ALIASES.get(name, name)
    if name == ProblemKind.SIXTH_POWERS_RING.value:
        return None
    try:
        return SIEVE_SUMMANDS[name]
    except KeyError:
        raise UsageError(f"unknown summand {name!r}; expected one of {', '.join(summand_names())}") from None


def canonical_name(name: str) -> str:
    name = _ALIASES.get(name, name)
    if name not in summand_names():
        raise UsageError(f"unknown summand {name!r}; expected one of {', '.join(summand_names())}")
    return name


# ---------------------------------------------------------------- forms and progressions


@dataclass(frozen=True)
class AsymptoticForm:
    name: str
    coefficient: Coefficient
    alpha: Fraction
    beta: Fraction

    @property
    def conjectural(self) -> bool:
        return self.coefficient.conjectural

    def predicted_mp(self, N: int, coefficient_value, dps: int):
        ctx = mpctx()
        with ctx.workdps(dps):
            lnN = ctx.log(N)
            return coefficient_value * ctx.mpf(N) ** to_mpf(self.alpha) * lnN ** to_mpf(self.beta)

    def describe(self) -> str:
        a, b = self.alpha, self.beta
        shape = "N" if a == 1 else f"N^{a}"
        if b:
            shape += " ln N" if b == 1 else f" (ln N)^({b})"
        return f"({self.coefficient}) {shape}"


def _form(name: str, coef: str, alpha, beta) -> AsymptoticForm:
    return AsymptoticForm(name, COEFFICIENTS[coef], F(alpha), F(beta))


FORMS: dict[str, AsymptoticForm] = {
    f.name: f
    for f in (
        _form("phi", "phi_sum", 2, 0),
        _form("2^omega", "two_omega_sum", 1, 1),
        _form("3^omega_tilde", "three_omega_tilde_sum", 1, 1),
        _form("phi/2^omega", "phi_two_omega_sum", 2, F(-1, 2)),
        _form("phi/3^omega_tilde", "phi_three_omega_tilde_sum", 2, F(-1, 3)),
        _form("sqrt_unity", "sqrt_unity_sum", 1, 1),
        _form("cbrt_unity", "cbrt_unity_sum", 1, 1),
        _form("squares_units", "squares_units_sum", 2, F(-1, 2)),
        _form("cubes_units", "cubes_units_sum", 2, F(-1, 3)),
        _form("sqrt_nullity", "sqrt_nullity_sum", 1, 1),
        _form("cbrt_nullity", "cbrt_nullity_sum", 1, 2),
        _form("squares_ring", "squares_ring_sum", 2, F(-1, 2)),
        _form("cubes_ring", "cubes_ring_sum", 2, F(-1, 3)),
        _form("sqrt_neg_unity", "sqrt_neg_unity_sum", 1, 0),
    )
}


@dataclass(frozen=True)
class ProgressionTarget:
    modulus: int
    residue: int
    form: AsymptoticForm


def _targets(summand: str, modulus: int, scalar_of: Callable[[int], Fraction]) -> list[ProgressionTarget]:
    base = FORMS[summand]
    # registry scalars are relative to the unrestricted coefficient's product/closed-form part
    out = []
    for res in range(modulus):
        coef = Coefficient(scalar_of(res), base.coefficient.closed, base.coefficient.product)
        out.append(ProgressionTarget(modulus, res, AsymptoticForm(summand, coef, base.alpha, base.beta)))
    return out


@lru_cache(maxsize=1)
def progression_registry() -> tuple[ProgressionTarget, ...]:
    """Main terms of progression-restricted sums n = l (mod k)."""
    return tuple(
        # 2^omega: 1/(2 pi^2) for odd l, 1/pi^2 for even l
        _targets("2^omega", 8, lambda l: F(1, 2) if l % 2 else F(1))
        # 3^omega_tilde: C/9 for every l, C = sqrt(3)/(2 pi) K
        + _targets("3^omega_tilde", 9, lambda l: F(1, 9))
        # phi/2^omega: C/10 for odd l, C/40 for even l, C = K/sqrt(pi)
        + _targets("phi/2^omega", 8, lambda l: F(1, 10) if l % 2 else F(1, 40))
        # phi/3^omega_tilde: C/16 when 3 does not divide l, C/24 otherwise, C = K/Gamma(2/3)
        + _targets("phi/3^omega_tilde", 9, lambda l: F(1, 16) if l % 3 else F(1, 24))
    )


def progression_target(summand: str, modulus: int, residue: int) -> ProgressionTarget | None:
    summand = canonical_name(summand)
    for t in progression_registry():
        if t.form.name == summand and t.modulus == modulus and t.residue == residue % modulus:
            return t
    return None


# ---------------------------------------------------------------- sieve engine


@lru_cache(maxsize=None)
def _local_table(summand: Summand, p: int) -> np.ndarray:
    rmax = max(1, int(math.log(2**62) / math.log(p)))
    return np.array([summand.local(p, r) if r else 1 for r in range(rmax + 1)], dtype=np.int64)


@lru_cache(maxsize=None)
def _hit(summand: Summand, p: int) -> bool:
    return bool(summand.hit(np.array([p], dtype=np.int64))[0])


@dataclass
class _Segment:
    lo: int
    hi: int
    rem: np.ndarray  # leftover cofactor: 1 or a prime
    entries: list  # (p, positions, exponents)


def _factor_segment(lo: int, hi: int, primes: np.ndarray) -> _Segment:
    n = np.arange(lo, hi, dtype=np.int64)
    rem = n.copy()
    entries = []
    L = hi - lo
    # 2 and 3 always go through the tables: the large-prime formulas assume q > 3
    top = max(math.isqrt(hi - 1), 3)
    for p in primes[: np.searchsorted(primes, top, side="right")]:
        p = int(p)
        start = (-lo) % p
        if start >= L:
            continue
        pos = np.arange(start, L, p)
        vals = n[pos]
        e = np.ones(len(pos), dtype=np.int64)
        pk = p * p
        while pk < hi:
            d = vals % pk == 0
            if not d.any():
                break
            e += d
            pk *= p
        rem[pos] //= np.power(p, e)
        entries.append((p, pos, e))
    return _Segment(lo, hi, rem, entries)


def _evaluate(seg: _Segment, summand: Summand) -> tuple[np.ndarray, np.ndarray | None]:
    L = seg.hi - seg.lo
    vals = np.ones(L, dtype=np.int64)
    g = np.zeros(L, dtype=np.int8) if summand.grouped else None
    for p, pos, e in seg.entries:
        vals[pos] *= _local_table(summand, p)[e]
        if g is not None and _hit(summand, p):
            g[pos] += 1
    big = np.nonzero(seg.rem > 1)[0]
    if len(big):
        q = seg.rem[big]
        vals[big] *= summand.prime_values(q)
        if g is not None:
            g[big] += summand.hit(q).astype(np.int8)
    return vals, g


def segment_values(lo: int, hi: int, summand: Summand) -> tuple[np.ndarray, np.ndarray | None]:
    """Numerators and denominator exponents of the summand over [lo, hi)."""
    if lo < 1 or hi <= lo:
        raise UsageError(f"bad range [{lo}, {hi})")
    return _evaluate(_factor_segment(lo, hi, primes_upto(max(math.isqrt(hi - 1), 3))), summand)


def _residue_totals(lo: int, vals: np.ndarray, g: np.ndarray | None, modulus: int, base: int) -> list:
    out = []
    for res in range(modulus):
        start = (res - lo) % modulus
        v = vals[start::modulus]
        if g is None:
            out.append(int(v.sum()))
            continue
        gs = g[start::modulus]
        total = F(0)
        for gv in np.unique(gs):
            total += F(int(v[gs == gv].sum()), base ** int(gv))
        out.append(total)
    return out


def checkpoints(N: int) -> list[int]:
    """Ceil(N / 2^j) for j = 0, 1, ... down to MIN_CHECKPOINT, ascending."""
    pts, c = set(), N
    j = 0
    while True:
        c = -(-N // (1 << j))
        if c < MIN_CHECKPOINT:
            break
        pts.add(c)
        j += 1
    return sorted(pts)


def _segments(N: int, cps: Sequence[int], block: int) -> list[tuple[int, int]]:
    edges = set(range(1, N + 1, block)) | {c + 1 for c in cps} | {N + 1}
    edges = sorted(e for e in edges if 1 <= e <= N + 1)
    return [(a, b) for a, b in zip(edges, edges[1:])]


def _check_limit(N: int, cap: int | None) -> None:
    cap = config.DEFAULT_SUM_CAP if cap is None else cap
    if N < 1:
        raise UsageError(f"limit must be >= 1, got {N}")
    if N > cap:
        raise CapExceeded(f"limit {N} exceeds the summation cap {cap}")


@dataclass
class SieveTotals:
    """Cumulative exact sums per summand, per residue mod ``modulus``, at each checkpoint."""

    N: int
    modulus: int
    checkpoints: list[int]
    totals: dict[str, list[list]]  # name -> [checkpoint index][residue]

    def total(self, name: str, residue: int | None = None, at: int | None = None):
        idx = len(self.checkpoints) - 1 if at is None else self.checkpoints.index(at)
        row = self.totals[name][idx]
        if residue is None:
            return sum(row, start=type(row[0])(0))
        return row[residue % self.modulus]


def sieve_totals(
    summands: Iterable[Summand],
    N: int,
    modulus: int = 1,
    cap: int | None = None,
    threads: int | None = None,
    block: int | None = None,
) -> SieveTotals:
    summands = list(summands)
    _check_limit(N, cap)
    if modulus < 1:
        raise UsageError("modulus must be positive")
    if any(s.kind is ProblemKind.SQRT_NEG_UNITY for s in summands):
        validate_sqrt_neg_unity_rule()
    block = config.block_size() if block is None else block
    threads = config.threads() if threads is None else threads
    cps = checkpoints(N)
    if not cps or cps[-1] != N:
        cps = sorted(set(cps) | {N})
    primes = primes_upto(max(math.isqrt(N), 3))

    def work(seg: tuple[int, int]) -> dict[str, list]:
        s = _factor_segment(seg[0], seg[1], primes)
        out = {}
        for sm in summands:
            vals, g = _evaluate(s, sm)
            out[sm.name] = _residue_totals(seg[0], vals, g, modulus, sm.base)
        return out

    segs = _segments(N, cps, block)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, segs))
    else:
        results = [work(s) for s in segs]

    totals: dict[str, list[list]] = {sm.name: [] for sm in summands}
    running = {sm.name: [F(0) if sm.grouped else 0 for _ in range(modulus)] for sm in summands}
    ci = 0
    for (lo, hi), part in zip(segs, results):
        for name, row in part.items():
            acc = running[name]
            for r in range(modulus):
                acc[r] += row[r]
        while ci < len(cps) and cps[ci] == hi - 1:
            for name in totals:
                totals[name].append(list(running[name]))
            ci += 1
    return SieveTotals(N, modulus, cps, totals)


# ---------------------------------------------------------------- reports


@dataclass
class Checkpoint:
    N: int
    exact_sum: int | Fraction
    ratio: BigReal | None


@dataclass
class SumReport:
    summand: str
    N: int
    progression: tuple[int, int] | None
    exact_sum: int | Fraction
    method: str
    form: AsymptoticForm | None = None
    coefficient: BigReal | None = None
    predicted: BigReal | None = None
    ratio: BigReal | None = None
    checkpoints: list[Checkpoint] = field(default_factory=list)
    conjectural: bool = False

    @property
    def coefficient_name(self) -> str | None:
        return str(self.form.coefficient) if self.form else None


def _ratio(exact, predicted_mp) -> BigReal:
    ctx = mpctx()
    with ctx.workdps(REPORT_DIGITS + 10):
        return BigReal(to_mpf(exact) / predicted_mp, REPORT_DIGITS)


def _form_for(name: str, progression: tuple[int, int] | None) -> AsymptoticForm | None:
    if progression is None or progression[0] == 1:
        return FORMS.get(name)
    t = progression_target(name, *progression)
    return t.form if t else None


def build_report(
    name: str,
    N: int,
    progression: tuple[int, int] | None,
    points: Sequence[tuple[int, int | Fraction]],
    method: str,
) -> SumReport:
    """Attach the predicted main term (when one is registered) to checkpoint sums."""
    form = _form_for(name, progression)
    exact = points[-1][1]
    kind_conj = name == ProblemKind.CUBES_RING.value
    report = SumReport(name, N, progression, exact, method, form, conjectural=kind_conj)
    if form is None:
        report.checkpoints = [Checkpoint(n, s, None) for n, s in points]
        return report
    coef = form.coefficient.evaluate(REPORT_DIGITS)
    dps = REPORT_DIGITS + 10
    report.coefficient = coef
    report.conjectural = kind_conj or form.conjectural
    pred = form.predicted_mp(N, coef.value, dps)
    report.predicted = BigReal(pred, REPORT_DIGITS)
    report.ratio = _ratio(exact, pred)
    report.checkpoints = [
        Checkpoint(n, s, _ratio(s, form.predicted_mp(n, coef.value, dps)) if n >= MIN_CHECKPOINT else None)
        for n, s in points
    ]
    return report


def _normalize_progression(progression) -> tuple[int, int] | None:
    if progression is None:
        return None
    try:
        k, l = (int(x) for x in progression)
    except (TypeError, ValueError):
        raise UsageError(f"progression must be a (modulus, residue) pair, got {progression!r}") from None
    if k < 1:
        raise UsageError("progression modulus must be positive")
    return (k, l % k)


def _oracle_partial_sum(name: str, N: int, progression, cap: int) -> list[tuple[int, int]]:
    if N > cap:
        raise CapExceeded(f"{name} sums use the brute-force oracle; limit {N} exceeds {cap}")
    k, l = progression or (1, 0)
    cps = set(checkpoints(N)) | {N}
    total, out = 0, []
    for n in range(1, N + 1):
        if n % k == l:
            total += count_oracle(name, n).value
        if n in cps:
            out.append((n, total))
    return out


def partial_sum(
    name: str,
    N: int,
    progression: tuple[int, int] | None = None,
    cap: int | None = None,
    threads: int | None = None,
) -> SumReport:
    """Exact sum of the summand over n <= N (optionally n = l mod k) with checkpoint ratios."""
    name = canonical_name(name)
    progression = _normalize_progression(progression)
    _check_limit(N, cap)
    summand = get_summand(name)
    if summand is None:
        points = _oracle_partial_sum(name, N, progression, SIXTH_POWERS_SUM_CAP)
        return build_report(name, N, progression, points, "oracle")
    k, l = progression or (1, 0)
    totals = sieve_totals([summand], N, k, cap=cap, threads=threads)
    points = [(c, totals.total(name, l, at=c)) for c in totals.checkpoints]
    method = "sieve"
    if summand.kind is ProblemKind.SQRT_NEG_UNITY:
        method = "sieve (oracle-validated rule)"
    return build_report(name, N, progression, points, method)


# ---------------------------------------------------------------- Dirichlet series


@dataclass
class DirichletReport:
    summand: str
    s: Fraction
    N: int
    value: BigReal
    closed_form: BigReal | None = None
    closed_form_name: str | None = None
    tail_bound: float | None = None


DIRICHLET_DIGITS = 14


def dirichlet_partial_sum(name: str, s, N: int, cap: int | None = None, threads: int | None = None) -> BigReal:
    """sum_{n<=N} w(n) n^-s.  Terms are double precision, summed exactly per segment with fsum."""
    from .hiprec.bigreal import as_rational

    name = canonical_name(name)
    s = as_rational(s)
    if s < F(3, 2):
        raise UsageError(f"s must be >= 3/2, got {s}")
    _check_limit(N, cap)
    summand = get_summand(name)
    if summand is None:
        raise UsageError(f"{name} has no sieve evaluator; Dirichlet sums are unavailable")
    if summand.kind is ProblemKind.SQRT_NEG_UNITY:
        validate_sqrt_neg_unity_rule()
    block = config.block_size()
    threads = config.threads() if threads is None else threads
    primes = primes_upto(max(math.isqrt(N), 3))
    sf = float(s)

    def work(seg):
        lo, hi = seg
        vals, g = _evaluate(_factor_segment(lo, hi, primes), summand)
        terms = vals.astype(np.float64) * np.arange(lo, hi, dtype=np.float64) ** (-sf)
        if g is not None:
            terms /= float(summand.base) ** g
        return math.fsum(terms)

    segs = [(lo, min(lo + block, N + 1)) for lo in range(1, N + 1, block)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, segs))
    else:
        parts = [work(x) for x in segs]
    ctx = mpctx()
    with ctx.workdps(DIRICHLET_DIGITS + 5):
        return BigReal(ctx.mpf(math.fsum(parts)), DIRICHLET_DIGITS)


def _zeta_ratio(num: Sequence, den: Sequence, digits: int) -> BigReal:
    from .hiprec.bigreal import validated
    from .hiprec.zeta import zeta_mp

    def compute(dps):
        ctx = mpctx()
        vals_n = [zeta_mp(x, dps) for x in num]
        vals_d = [zeta_mp(x, dps) for x in den]
        with ctx.workdps(dps):
            out = ctx.mpf(1)
            for v in vals_n:
                out *= v
            for v in vals_d:
                out /= v
            return out

    return validated(compute, digits, "Dirichlet closed form")


def dirichlet_closed_form(name: str, s, digits: int = 30) -> tuple[str, BigReal] | None:
    """Infinite-sum value where a zeta-quotient identity is known; None otherwise."""
    from .hiprec.bigreal import as_rational

    name = canonical_name(name)
    s = as_rational(s)
    if name == "sqrt_nullity":
        return "zeta(2s-1) zeta(s) / zeta(2s)", _zeta_ratio([2 * s - 1, s], [2 * s], digits)
    if name == "phi" and s - 1 >= F(3, 2):
        return "zeta(s-1) / zeta(s)", _zeta_ratio([s - 1], [s], digits)
    if name == "2^omega":
        return "zeta(s)^2 / zeta(2s)", _zeta_ratio([s, s], [2 * s], digits)
    return None


def dirichlet_report(name: str, s, N: int, cap: int | None = None) -> DirichletReport:
    from .hiprec.bigreal import as_rational

    name = canonical_name(name)
    s = as_rational(s)
    value = dirichlet_partial_sum(name, s, N, cap)
    rep = DirichletReport(name, s, N, value)
    closed = dirichlet_closed_form(name, s)
    if closed:
        rep.closed_form_name, rep.closed_form = closed
    if name == "sqrt_nullity" and s == 2:
        rep.tail_bound = 4 / math.sqrt(N)
    return rep


__all__ = [
    "AUXILIARY",
    "AsymptoticForm",
    "Checkpoint",
    "DirichletReport",
    "FORMS",
    "ProgressionTarget",
    "SieveTotals",
    "SumReport",
    "Summand",
    "checkpoints",
    "dirichlet_closed_form",
    "dirichlet_partial_sum",
    "dirichlet_report",
    "get_summand",
    "partial_sum",
    "progression_registry",
    "progression_target",
    "sieve_totals",
    "summand_names",
]
