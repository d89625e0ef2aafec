"""Named constants: six Euler products and the leading coefficients built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..config import DEFAULT_CUTOFF, DEFAULT_DIGITS
from ..errors import UsageError
from .bigreal import BigReal, mpctx, to_mpf, validated
from .gamma import gamma_spouge_mp
from .primezeta import ALL_PRIMES, ONE_MOD_3, THREE, TWO_MOD_3
from .products import ClassProduct, ProductFactor, euler_product

F = Fraction
_pf = ProductFactor.of


@dataclass(frozen=True)
class ProductConstant:
    name: str
    parts: tuple[ClassProduct, ...]
    published_digits: str
    conjectural: bool = False
    note: str = ""

    def evaluate(self, digits: int = DEFAULT_DIGITS, cutoff: int = DEFAULT_CUTOFF, max_n: int | None = None):
        return euler_product(self.parts, cutoff, digits, max_n)


# x = 1/p throughout
PRODUCTS: dict[str, ProductConstant] = {
    c.name: c
    for c in (
        ProductConstant(
            "K_cbrt_unity",
            (ClassProduct(ONE_MOD_3, [_pf(1, -1), _pf(1, 2), _pf(1, 1, exponent=-1)]),),
            "0.9410349413195354517900322",
            note="prod_{p=1 mod 3} (1 - 2/(p(p+1)))",
        ),
        ProductConstant(
            "K_squares_units",
            (ClassProduct(ALL_PRIMES, [_pf(1, F(1, 2)), _pf(1, -1, exponent=F(1, 2))]),),
            "0.8121057111631225117062509",
            note="prod_p (1 + 1/(2p)) (1 - 1/p)^(1/2)",
        ),
        ProductConstant(
            "K_cubes_units",
            (
                ClassProduct(THREE, [_pf(1, 1), _pf(1, -1, exponent=F(2, 3))]),
                ClassProduct(TWO_MOD_3, [_pf(1, 1), _pf(1, -1, exponent=F(2, 3))]),
                ClassProduct(ONE_MOD_3, [_pf(1, F(1, 3)), _pf(1, -1, exponent=F(2, 3))]),
            ),
            "0.9477556177621765519078142",
            note="prod_{p=3 or 2 mod 3} (1 + 1/p)(1 - 1/p)^(2/3) * prod_{p=1 mod 3} (1 + 1/(3p))(1 - 1/p)^(2/3)",
        ),
        ProductConstant(
            "K_cbrt_nullity",
            (ClassProduct(ALL_PRIMES, [_pf(1, -1, exponent=2), _pf(1, 2)]),),
            "0.2867474284344787341078927",
            note="prod_p (1 + 2/p)(1 - 1/p)^2 = zeta(2)^-1 prod_p (1 - 2/(p(p+1)))",
        ),
        ProductConstant(
            "K_squares_ring",
            (
                ClassProduct(
                    ALL_PRIMES,
                    [_pf(1, F(1, 2), 1), _pf(1, 1, exponent=-1), _pf(1, 0, 1, exponent=-1), _pf(1, -1, exponent=F(-1, 2))],
                ),
            ),
            "1.2569136102101885959492115",
            note="prod_p (1 - (p^2+2)/(2(p^2+1)(p+1))) (1 - 1/p)^(-1/2)",
        ),
        ProductConstant(
            "K_cubes_ring",
            (
                ClassProduct(THREE, [_pf(1, -1, exponent=F(-1, 3))]),
                ClassProduct(
                    TWO_MOD_3,
                    [
                        _pf(1, 1, 1, 0, 1),
                        _pf(1, 1, exponent=-1),
                        _pf(1, 0, 1, 0, 1, exponent=-1),
                        _pf(1, -1, exponent=F(-1, 3)),
                    ],
                ),
                ClassProduct(
                    ONE_MOD_3,
                    [
                        _pf(1, F(1, 3), 1, 0, 1),
                        _pf(1, 1, exponent=-1),
                        _pf(1, 0, 1, 0, 1, exponent=-1),
                        _pf(1, -1, exponent=F(-1, 3)),
                    ],
                ),
            ),
            "1.4225831466986636811460982",
            conjectural=True,
            note="(1 - 1/3)^(-1/3) prod_{p=2 mod 3} (1 - (p^2+1)/((p^4+p^2+1)(p+1))) (1 - 1/p)^(-1/3)"
            " * prod_{p=1 mod 3} (1 - (2p^4+3p^2+3)/(3(p^4+p^2+1)(p+1))) (1 - 1/p)^(-1/3)",
        ),
    )
}


# closed-form multipliers: name -> (dps -> mpf)
def _pi_pow(k: int) -> Callable[[int], object]:
    def f(dps: int):
        ctx = mpctx()
        with ctx.workdps(dps):
            return ctx.pi ** k

    return f


def _sqrt3_over_2pi(dps: int):
    ctx = mpctx()
    with ctx.workdps(dps):
        return ctx.sqrt(3) / (2 * ctx.pi)


def _inv_sqrt_pi(dps: int):
    ctx = mpctx()
    with ctx.workdps(dps):
        return 1 / ctx.sqrt(ctx.pi)


def _inv_gamma_two_thirds(dps: int):
    ctx = mpctx()
    g = gamma_spouge_mp(F(2, 3), dps)
    with ctx.workdps(dps):
        return 1 / g


CLOSED_FORMS: dict[str, tuple[str, Callable[[int], object]]] = {
    "1": ("1", lambda dps: mpctx().mpf(1)),
    "pi^-2": ("1/pi^2", _pi_pow(-2)),
    "pi^-1": ("1/pi", _pi_pow(-1)),
    "sqrt3/2pi": ("sqrt(3)/(2 pi)", _sqrt3_over_2pi),
    "1/sqrt(pi)": ("1/sqrt(pi)", _inv_sqrt_pi),
    "1/gamma(2/3)": ("1/Gamma(2/3)", _inv_gamma_two_thirds),
}


@dataclass(frozen=True)
class Coefficient:
    """scalar * closed_form * product: a symbolic leading coefficient."""

    scalar: Fraction
    closed: str = "1"
    product: str | None = None

    def __str__(self) -> str:
        bits = []
        if self.scalar != 1:
            bits.append(str(self.scalar))
        if self.closed != "1":
            bits.append(CLOSED_FORMS[self.closed][0])
        if self.product:
            bits.append(self.product)
        return " * ".join(bits) or "1"

    def scaled(self, factor: Fraction) -> Coefficient:
        return Coefficient(self.scalar * factor, self.closed, self.product)

    @property
    def conjectural(self) -> bool:
        return bool(self.product) and PRODUCTS[self.product].conjectural

    def evaluate_mp(self, dps: int, cutoff: int = DEFAULT_CUTOFF):
        ctx = mpctx()
        closed = CLOSED_FORMS[self.closed][1](dps)
        prod = None
        if self.product:
            prod = product_value(self.product, dps, cutoff).value
        with ctx.workdps(dps):
            out = to_mpf(self.scalar) * closed
            if prod is not None:
                out *= prod
            return out

    def evaluate(self, digits: int = DEFAULT_DIGITS) -> BigReal:
        return validated(lambda dps: self.evaluate_mp(dps), digits, f"coefficient {self}")


# leading coefficient of sum_{n<=N} w(n) ~ coef * N^alpha (ln N)^beta, keyed by summand name
COEFFICIENTS: dict[str, Coefficient] = {
    "phi_sum": Coefficient(F(3), "pi^-2"),
    "two_omega_sum": Coefficient(F(6), "pi^-2"),
    "sqrt_unity_sum": Coefficient(F(6), "pi^-2"),
    "three_omega_tilde_sum": Coefficient(F(1), "sqrt3/2pi", "K_cbrt_unity"),
    "cbrt_unity_sum": Coefficient(F(11, 9), "sqrt3/2pi", "K_cbrt_unity"),
    "phi_two_omega_sum": Coefficient(F(1, 2), "1/sqrt(pi)", "K_squares_units"),
    "squares_units_sum": Coefficient(F(43, 80), "1/sqrt(pi)", "K_squares_units"),
    "phi_three_omega_tilde_sum": Coefficient(F(1, 2), "1/gamma(2/3)", "K_cubes_units"),
    "cubes_units_sum": Coefficient(F(17, 36), "1/gamma(2/3)", "K_cubes_units"),
    "sqrt_nullity_sum": Coefficient(F(3), "pi^-2"),
    "cbrt_nullity_sum": Coefficient(F(1, 12), "1", "K_cbrt_nullity"),
    "squares_ring_sum": Coefficient(F(17, 32), "1/sqrt(pi)", "K_squares_ring"),
    "cubes_ring_sum": Coefficient(F(6, 13), "1/gamma(2/3)", "K_cubes_ring"),
    "sqrt_neg_unity_sum": Coefficient(F(3, 2), "pi^-1"),
}

# published 3-decimal prints of some assembled coefficients (truncated, not rounded)
PUBLISHED_COEFFICIENTS = {
    "cbrt_unity_sum": "0.317",
    "squares_units_sum": "0.246",
    "cubes_units_sum": "0.330",
    "squares_ring_sum": "0.376",
    "cubes_ring_sum": "0.484",
}

# which product feeds which sum coefficient
PRODUCT_TO_COEFFICIENT = {
    "K_cbrt_unity": "cbrt_unity_sum",
    "K_squares_units": "squares_units_sum",
    "K_cubes_units": "cubes_units_sum",
    "K_cbrt_nullity": "cbrt_nullity_sum",
    "K_squares_ring": "squares_ring_sum",
    "K_cubes_ring": "cubes_ring_sum",
}


def product_value(name: str, dps: int, cutoff: int = DEFAULT_CUTOFF, max_n: int | None = None):
    """Raw evaluation of a registry product; memoized per precision."""
    if name not in PRODUCTS:
        raise UsageError(f"unknown product constant {name!r}")
    from .bigreal import memo

    key = ("product", name, dps, cutoff, max_n)
    cache = memo()
    if key not in cache:
        cache[key] = PRODUCTS[name].evaluate(dps, cutoff, max_n).value
    return cache[key]


@dataclass
class ConstantResult:
    name: str
    value: BigReal
    conjectural: bool
    kind: str  # "product" | "coefficient"
    definition: str
    published_digits: str | None = None
    metadata: dict = field(default_factory=dict)


def names() -> list[str]:
    return list(PRODUCTS) + list(COEFFICIENTS)


def constant(name: str, digits: int = DEFAULT_DIGITS, cutoff: int = DEFAULT_CUTOFF) -> ConstantResult:
    if name in PRODUCTS:
        spec = PRODUCTS[name]
        value = product_value(name, digits, cutoff)
        meta = {}
        coef_name = PRODUCT_TO_COEFFICIENT.get(name)
        if coef_name:
            coef = COEFFICIENTS[coef_name]
            meta = {
                "coefficient_name": coef_name,
                "coefficient_expression": str(coef),
                "coefficient": coef.evaluate(digits),
            }
        return ConstantResult(name, value, spec.conjectural, "product", spec.note, spec.published_digits, meta)
    if name in COEFFICIENTS:
        coef = COEFFICIENTS[name]
        return ConstantResult(
            name,
            coef.evaluate(digits),
            coef.conjectural,
            "coefficient",
            str(coef),
            PUBLISHED_COEFFICIENTS.get(name),
        )
    raise UsageError(f"unknown constant {name!r}; known: {', '.join(names())}")
