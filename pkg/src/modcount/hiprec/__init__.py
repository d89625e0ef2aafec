"""High-precision evaluation: zeta and L-series, Gamma, prime zeta functions, prime products."""

from .bigreal import BigReal, validated
from .constants import COEFFICIENTS, PRODUCTS, Coefficient, ConstantResult, constant
from .gamma import gamma, gamma_two_thirds
from .primezeta import PrimeClass, prime_zeta, prime_zeta_class, prime_zeta_mod3
from .products import (
    ClassProduct,
    LogSeriesExpansion,
    ProductFactor,
    euler_product,
    expand_log_series,
    parse_product_spec,
    prime_product,
)
from .zeta import hurwitz_zeta, l_series_mod3, riemann_zeta

__all__ = [
    "BigReal",
    "COEFFICIENTS",
    "ClassProduct",
    "Coefficient",
    "ConstantResult",
    "LogSeriesExpansion",
    "PRODUCTS",
    "PrimeClass",
    "ProductFactor",
    "constant",
    "euler_product",
    "expand_log_series",
    "gamma",
    "gamma_two_thirds",
    "hurwitz_zeta",
    "l_series_mod3",
    "parse_product_spec",
    "prime_product",
    "prime_zeta",
    "prime_zeta_class",
    "prime_zeta_mod3",
    "riemann_zeta",
    "validated",
]
