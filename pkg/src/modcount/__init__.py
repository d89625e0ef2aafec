"""Counting roots and power residues modulo n: exact counts, partial sums, and
the high-precision constants in their asymptotic laws."""

from .arith import Factorization, factorize, is_prime
from .errors import CapExceeded, DivergentProduct, MathPreconditionError, ModcountError, UsageError
from .residues import ProblemKind, count, count_formula, count_oracle, local_factor

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "DivergentProduct",
    "Factorization",
    "MathPreconditionError",
    "ModcountError",
    "ProblemKind",
    "UsageError",
    "count",
    "count_formula",
    "count_oracle",
    "factorize",
    "is_prime",
    "local_factor",
]
