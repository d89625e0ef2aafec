"""Exception hierarchy.  Each class carries the CLI exit code it maps to."""

from __future__ import annotations


class ModcountError(Exception):
    exit_code = 2


class UsageError(ModcountError, ValueError):
    """Malformed input: bad kind name, out-of-domain argument, unparsable spec."""

    exit_code = 2


class UnsupportedKind(UsageError):
    pass


class CapExceeded(ModcountError):
    """A configured resource cap (oracle size, summation limit, block size) was hit."""

    exit_code = 3


class MathPreconditionError(ModcountError, ArithmeticError):
    exit_code = 4


class DivergentProduct(MathPreconditionError):
    pass


class PrecisionError(MathPreconditionError):
    """Recomputation at higher precision disagreed with the published digits."""
