"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 resource cap,
4 mathematical precondition (divergent product, precision loss).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from . import __version__, asymptotics, verify
from .arith import factorize
from .config import DEFAULT_CUTOFF, DEFAULT_DIGITS, DEFAULT_ORACLE_CAP
from .errors import CapExceeded, MathPreconditionError, ModcountError, UsageError
from .hiprec.bigreal import BigReal, as_rational
from .hiprec.constants import constant as lookup_constant, names as constant_names
from .hiprec.primezeta import PrimeClass, prime_zeta_class
from .hiprec.products import euler_product, parse_product_spec, product_spec_to_json
from .residues import ProblemKind, count, count_formula, count_oracle

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAP, EXIT_MATH = 0, 1, 2, 3, 4
JSON_SAFE_INT = 2**53
SHIPPED_SPEC = "cbrt_unity_factor.json"


# ---------------------------------------------------------------- rendering


def jint(v: int) -> int | str:
    """Integers beyond 2^53 are emitted as strings so no JSON reader rounds them."""
    return v if abs(v) <= JSON_SAFE_INT else str(v)


def jexact(v: int | Fraction) -> int | str:
    if isinstance(v, Fraction):
        return jint(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return jint(v)


def jreal(v: BigReal | None, places: int | None = None, truncate: bool = False) -> dict | None:
    if v is None:
        return None
    if places is None:
        return {"value": v.decimal(), "significant_digits": v.digits}
    return {"value": v.fixed(places, truncate), "decimal_places": places}


def _exact_decimal(v: int | Fraction, places: int = 6) -> str:
    if isinstance(v, int) or v.denominator == 1:
        return str(int(v))
    k = round(v * 10**places)
    s = str(abs(k)).rjust(places + 1, "0")
    return ("-" if k < 0 else "") + s[:-places] + "." + s[-places:]


class Output:
    """One command's record: a JSON document plus a TSV table view."""

    def __init__(self, command: str, inputs: dict[str, Any]):
        self.command = command
        self.inputs = inputs
        self.results: dict[str, Any] = {}
        self.conjectural = False
        self.header: list[str] = []
        self.rows: list[list[Any]] = []
        self.started = time.perf_counter()

    def render(self, fmt: str, timing: bool) -> str:
        if fmt == "tsv":
            lines = ["\t".join(self.header)]
            lines += ["\t".join("" if c is None else str(c) for c in row) for row in self.rows]
            return "\n".join(lines)
        doc: dict[str, Any] = {
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "conjectural": self.conjectural,
        }
        if timing:
            doc["timing"] = {"seconds": round(time.perf_counter() - self.started, 6)}
        return json.dumps(doc, indent=2)


# ---------------------------------------------------------------- commands


def cmd_count(args) -> tuple[Output, int]:
    kind = ProblemKind.parse(args.problem)
    out = Output("count", {"problem": kind.value, "n": jint(args.n), "oracle": args.oracle})
    if args.n < 1:
        raise UsageError(f"n must be >= 1, got {args.n}")
    if kind.closed_form:
        res = count_formula(kind, factorize(args.n))
    else:
        res = count(kind, args.n, args.oracle_cap)
    out.conjectural = kind.conjectural
    out.results = {"value": jint(res.value), "method": res.method, "description": kind.description}
    out.header = ["problem", "n", "value", "method", "conjectural"]
    row = [kind.value, args.n, res.value, res.method, str(kind.conjectural).lower()]
    if args.oracle:
        brute = count_oracle(kind, args.n, args.oracle_cap)
        out.results["oracle"] = jint(brute.value)
        out.results["match"] = brute.value == res.value
        out.header += ["oracle", "match"]
        row += [brute.value, str(brute.value == res.value).lower()]
    out.rows = [row]
    code = EXIT_OK if out.results.get("match", True) else EXIT_VERIFY
    return out, code


def _progression(args) -> tuple[int, int] | None:
    if args.mod is None and args.res is None:
        return None
    if args.mod is None or args.res is None:
        raise UsageError("--mod and --res go together")
    if args.mod < 1:
        raise UsageError("--mod must be positive")
    return (args.mod, args.res)


def cmd_sum(args) -> tuple[Output, int]:
    name = args.problem or args.weight
    name = asymptotics.canonical_name(name)
    prog = _progression(args)
    out = Output("sum", {"summand": name, "limit": jint(args.limit), "mod": args.mod, "res": args.res})
    rep = asymptotics.partial_sum(name, args.limit, prog, cap=args.cap)
    out.conjectural = rep.conjectural
    form = rep.form
    out.results = {
        "exact_sum": jexact(rep.exact_sum),
        "method": rep.method,
        "form": None
        if form is None
        else {"coefficient": str(form.coefficient), "alpha": str(form.alpha), "beta": str(form.beta), "law": form.describe()},
        "coefficient": jreal(rep.coefficient),
        "predicted": jreal(rep.predicted),
        "ratio": jreal(rep.ratio),
        "checkpoints": [{"N": jint(c.N), "exact_sum": jexact(c.exact_sum), "ratio": jreal(c.ratio)} for c in rep.checkpoints],
    }
    if isinstance(rep.exact_sum, Fraction):
        out.results["exact_sum_decimal"] = _exact_decimal(rep.exact_sum)
    out.header = ["N", "exact_sum", "ratio"]
    out.rows = [[c.N, jexact(c.exact_sum), c.ratio.decimal() if c.ratio else ""] for c in rep.checkpoints]
    return out, EXIT_OK


def _digits(args) -> int:
    if args.digits < 1 or args.digits > 1000:
        raise UsageError("--digits must lie in [1, 1000]")
    return args.digits


def _at_places(compute, places: int) -> BigReal:
    """Evaluate with enough significant digits that ``places`` decimals are all correct."""
    value = compute(places)
    if value.value:
        lead = math.floor(math.log10(abs(float(value.value)))) + 1
        if lead > 0:
            value = compute(places + lead)
    return value


def cmd_constant(args) -> tuple[Output, int]:
    if args.list:
        out = Output("constant", {"list": True})
        out.results = {"names": constant_names()}
        out.header = ["name"]
        out.rows = [[n] for n in constant_names()]
        return out, EXIT_OK
    if not args.name:
        raise UsageError("--name is required (or use --list)")
    places = _digits(args)
    out = Output("constant", {"name": args.name, "digits": places, "cutoff": args.cutoff})
    res = _at_places(lambda d: lookup_constant(args.name, d, args.cutoff).value, places)
    info = lookup_constant(args.name, places, args.cutoff)
    out.conjectural = info.conjectural
    out.results = {
        "value": res.fixed(places, args.truncate),
        "decimal_places": places,
        "rounding": "truncate" if args.truncate else "half-even",
        "kind": info.kind,
        "definition": info.definition,
        "published_digits": info.published_digits,
    }
    meta = info.metadata
    if meta:
        out.results["coefficient"] = {
            "name": meta["coefficient_name"],
            "expression": meta["coefficient_expression"],
            "value": meta["coefficient"].fixed(places),
        }
    out.header = ["name", "value", "decimal_places", "conjectural"]
    out.rows = [[args.name, out.results["value"], places, str(info.conjectural).lower()]]
    return out, EXIT_OK


def cmd_primezeta(args) -> tuple[Output, int]:
    places = _digits(args)
    s = as_rational(args.s)
    cls = PrimeClass.parse(args.prime_class)
    out = Output("primezeta", {"s": str(s), "class": str(cls), "digits": places})
    value = _at_places(lambda d: prime_zeta_class(cls, s, d), places)
    out.results = {
        "value": value.fixed(places, args.truncate),
        "decimal_places": places,
        "scientific": value.sci(min(places, 30)),
    }
    out.header = ["s", "class", "value"]
    out.rows = [[str(s), str(cls), out.results["value"]]]
    return out, EXIT_OK


def _load_spec(path: str | None) -> tuple[dict, str]:
    if path is None:
        text = resources.files("modcount.data").joinpath(SHIPPED_SPEC).read_text()
        return json.loads(text), f"(shipped) {SHIPPED_SPEC}"
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read spec file {path}: {exc.strerror}") from None
    try:
        return json.loads(text), path
    except json.JSONDecodeError as exc:
        raise UsageError(f"spec file {path} is not valid JSON: {exc}") from None


def cmd_primeproduct(args) -> tuple[Output, int]:
    places = _digits(args)
    doc, source = _load_spec(args.spec)
    part = parse_product_spec(doc)
    if args.max_n is not None and args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    cutoff = args.cutoff
    out = Output("primeproduct", {"spec": source, "cutoff": cutoff, "digits": places, "max_n": args.max_n})
    evals: list = []

    def compute(d):
        ev = euler_product([part], cutoff, d, args.max_n, allow_conditional=False)
        evals.append(ev)
        return ev.value

    value = _at_places(compute, places)
    ev = evals[-1]
    out.results = {
        "value": value.fixed(places, args.truncate),
        "decimal_places": places,
        "rounding": "truncate" if args.truncate else "half-even",
        "head_exact": None if ev.has_numeric_head else f"{ev.head_exact.numerator}/{ev.head_exact.denominator}",
        "n_terms": ev.n_terms,
        "spec": product_spec_to_json(part),
    }
    out.header = ["cutoff", "n_terms", "value"]
    out.rows = [[cutoff, ev.n_terms, out.results["value"]]]
    return out, EXIT_OK


def cmd_verify(args) -> tuple[Output, int]:
    out = Output("verify", {"suite": args.suite, "fast": args.fast})
    echo = sys.stderr if args.progress else None

    def on_check(c):
        if echo:
            print(c.line(), file=echo, flush=True)

    result = verify.run_suite(args.suite, fast=args.fast, on_check=on_check)
    timing = not args.no_timing
    out.results = {
        "passed": result.passed,
        "n_checks": len(result.checks),
        "n_failed": len(result.failures),
        "failures": [c.name for c in result.failures],
        "checks": [
            {
                "criterion": c.criterion,
                "name": c.name,
                "passed": c.passed,
                "detail": c.detail,
                **({"seconds": round(c.seconds, 3)} if timing else {}),
                **({"note": c.note} if c.note else {}),
            }
            for c in result.checks
        ],
    }
    out.header = ["criterion", "name", "status", "detail"]
    out.rows = [[c.criterion, c.name, "PASS" if c.passed else "FAIL", c.detail] for c in result.checks]
    return out, EXIT_OK if result.passed else EXIT_VERIFY


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json", help="output format (default json)")
    common.add_argument("--no-timing", action="store_true", help="omit timing fields (byte-stable output)")

    precision = argparse.ArgumentParser(add_help=False)
    precision.add_argument("--digits", type=int, default=DEFAULT_DIGITS, help="decimal places to print")
    precision.add_argument("--truncate", action="store_true", help="truncate instead of rounding half-even")

    parser = argparse.ArgumentParser(prog="modcount", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count solutions or images modulo n")
    p.add_argument("--problem", required=True, help=", ".join(k.value for k in ProblemKind))
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--oracle", action="store_true", help="also count by brute force and compare")
    p.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("sum", parents=[common], help="exact partial sum with predicted main term")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--problem", help="a counting problem")
    which.add_argument("--weight", help="phi, 2^omega, 3^omega_tilde, phi/2^omega, phi/3^omega_tilde")
    p.add_argument("--limit", type=_positive_int, required=True)
    p.add_argument("--mod", type=int)
    p.add_argument("--res", type=int)
    p.add_argument("--cap", type=int, default=None, help="largest allowed limit (default 1e9)")
    p.set_defaults(run=cmd_sum)

    p = sub.add_parser("constant", parents=[common, precision], help="named constants and coefficients")
    p.add_argument("--name")
    p.add_argument("--list", action="store_true")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(run=cmd_constant)

    p = sub.add_parser("primezeta", parents=[common, precision], help="prime zeta function P(s) or P_{k,l}(s)")
    p.add_argument("--s", required=True, help="rational s >= 3/2, e.g. 2 or 7/2")
    p.add_argument("--class", dest="prime_class", default="1,0", help="k,l with (1,0), (3,0), (3,1) or (3,2)")
    p.set_defaults(run=cmd_primezeta)

    p = sub.add_parser("primeproduct", parents=[common, precision], help="Euler product from a JSON spec")
    p.add_argument("--spec", help="ProductSpec JSON file (default: the shipped cube-roots-of-unity factor)")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--max-n", type=int, default=None, help="truncate the log series after this many terms")
    p.set_defaults(run=cmd_primeproduct)

    p = sub.add_parser("verify", parents=[common], help="reproduce the published numbers")
    p.add_argument("--suite", required=True)
    p.add_argument("--fast", action="store_true", help="cap partial sums at N = 1e6")
    p.add_argument("--progress", action="store_true", help="print each check to stderr as it finishes")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, code = args.run(args)
    except CapExceeded as exc:
        print(f"modcount: {exc}", file=sys.stderr)
        return EXIT_CAP
    except MathPreconditionError as exc:
        print(f"modcount: {exc}", file=sys.stderr)
        return EXIT_MATH
    except (UsageError, ModcountError, ValueError) as exc:
        print(f"modcount: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out.render(args.format, not args.no_timing))
    if code == EXIT_VERIFY and args.command == "verify":
        names = ", ".join(out.results["failures"])
        print(f"modcount: {out.results['n_failed']} check(s) failed: {names}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
