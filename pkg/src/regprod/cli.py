"""Command-line front end.

Subcommands: `compute` evaluates the regularized product of one sequence by
one or all routes, `constant` emits named constants, `verify` runs every
applicable route and exits nonzero when the routes disagree.

Exit codes: 0 success, 1 verification failed, 2 bad arguments, 3 description
file invalid, 4 route inapplicable, 5 computation failed.
"""

from __future__ import annotations

import argparse
import json
import sys

from mpmath import fabs, mp, mpf, nstr, sqrt

from . import __version__
from .engine import ROUTE_CLOSED_FORM, RegularizedResult
from .errors import (
    DomainError,
    InvalidSequenceError,
    RegprodError,
    RouteDisagreementError,
    RouteInapplicableError,
    SpecFileError,
)
from .oracles import applicable_routes, compute_route, cross_route_verify
from .precision import BigReal, PrecisionBudget, rounding_slack
from .sequences import fibonacci_spec, geometric_spec, lucas_spec
from .special import (
    _em_zeta_prime_zero,
    q_pochhammer_inf,
    q_pochhammer_pentagonal,
)
from .specfile import is_plain_decimal, parse_spec_file

_BUILTIN_NAMES = ("fibonacci", "lucas", "integers", "geometric")
_ROUTE_CHOICES = ("closed-form", "theta", "extrapolation", "all")


def _check_digits(digits: int) -> PrecisionBudget:
    if not 6 <= digits <= 1000:
        raise DomainError("digits must lie in [6, 1000], got %s" % digits)
    return PrecisionBudget(digits)


def _format_value(value, digits: int) -> str:
    # round at a precision beyond the display width; the ambient level may be
    # far lower than the precision the value carries
    with mp.workdps(digits + 10):
        return nstr(mpf(value), digits, strip_zeros=False)


def _format_short(value) -> str:
    return nstr(mpf(value), 3)


def _flag_decimal(value: str, flag: str) -> str:
    if not is_plain_decimal(value):
        raise DomainError("%s must be a plain decimal number, got %r" % (flag, value))
    return value


def _resolve_target(args):
    """Return ('integers', None) or ('spec', SequenceSpec) for the request."""
    if getattr(args, "spec_file", None):
        if args.sequence is not None:
            raise DomainError("--sequence and --spec-file are mutually exclusive")
        if args.growth_ratio is not None or args.amplitude is not None:
            raise DomainError("--growth-ratio/--amplitude apply only to --sequence geometric")
        return "spec", parse_spec_file(args.spec_file)
    name = args.sequence
    if name is None:
        raise DomainError("one of --sequence or --spec-file is required")
    if name not in _BUILTIN_NAMES:
        raise DomainError("unknown sequence %r (built-ins: %s; use --spec-file for others)"
                          % (name, ", ".join(_BUILTIN_NAMES)))
    if name != "geometric" and (args.growth_ratio is not None or args.amplitude is not None):
        raise DomainError("--growth-ratio/--amplitude apply only to --sequence geometric")
    if name == "integers":
        return "integers", None
    if name == "fibonacci":
        return "spec", fibonacci_spec()
    if name == "lucas":
        return "spec", lucas_spec()
    if args.growth_ratio is None:
        raise DomainError("--sequence geometric requires --growth-ratio")
    ratio = _flag_decimal(args.growth_ratio, "--growth-ratio")
    amplitude = _flag_decimal(args.amplitude, "--amplitude") if args.amplitude is not None else "1"
    return "spec", geometric_spec(ratio, amplitude)


def _integers_result(budget: PrecisionBudget) -> RegularizedResult:
    zp, n_used, _ = _em_zeta_prime_zero(budget)
    with budget.workdps():
        delta = zp.exp_neg()
    return RegularizedResult(
        zeta_prime_0=zp,
        delta=delta,
        route=ROUTE_CLOSED_FORM,
        error_bound=delta.err + budget.rounding_allowance,
        terms_used=n_used,
        working_digits=budget.working_digits,
    )


def _route_label(route: str) -> str:
    return route.replace("_", "-")


def _document(sequence: str, digits: int, entries, max_disagreement, passed: bool):
    return {
        "sequence": sequence,
        "digits": digits,
        "routes": [
            {
                "route": _route_label(result.route),
                "value": _format_value(result.delta.value, digits),
                "error_bound": _format_short(result.error_bound),
                "terms_used": result.terms_used,
            }
            for result in entries
        ],
        "max_disagreement": _format_short(max_disagreement),
        "pass": passed,
        "version": __version__,
    }


def _emit(document, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(document, sort_keys=True, indent=2))
        return
    print("sequence: %s" % document["sequence"])
    print("digits: %d" % document["digits"])
    for entry in document["routes"]:
        print("route %s: %s  (error <= %s, terms %d)"
              % (entry["route"], entry["value"], entry["error_bound"],
                 entry["terms_used"]))
    print("max disagreement: %s" % document["max_disagreement"])
    print("pass: %s" % ("true" if document["pass"] else "false"))
    print("version: %s" % document["version"])


def _pairwise_disagreement(results):
    worst = mpf(0)
    within = True
    with mp.workdps(40):
        for i in range(len(results)):
            for j in range(i + 1, len(results)):
                gap = fabs(results[i].delta.value - results[j].delta.value)
                worst = max(worst, gap)
                if gap > results[i].error_bound + results[j].error_bound:
                    within = False
    return worst, within


def cmd_compute(args) -> int:
    budget = _check_digits(args.digits)
    kind, spec = _resolve_target(args)
    if kind == "integers":
        if args.route in ("theta", "extrapolation"):
            raise RouteInapplicableError(
                "the integers product supports only the closed-form route")
        results = [_integers_result(budget)]
        sequence = "integers"
    else:
        sequence = spec.name
        available = applicable_routes(spec)
        if args.route == "all":
            routes = available
        else:
            internal = args.route.replace("-", "_")
            if internal not in available:
                raise RouteInapplicableError(
                    "route %s does not apply to sequence %s" % (args.route, sequence))
            routes = (internal,)
        results = [compute_route(spec, route, budget) for route in routes]
    worst, within = _pairwise_disagreement(results)
    _emit(_document(sequence, args.digits, results, worst, within), args.format)
    return 0


def cmd_constant(args) -> int:
    budget = _check_digits(args.digits)
    if args.name == "golden-mean":
        with budget.workdps():
            v = (1 + sqrt(5)) / 2
            value = BigReal(v, rounding_slack(v))
    else:
        with budget.workdps():
            a = -((1 + sqrt(5)) / 2) ** -2
        direct = q_pochhammer_inf(a, budget).imag_bounded(budget.eps)
        pentagonal = q_pochhammer_pentagonal(a, budget).imag_bounded(budget.eps)
        with budget.workdps():
            gap = fabs(direct.value - pentagonal.value)
            if gap > direct.err + pentagonal.err + budget.eps:
                raise RouteDisagreementError(
                    "q-Pochhammer routes disagree by %s" % gap)
        value = direct
    rendered = _format_value(value.value, args.digits)
    if args.format == "json":
        print(json.dumps({
            "constant": args.name,
            "digits": args.digits,
            "value": rendered,
            "version": __version__,
        }, sort_keys=True, indent=2))
    else:
        print(rendered)
    return 0


def cmd_verify(args) -> int:
    budget = _check_digits(args.digits)
    kind, spec = _resolve_target(args)
    if kind == "integers":
        results = [_integers_result(budget)]
        document = _document("integers", args.digits, results, mpf(0), True)
        _emit(document, args.format)
        return 0
    report = cross_route_verify(spec, budget)
    succeeded = [o.result for o in report.outcomes if o.result is not None]
    for outcome in report.outcomes:
        if outcome.failure is not None:
            print("route %s failed: %s"
                  % (_route_label(outcome.route), outcome.failure), file=sys.stderr)
    document = _document(report.sequence_name, report.digits, succeeded,
                         report.max_disagreement, report.passed)
    _emit(document, args.format)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regprod",
        description="Zeta-regularized products of geometrically growing sequences.")
    parser.add_argument("--version", action="version",
                        version="regprod %s" % __version__)
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{compute,constant,verify}")

    def add_target_options(p, with_route):
        p.add_argument("--sequence", metavar="NAME",
                       help="built-in sequence: %s" % ", ".join(_BUILTIN_NAMES))
        p.add_argument("--spec-file", metavar="PATH",
                       help="path to a sequence description file")
        p.add_argument("--digits", type=int, default=12, metavar="N",
                       help="significant digits, 6..1000 (default 12)")
        if with_route:
            p.add_argument("--route", choices=_ROUTE_CHOICES, default="closed-form",
                           help="evaluation route (default closed-form)")
        p.add_argument("--format", choices=("text", "json"), default="text",
                       help="output format (default text)")
        p.add_argument("--growth-ratio", dest="growth_ratio", metavar="X",
                       help="growth ratio for --sequence geometric")
        p.add_argument("--amplitude", metavar="Y",
                       help="amplitude for --sequence geometric (default 1)")

    compute_p = sub.add_parser("compute", help="compute a regularized product")
    add_target_options(compute_p, with_route=True)
    compute_p.set_defaults(func=cmd_compute)

    constant_p = sub.add_parser("constant", help="emit a named constant")
    constant_p.add_argument("name", choices=("fibonacci-factorial", "golden-mean"))
    constant_p.add_argument("--digits", type=int, default=12, metavar="N",
                            help="significant digits, 6..1000 (default 12)")
    constant_p.add_argument("--format", choices=("text", "json"), default="text",
                            help="output format (default text)")
    constant_p.set_defaults(func=cmd_constant)

    verify_p = sub.add_parser("verify", help="cross-check all applicable routes")
    add_target_options(verify_p, with_route=False)
    verify_p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except SpecFileError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except RouteInapplicableError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 4
    except (DomainError, InvalidSequenceError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except RegprodError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
