"""Command line interface.

Exit codes: 0 ok, 1 usage or parse error, 2 construction failure,
3 verification failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings

from cubature5.bounds import bound_report, doubled_dimension_bound
from cubature5.constructor import ConstructionError, CubatureRule, build_degree3_rule, build_rule
from cubature5.moments import MeasureSpec, MomentOracle, radial_moments
from cubature5.polyparse import ParseError, parse
from cubature5.verify import DEFAULT_TOLERANCE, apply_rule, exact_integral, exactness_sweep

EXIT_OK, EXIT_USAGE, EXIT_CONSTRUCTION, EXIT_VERIFY = 0, 1, 2, 3

REGIONS = ("cube", "gaussian", "ball", "shell", "exp")

GRAMMAR_HELP = """\
polynomial grammar (whitespace ignored, variables 1-based):
  expression := ['+'|'-'] term (('+'|'-') term)*
  term       := coefficient | [coefficient '*'] factor ('*' factor)*
  factor     := 'x' index ['^' exponent]
example: "3*x1^2*x2 - 0.5*x4"
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_region_args(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--region", choices=REGIONS, required=required)
    p.add_argument("--n", type=int, required=required, help="dimension (>= 4)")
    p.add_argument("--alpha", type=float, help="cube only: weight (1 - x^2)^alpha per axis")
    p.add_argument("--r", type=float, help="shell only: inner radius in [0, 1)")


def measure_from_args(args) -> MeasureSpec:
    if args.alpha is not None and args.region != "cube":
        raise UsageError("--alpha only applies to --region cube")
    if args.r is not None and args.region != "shell":
        raise UsageError("--r only applies to --region shell")
    if args.region == "shell" and args.r is None:
        raise UsageError("--region shell needs --r")
    try:
        if args.region == "cube":
            return MeasureSpec.cube(args.n, args.alpha or 0.0)
        if args.region == "shell":
            return MeasureSpec.shell(args.n, args.r)
        return {"gaussian": MeasureSpec.gaussian, "ball": MeasureSpec.ball, "exp": MeasureSpec.exp_radial}[
            args.region
        ](args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _build(args) -> CubatureRule:
    measure = measure_from_args(args)
    gamma = getattr(args, "gamma", None)
    degree = getattr(args, "degree", 5)
    if gamma is not None and args.region != "cube":
        raise UsageError("--gamma only applies to --region cube")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if degree == 3:
            rule = build_degree3_rule(measure)
        else:
            rule = build_rule(measure, gamma)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return rule


def _load_rule(path: str) -> CubatureRule:
    try:
        with open(path) as f:
            return CubatureRule.from_json(f.read())
    except (OSError, ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"cannot read rule {path}: {exc}") from exc


def cmd_generate(args) -> int:
    rule = _build(args)
    text = rule.to_csv() if args.format == "csv" else rule.to_json()
    summary = sys.stdout
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
        summary = sys.stderr
    report = bound_report(rule.dimension, rule.degree, rule.n_points)
    print(f"region: {rule.region}", file=summary)
    print(f"dimension: {rule.dimension}", file=summary)
    print(f"degree: {rule.degree}", file=summary)
    print(f"points: {rule.n_points}", file=summary)
    print(f"Möller bound: {report.moller_bound}", file=summary)
    print(f"gap: {report.gap}", file=summary)
    print(f"gamma: {rule.gamma!r}", file=summary)
    print(f"points in region: {str(rule.points_in_region).lower()}", file=summary)
    print(f"negative weights: {str(rule.has_negative_weights).lower()}", file=summary)
    print(f"attains Möller bound: {str(rule.attains_moller_bound).lower()}", file=summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    rule = _load_rule(args.rule)
    try:
        measure = rule.measure()
    except ValueError as exc:
        raise UsageError(f"cannot verify region {rule.region!r}: {exc}") from exc
    report = exactness_sweep(
        rule, MomentOracle(measure), args.max_degree, tolerance=args.tolerance, degree=args.degree
    )
    for d in report.degrees:
        mark = "ok" if d.max_rel_error <= report.tolerance else "FAIL"
        print(f"degree {d.degree}: max rel error {d.max_rel_error:.3e} at {list(d.worst_monomial)} [{mark}]")
    verdict = "pass" if report.passed else "fail"
    print(f"{verdict} (checked through degree {report.check_degree}, tolerance {report.tolerance:g})")
    if args.report:
        with open(args.report, "w") as f:
            f.write(report.to_json())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_integrate(args) -> int:
    if args.rule:
        if args.region is not None:
            raise UsageError("give either --rule or --region/--n, not both")
        rule = _load_rule(args.rule)
        try:
            measure = rule.measure()
        except ValueError:
            measure = None
    else:
        if args.region is None or args.n is None:
            raise UsageError("integrate needs --rule or --region and --n")
        rule = _build(args)
        measure = measure_from_args(args)
    poly = parse(args.expression, rule.dimension)
    value = apply_rule(rule, poly)
    print(f"rule value: {value!r}")
    if measure is not None and poly.degree <= 6:
        exact = exact_integral(measure, poly)
        scale = abs(exact) if exact != 0.0 else abs(rule.mass)
        print(f"exact value: {exact!r}")
        print(f"relative error: {abs(value - exact) / scale:.3e}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    try:
        report = bound_report(args.n, args.degree, args.points)
        doubled = doubled_dimension_bound(args.n, args.degree)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"Möller bound: {report.moller_bound}")
    print(f"dim P_n^k bound: {report.dim_bound}")
    if args.verbose:
        print(f"doubled dimension bound: {doubled}")
    if report.rule_points is not None:
        print(f"rule points: {report.rule_points}")
        print(f"gap: {report.gap}")
    return EXIT_OK


def cmd_moments(args) -> int:
    measure = measure_from_args(args)
    oracle = MomentOracle(measure)
    if args.monomial:
        poly = parse(args.monomial, measure.dimension)
        try:
            value = exact_integral(measure, poly)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        print(repr(value))
        return EXIT_OK
    rows = [("L(1)", (0,)), ("L(x1^2)", (2,)), ("L(x1^4)", (4,)), ("L(x1^2*x2^2)", (2, 2)), ("L(x1^6)", (6,))]
    for label, alpha in rows:
        print(f"{label:14s} {oracle.evaluate(alpha)!r}")
    if measure.is_radial:
        _, _, l4, l22 = radial_moments(measure)
        print(f"{'L(x1^4)/L(x1^2*x2^2)':14s} {l4 / l22!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubature5", description="Fifth-degree cubature formulas with few points.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="construct a rule and write it as JSON or CSV")
    _add_region_args(p)
    p.add_argument("--gamma", type=float, help="cube only: override the scaling parameter")
    p.add_argument("--degree", type=int, choices=(3, 5), default=5)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a rule file against exact moments")
    p.add_argument("rule", help="rule JSON file")
    p.add_argument("--degree", type=int, help="degree that must be exact (default: the rule's)")
    p.add_argument("--max-degree", type=int, default=6, choices=range(0, 7), metavar="{0..6}")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--report", help="write the report as JSON to this file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser(
        "integrate",
        help="apply a rule to a polynomial",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("expression", help="polynomial, e.g. 'x1^2*x2^2 + 3*x3'")
    p.add_argument("--rule", help="rule JSON file")
    _add_region_args(p, required=False)
    p.add_argument("--gamma", type=float)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("bounds", help="lower bounds on the number of nodes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degree", type=int, default=5)
    p.add_argument("--points", type=int, help="node count of a rule to compare")
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser(
        "moments",
        help="exact moments of a measure",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_region_args(p)
    p.add_argument("--monomial", help="polynomial of degree <= 6 to integrate exactly")
    p.set_defaults(func=cmd_moments)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstructionError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
