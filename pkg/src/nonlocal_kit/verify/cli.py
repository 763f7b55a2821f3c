"""Command-line interface ``nlk``.

Exit codes: 0 when every case passes, 1 when some case fails, 2 on usage,
configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

from ..errors import ConfigurationError, DomainError, RegimeError
from ..scaling_spheres import classify_regime, mu_limit, mu_sequence
from ..special_functions import (Params, bubble_prefactor, critical_exponent, frac_lap_constant,
                                 green_constant, i_const, mean_value_constant, poisson_constant,
                                 riesz_constant, sphere_area, tau)
from .report import format_number
from .suites import SUITES, default_params, run_suite

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _number(text: str):
    """Exact rational when the text is a decimal or a fraction, else a float."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _uint(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--n", type=int, help="dimension")
    g.add_argument("--m", type=int, help="integer Laplacian power")
    g.add_argument("--alpha", type=_number, help="fractional order in (0, 2)")
    g.add_argument("--a", type=_number, help="Hardy-Henon weight exponent")
    g.add_argument("--p", type=_number, help="nonlinearity exponent")
    o = common.add_argument_group("options")
    o.add_argument("--radius", type=float, default=1.0, help="ball radius (mean-value, "
                   "green-poisson)")
    o.add_argument("--samples", type=_uint, help="random points (kelvin) or k_max (mu)")
    o.add_argument("--tol", type=float, help="override the default case tolerance")
    o.add_argument("--seed", type=_uint, default=0, help="seed of random samples and "
                   "low-discrepancy offsets")
    o.add_argument("--out", help="write the output here instead of stdout")
    o.add_argument("--format", choices=("json", "csv"), default="json")
    o.add_argument("--alpha2", type=_number, help="second Riesz order (riesz-semigroup)")
    o.add_argument("--timing", action="store_true", help="record wall_time_ms (makes "
                   "reports time dependent)")

    parser = _Parser(prog="nlk", description="Verification harness for nonlocal operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("constants", parents=[common], help="print closed-form constants")
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    sub.add_parser("mu", parents=[common], help="print the exponent recurrence")
    return parser


def _params(args, suite: str) -> Params:
    return default_params(suite, n=args.n, m=args.m, alpha=args.alpha, a=args.a, p=args.p)


def _guard(fn, *args):
    try:
        return fn(*args)
    except (ValueError, ArithmeticError, ConfigurationError):
        return None


def _constants_table(params: Params) -> list:
    n, alpha = params.n, float(params.alpha)
    gam = float(params.gamma)
    rows = [
        ("sphere_area", sphere_area(n)),
        ("frac_lap_constant", frac_lap_constant(n, alpha)),
        ("riesz_constant_alpha", _guard(riesz_constant, alpha, n)),
        ("riesz_constant_gamma", _guard(riesz_constant, gam, n)),
        ("poisson_constant", poisson_constant(n, alpha)),
        ("green_constant", _guard(green_constant, n, alpha)),
        ("mean_value_constant", mean_value_constant(alpha)),
    ]
    if params.subcritical_order:
        w = float(params.conformal_weight)
        rows += [
            ("i_const_half_weight", i_const(w / 2, n)),
            ("bubble_prefactor", bubble_prefactor(params)),
            ("critical_exponent", float(critical_exponent(params))),
            ("tau", float(tau(params))),
        ]
    else:
        rows += [(k, None) for k in ("i_const_half_weight", "bubble_prefactor",
                                     "critical_exponent", "tau")]
    return rows


def _params_json(params: Params) -> str:
    p = params.as_dict()
    return ", ".join(f'"{k}": {format_number(p[k])}' for k in ("n", "m", "alpha", "a", "p"))


def _value(v) -> str:
    return "null" if v is None else format_number(v)


def _render_constants(params: Params, fmt: str) -> str:
    rows = _constants_table(params)
    if fmt == "csv":
        return "name,value\n" + "".join(f"{k},{'' if v is None else _value(v).strip(chr(34))}\n"
                                        for k, v in rows)
    body = ",\n    ".join(f'"{k}": {_value(v)}' for k, v in rows)
    return f'{{\n  "params": {{{_params_json(params)}}},\n  "constants": {{\n    {body}\n  }}\n}}\n'


def _render_mu(params: Params, k_max: int, fmt: str) -> str:
    state = mu_sequence(params, k_max)
    limit = mu_limit(params)
    seq = state.sequence
    if fmt == "csv":
        return "k,mu,mu_exact\n" + "".join(f"{k},{_value(float(mu)).strip(chr(34))},{mu}\n"
                                          for k, mu in enumerate(seq))
    values = ", ".join(format_number(float(mu)) for mu in seq)
    exact = ", ".join(f'"{mu}"' for mu in seq)
    lim_exact = "null" if isinstance(limit, float) and math.isinf(limit) else f'"{limit}"'
    return (
        "{\n"
        f'  "params": {{{_params_json(params)}}},\n'
        f'  "regime": "{classify_regime(params)}",\n'
        f'  "k_max": {k_max},\n'
        f'  "step": "{state.step}",\n'
        f'  "sequence": [{values}],\n'
        f'  "sequence_exact": [{exact}],\n'
        f'  "limit": {format_number(float(limit))},\n'
        f'  "limit_exact": {lim_exact}\n'
        "}\n"
    )


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"nlk: usage error: {err}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    try:
        if args.command == "constants":
            _emit(_render_constants(_params(args, "constants"), args.format), args.out)
            return 0
        if args.command == "mu":
            k_max = 12 if args.samples is None else args.samples
            _emit(_render_mu(_params(args, "mu"), k_max, args.format), args.out)
            return 0
        params = _params(args, args.suite)
        report = run_suite(args.suite, params, radius=args.radius, samples=args.samples,
                           tol=args.tol, seed=args.seed, alpha2=args.alpha2,
                           timing=args.timing)
        _emit(report.render(args.format), args.out)
        return report.exit_code
    except (ConfigurationError, RegimeError, DomainError, ValueError) as err:
        print(f"nlk: configuration error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"nlk: I/O error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
