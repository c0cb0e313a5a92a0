"""Command-line front end.

    archimedean analyze   --curve builtin:quadratic:a=1
    archimedean curvature --curve builtin:ellipse:a=1,b=1 --point 4.712
    archimedean check     --curve curve.json --condition E --format csv
    archimedean families  --b 1 --c 0.5

Exit status: 0 satisfied/pass, 1 violated, 2 hypothesis violated, 64 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .chords import ChordError, TangentFrame
from .conditions import (
    HYPOTHESIS_VIOLATED,
    SATISFIED,
    SamplingConfig,
    check_condition_A,
    check_condition_B,
    check_condition_C,
    check_condition_D,
    check_condition_E,
    classify_parabola,
    default_k,
)
from .curvature import kappa_extrapolated
from .curves import Curve, CurveError, GraphCurve, check_strict_convexity, load_curve
from .families import verify_family_on_curve
from .numerics import QuadratureError, RootError
from .reporting import dumps, rows_to_csv, samples_to_csv

EXIT_OK, EXIT_VIOLATED, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2, 64

VERDICT_EXIT = {SATISFIED: EXIT_OK, "violated": EXIT_VIOLATED, HYPOTHESIS_VIOLATED: EXIT_HYPOTHESIS,
                "parabola": EXIT_OK, "not_parabola": EXIT_VIOLATED, "withheld": EXIT_HYPOTHESIS}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="archimedean", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, curve_required=True):
        if curve_required:
            p.add_argument("--curve", required=True,
                           help="JSON spec file, inline JSON, or builtin:<kind>[:k=v,...]")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--tol", type=float, default=1e-6)
        p.add_argument("--n-points", type=int, default=9)
        p.add_argument("--n-heights", type=int, default=7)

    p = sub.add_parser("analyze", help="convexity, h_max table and Archimedes-ratio verdict")
    common(p)

    p = sub.add_parser("curvature", help="chord-based curvature convergence table")
    common(p)
    p.add_argument("--point", type=float, help="abscissa (graphs) or parameter t")
    p.add_argument("--h0", type=float)
    p.add_argument("--levels", type=int, default=6)

    p = sub.add_parser("check", help="check one area condition A-E")
    common(p)
    p.add_argument("--condition", required=True, choices=tuple("ABCDE"))
    p.add_argument("--k", type=float, help="lift for condition B")

    p = sub.add_parser("families", help="closed-form residuals for the tilted-parabola family")
    common(p, curve_required=False)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--n-samples", type=int, default=20)
    return parser


def _sampling(args) -> SamplingConfig:
    try:
        return SamplingConfig(n_points=args.n_points, n_heights=args.n_heights, tol=args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _config(args, **resolved) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k != "out"}
    cfg.update(resolved)
    return dict(sorted(cfg.items()))


def _curve(args) -> Curve:
    try:
        return load_curve(args.curve)
    except (CurveError, OSError, ValueError) as exc:
        raise UsageError(f"cannot load curve {args.curve!r}: {exc}") from None


def cmd_analyze(args):
    curve = _curve(args)
    fmt = args.format or "json"
    cfg = _sampling(args)
    convex = check_strict_convexity(curve, 101)
    result = classify_parabola(curve, cfg)
    table = []
    for t in curve.sample_params(cfg.n_points, cfg.point_lo_frac, cfg.point_hi_frac):
        frame = TangentFrame(curve, t)
        table.append({"t": t, "x": frame.P.location[0], "y": frame.P.location[1],
                      "h_max": frame.h_max, "kappa": frame.kappa})
    code = VERDICT_EXIT[result.verdict]
    if fmt == "csv":
        text = samples_to_csv(table, (f"curve={curve.label}", f"verdict={result.verdict}",
                                      f"condition_C_max_deviation={result.report.max_deviation!r}"))
    else:
        text = dumps({
            "command": "analyze",
            "config": _config(args, format=fmt),
            "curve": curve.label,
            "convexity": convex._asdict(),
            "h_max_table": table,
            "verdict": result.verdict,
            "evidence": result.evidence,
            "condition_C": result.report,
        })
    return text, code


def _default_point(curve: Curve) -> float:
    if curve.closed:
        return curve.lo
    if curve.contains(0.0):
        return 0.0
    return 0.5 * (curve.lo + curve.hi)


def cmd_curvature(args):
    curve = _curve(args)
    fmt = args.format or "csv"
    t = _default_point(curve) if args.point is None else args.point
    if not curve.contains(t):
        raise UsageError(f"point {t!r} outside the curve's domain")
    est = kappa_extrapolated(curve, t, args.h0, args.levels)
    summary = {"extrapolated": est.extrapolated, "analytic": est.analytic,
               "rel_error": est.rel_error, "fitted_order": est.fitted_order,
               "hypothesis_violated": est.hypothesis_violated}
    if fmt == "csv":
        text = rows_to_csv(["h", "L", "L_over_sqrt_h", "kappa_hat", "analytic", "abs_err"],
                           est.rows())
        text += "# " + ", ".join(f"{k}={v!r}" for k, v in summary.items()) + "\n"
    else:
        text = dumps({
            "command": "curvature",
            "config": _config(args, format=fmt, point=t, h0=est.h_grid[0]),
            "curve": curve.label,
            "point": est.point,
            "table": [dict(zip(("h", "L", "L_over_sqrt_h", "kappa_hat", "analytic", "abs_err"), r))
                      for r in est.rows()],
            "summary": summary,
            "notes": est.notes,
        })
    return text, EXIT_HYPOTHESIS if est.hypothesis_violated else EXIT_OK


def cmd_check(args):
    curve = _curve(args)
    fmt = args.format or "json"
    cfg = _sampling(args)
    cond = args.condition
    if cond in "ABE" and not isinstance(curve, GraphCurve):
        raise UsageError(f"condition {cond} needs a graph curve, got {curve.label!r}")
    if cond != "B" and args.k is not None:
        raise UsageError("--k applies to condition B only")
    resolved = {"format": fmt}
    if cond == "A":
        report = check_condition_A(curve, config=cfg)
    elif cond == "B":
        k = default_k(curve) if args.k is None else args.k
        if not k > 0:
            raise UsageError("--k must be positive")
        resolved["k"] = k
        report = check_condition_B(curve, k, config=cfg)
    elif cond == "C":
        report = check_condition_C(curve, config=cfg)
    elif cond == "D":
        report = check_condition_D(curve, config=cfg)
    else:
        report = check_condition_E(curve, config=cfg)
    if fmt == "csv":
        text = samples_to_csv(report.samples, (
            f"condition={cond}", f"curve={curve.label}", f"verdict={report.verdict}",
            f"max_deviation={report.max_deviation!r}", f"tolerance={report.tolerance!r}"))
    else:
        text = dumps({"command": "check", "config": _config(args, **resolved), "report": report})
    return text, VERDICT_EXIT[report.verdict]


def cmd_families(args):
    fmt = args.format or "json"
    if not args.b > 0:
        raise UsageError("b must be positive")
    if args.c == 0:
        raise UsageError("c must be nonzero")
    if args.n_samples < 1:
        raise UsageError("--n-samples must be positive")
    report = verify_family_on_curve(args.b, args.c, args.n_samples, _sampling(args))
    if fmt == "csv":
        flat = {k: v for k, v in report.items() if not isinstance(v, (dict, list))}
        text = rows_to_csv(["key", "value"], sorted(flat.items()))
    else:
        text = dumps({"command": "families", "config": _config(args, format=fmt),
                      "report": report})
    return text, EXIT_OK if report["passed"] else EXIT_VIOLATED


COMMANDS = {"analyze": cmd_analyze, "curvature": cmd_curvature, "check": cmd_check,
            "families": cmd_families}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"archimedean: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChordError, CurveError, QuadratureError, RootError) as exc:
        print(f"archimedean: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
