"""Command-line front end: solve, sweep, decompose, and verify.

Exit codes form a contract: 0 success, 1 input or validation error,
2 verification mismatch, 3 I/O error.  No other value is ever returned.

Every successful invocation appends one JSON line to ``runs/manifest.log``
(timestamp, command line, scenario content digest, output paths) unless
``--no-manifest`` is given.  Set ``TP_NO_COLOR=1`` to disable ANSI styling
in the verify report.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import shlex
import sys
from dataclasses import replace

from .equilibrium import (
    SWEEP_PARAMETERS,
    SolutionKind,
    SolveResult,
    closed_form_deviation,
    deviation_sensitivity_to_enforcement,
    enforcement_effect_decomposition,
    numeric_optimal_price,
    sweep,
)
from .model import Regime, ValidationError, active_enforcement
from .oracle import GridSpec, central_difference, check_alpha_conditions, grid_argmax
from .scenario_io import load_scenario
from .svgchart import line_chart

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MISMATCH = 2
EXIT_IO = 3

CSV_HEADER = "param,value,optimal_price,deviation,alpha,expected_penalty,objective,solution_kind"
MANIFEST_PATH = os.path.join("runs", "manifest.log")

# verify tolerances: grid agreement at the grid step, numeric agreement at
# the solver tolerance, derivative agreement at the oracle's budget
_GRID_STEP = 1e-4
_NUMERIC_TOL = 1e-8
_DERIVATIVE_TOL = 1e-6

_GREEN = "\x1b[32m"
_RED = "\x1b[31m"
_YELLOW = "\x1b[33m"
_RESET = "\x1b[0m"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Parser whose usage failures flow through the exit-code contract."""

    def error(self, message):
        raise _UsageError(message)


def _round12(x: float) -> float:
    """Round to 12 significant digits for stable JSON output."""
    return float(format(float(x), ".12g"))


def _fmt12(x: float) -> str:
    return format(float(x), ".12g")


def _result_payload(result: SolveResult) -> dict:
    return {
        "optimal_price": _round12(result.optimal_price),
        "deviation": _round12(result.deviation),
        "alpha": _round12(result.alpha_at_optimum),
        "expected_penalty": _round12(result.expected_penalty_at_optimum),
        "objective": _round12(result.objective_at_optimum),
        "solution_kind": result.solution_kind.value,
        "second_order_ok": result.second_order_ok,
    }


def _write_manifest(args, digest: str, outputs: list) -> None:
    if args.no_manifest:
        return
    record = {
        "timestamp": datetime.datetime.now(datetime.timezone.utc)
        .isoformat(timespec="seconds").replace("+00:00", "Z"),
        "command": shlex.join(["tp"] + list(args.raw_argv)),
        "scenario_digest": digest,
        "outputs": list(outputs),
    }
    os.makedirs(os.path.dirname(MANIFEST_PATH), exist_ok=True)
    with open(MANIFEST_PATH, "a", encoding="utf-8", newline="") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def cmd_solve(args) -> int:
    scenario, digest = load_scenario(args.scenario)
    if args.method == "numeric":
        payload = _result_payload(numeric_optimal_price(scenario))
    else:
        closed = closed_form_deviation(scenario)
        payload = _result_payload(closed)
        if args.method == "both":
            numeric = numeric_optimal_price(scenario)
            payload["discrepancy"] = _round12(
                abs(closed.optimal_price - numeric.optimal_price))
    print(json.dumps(payload, indent=2))
    _write_manifest(args, digest, [])
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario, digest = load_scenario(args.scenario)
    table = sweep(scenario, args.param, args.start, args.stop, args.steps)
    lines = [CSV_HEADER]
    for value, res in table.rows:
        lines.append(",".join((
            table.parameter_name,
            _fmt12(value),
            _fmt12(res.optimal_price),
            _fmt12(res.deviation),
            _fmt12(res.alpha_at_optimum),
            _fmt12(res.expected_penalty_at_optimum),
            _fmt12(res.objective_at_optimum),
            res.solution_kind.value,
        )))
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    outputs = [args.out]
    if args.svg is not None:
        xs = [value for value, _ in table.rows]
        ys = [res.deviation for _, res in table.rows]
        chart = line_chart(xs, ys, x_label=table.parameter_name,
                           y_label="deviation",
                           title=f"optimal deviation vs {table.parameter_name}")
        with open(args.svg, "w", encoding="utf-8", newline="") as fh:
            fh.write(chart)
        outputs.append(args.svg)
    _write_manifest(args, digest, outputs)
    return EXIT_OK


def cmd_decompose(args) -> int:
    scenario, digest = load_scenario(args.scenario)
    decomp = enforcement_effect_decomposition(scenario, args.param, args.new_value)
    payload = {
        "baseline": _result_payload(decomp.baseline),
        "perturbed": _result_payload(decomp.perturbed),
        "spillover_effect": _round12(decomp.spillover_effect),
        "deterrent_effect": _round12(decomp.deterrent_effect),
    }
    print(json.dumps(payload, indent=2))
    _write_manifest(args, digest, [])
    return EXIT_OK


def _use_color(stream) -> bool:
    if os.environ.get("TP_NO_COLOR"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _paint(label: str, color: str, colorize: bool) -> str:
    return f"{color}{label}{_RESET}" if colorize else label


def _sensitivity_central_difference(scenario) -> float:
    """d(deviation)/dG estimated by perturbing the harmed unit penalty.

    The combined factor is theta times the unit penalty, so the slope in
    the penalty divided by theta is the slope in the combined factor.  The
    penalty has no upper bound, which keeps the two-sided stencil feasible
    (theta itself is capped at 1).
    """
    act = active_enforcement(scenario)

    def signed_deviation(phi: float) -> float:
        if act.harmed_jurisdiction == 2:
            shifted = replace(scenario, jurisdiction_2=replace(
                scenario.jurisdiction_2, unit_penalty=phi))
        else:
            shifted = replace(scenario, jurisdiction_1=replace(
                scenario.jurisdiction_1, unit_penalty=phi))
        return closed_form_deviation(shifted).deviation

    h = 1e-5 * max(1.0, abs(act.unit_penalty))
    slope = central_difference(signed_deviation, act.unit_penalty, h)
    return slope / act.theta


def cmd_verify(args) -> int:
    scenario, digest = load_scenario(args.scenario)
    regime = scenario.regime()
    closed = closed_form_deviation(scenario)
    band = scenario.band
    w = band.arms_length_price

    # detection-curve conditions per manipulation side (both for neutral)
    sides = ([Regime.HIGH_TP, Regime.LOW_TP] if regime is Regime.NEUTRAL
             else [regime])
    reports = [check_alpha_conditions(band, side, args.samples, args.seed)
               for side in sides]
    worst = max(r.worst_violation for r in reports)

    checks = [
        ("detection probability zero at reference price",
         all(r.zero_at_w_ok for r in reports), ""),
        ("detection slope carries the deviation sign",
         all(r.sign_condition_ok for r in reports), ""),
        ("detection curve convex",
         all(r.convexity_ok for r in reports), ""),
        ("detection derivatives vs central differences",
         worst <= _DERIVATIVE_TOL, f"worst {worst:.3e}"),
    ]

    if regime is Regime.NEUTRAL:
        lo, hi = band.limit_below, band.limit_above
    else:
        limit = band.active_limit(regime)
        lo, hi = min(w, limit), max(w, limit)
    grid_price = grid_argmax(scenario, GridSpec(lo, hi, _GRID_STEP))
    grid_diff = abs(grid_price - closed.optimal_price)
    checks.append(("closed form vs grid search",
                   grid_diff <= _GRID_STEP, f"diff {grid_diff:.3e}"))

    numeric = numeric_optimal_price(scenario, _NUMERIC_TOL)
    numeric_diff = abs(numeric.optimal_price - closed.optimal_price)
    checks.append(("closed form vs numeric search",
                   numeric_diff <= _NUMERIC_TOL
                   and numeric.solution_kind is closed.solution_kind,
                   f"diff {numeric_diff:.3e}"))

    if closed.solution_kind is SolutionKind.INTERIOR:
        checks.append(("objective curvature negative at the optimum",
                       closed.second_order_ok, ""))
        analytic = deviation_sensitivity_to_enforcement(scenario)
        estimate = _sensitivity_central_difference(scenario)
        rel = abs(estimate - analytic) / abs(analytic)
        checks.append(("sensitivity analytic vs central differences",
                       rel <= _DERIVATIVE_TOL, f"rel {rel:.3e}"))
    else:
        checks.append(("objective curvature negative at the optimum",
                       None, "interior only"))
        checks.append(("sensitivity analytic vs central differences",
                       None, "interior only"))

    colorize = _use_color(sys.stdout)
    print(f"regime: {regime.value}")
    print(f"solution kind: {closed.solution_kind.value}")
    print(f"checks (samples={args.samples}, seed={args.seed}):")
    label_width = max(len(label) for label, _, _ in checks)
    failures = 0
    for label, ok, detail in checks:
        if ok is None:
            status = _paint("SKIP", _YELLOW, colorize)
        elif ok:
            status = _paint("PASS", _GREEN, colorize)
        else:
            status = _paint("FAIL", _RED, colorize)
            failures += 1
        line = f"  {label:<{label_width}}  {status}"
        if detail:
            line += f"  ({detail})"
        print(line)
    if failures:
        print(f"summary: {failures} check(s) failed")
    else:
        print("summary: all checks passed")
    _write_manifest(args, digest, [])
    return EXIT_MISMATCH if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tp",
        description="Transfer-price optimization under an enforcement band.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p):
        p.add_argument("scenario", help="scenario JSON file")
        p.add_argument("--no-manifest", action="store_true",
                       help="skip the runs/manifest.log entry")

    p = sub.add_parser("solve", help="optimal transfer price for one scenario")
    common(p)
    p.add_argument("--method", choices=("closed", "numeric", "both"),
                   default="closed",
                   help="closed form, numeric search, or both with discrepancy")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve along a range of one parameter")
    common(p)
    p.add_argument("--param", required=True, choices=SWEEP_PARAMETERS,
                   help="parameter to vary")
    p.add_argument("--from", dest="start", type=float, required=True,
                   metavar="START", help="first parameter value")
    p.add_argument("--to", dest="stop", type=float, required=True,
                   metavar="STOP", help="last parameter value")
    p.add_argument("--steps", type=int, required=True,
                   help="number of equally spaced values (>= 2)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", help="optional SVG chart of deviation vs parameter")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("decompose",
                       help="spillover and deterrent effect of a policy change")
    common(p)
    p.add_argument("--param", required=True, choices=("theta", "unit_penalty"),
                   help="lever of the harmed jurisdiction to change")
    p.add_argument("--new-value", dest="new_value", type=float, required=True,
                   help="perturbed value of the lever")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify",
                       help="check the closed forms against brute force")
    common(p)
    p.add_argument("--samples", type=int, default=100,
                   help="seeded sample count for the curve checks")
    p.add_argument("--seed", type=int, default=12345,
                   help="seed for the sample generator")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"tp: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    args.raw_argv = list(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"tp: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"tp: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
