"""Optimal transfer price: closed form, numeric search, comparative statics.

The firm's objective is after-tax profit minus the expected penalty.  Its
price-dependent part is ``wedge*m*(p - w) - G*m*alpha(p)`` with
``wedge = t2 - t1`` and ``G`` the harmed country's theta times unit penalty,
so the interior optimum depends only on the tax wedge, the band and ``G``,
never on the divisions' revenue or cost parameters.

The decision domain is the closed interval between the reference price and
the limiting price on the manipulation side.  Past the limit the penalty is
certain and constant while the tax saving keeps growing, so the model prices
nothing meaningful there; such solutions are reported as ``CornerAtLimit``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .model import (
    ClampedBranchError,
    Regime,
    Scenario,
    ValidationError,
    active_enforcement,
    alpha_derivatives,
    detection_probability,
    expected_penalty,
    objective,
)


class ClampedSolutionError(ValueError):
    """A sensitivity was requested for a corner or no-incentive solution.

    The derivative of a clamped optimum with respect to enforcement is not
    the interior formula; callers must branch on the solution kind instead
    of receiving a silent zero.
    """


class SolutionKind(Enum):
    INTERIOR = "Interior"
    CORNER_AT_LIMIT = "CornerAtLimit"
    NO_INCENTIVE = "NoIncentive"


@dataclass(frozen=True)
class SolveResult:
    """Optimal price and the model quantities evaluated there.

    ``second_order_ok`` reports negative objective curvature at an interior
    optimum; it is vacuously true for corner and no-incentive solutions.
    """

    optimal_price: float
    deviation: float
    alpha_at_optimum: float
    expected_penalty_at_optimum: float
    objective_at_optimum: float
    solution_kind: SolutionKind
    second_order_ok: bool


@dataclass(frozen=True)
class SweepTable:
    """Solve results along one swept parameter, ascending in its value."""

    parameter_name: str
    rows: tuple


@dataclass(frozen=True)
class EffectDecomposition:
    """Comparison of optima before and after an enforcement change.

    ``spillover_effect`` is the change in the absolute deviation from the
    reference price (compliance improves when it is negative);
    ``deterrent_effect`` is the change in the firm's optimal objective.
    """

    baseline: SolveResult
    perturbed: SolveResult
    spillover_effect: float
    deterrent_effect: float


_CORNER_EDGE_REL = 1e-12

SWEEP_PARAMETERS = (
    "theta_1", "theta_2", "penalty_1", "penalty_2", "t1", "t2",
    "band_width_above", "band_width_below", "r", "m",
)


def _result_at(scenario: Scenario, regime: Regime, price: float,
               kind: SolutionKind) -> SolveResult:
    w = scenario.band.arms_length_price
    if regime is Regime.NEUTRAL:
        alpha = 0.0
    else:
        alpha = float(detection_probability(scenario.band, regime, price))
    if kind is SolutionKind.INTERIOR:
        try:
            second_ok = second_order_value(scenario, price) < 0.0
        except ClampedBranchError:
            # optimum collapsed onto the reference price (flat branch)
            second_ok = True
    else:
        second_ok = True
    return SolveResult(
        optimal_price=float(price),
        deviation=float(price - w),
        alpha_at_optimum=alpha,
        expected_penalty_at_optimum=float(expected_penalty(scenario, price)),
        objective_at_optimum=float(objective(scenario, price)),
        solution_kind=kind,
        second_order_ok=bool(second_ok),
    )


def interior_deviation_magnitude(wedge: float, width: float, r: float,
                                 combined_factor: float) -> float:
    """Unconstrained interior distance from the reference price.

    Solves the first-order condition ``wedge*m = G*m*r*d**(r-1)/width**r``
    for ``d``; for convexity 2 this is ``wedge*width**2 / (2*G)``.
    """
    return (wedge * width**r / (r * combined_factor)) ** (1.0 / (r - 1.0))


def closed_form_deviation(scenario: Scenario) -> SolveResult:
    """Optimal price from the first-order condition, with corner handling.

    The interior deviation magnitude is computed from the tax wedge, band
    width, convexity and the combined enforcement factor ``G``; the regime
    supplies its sign.  When ``G`` is zero or the magnitude reaches the band
    width, manipulation is clamped at the limiting price (``CornerAtLimit``,
    detection certain).  Equal tax rates give ``NoIncentive`` at the
    reference price.
    """
    regime = scenario.regime()
    w = scenario.band.arms_length_price
    if regime is Regime.NEUTRAL:
        return _result_at(scenario, regime, w, SolutionKind.NO_INCENTIVE)

    act = active_enforcement(scenario)
    band = scenario.band
    width = band.width(regime)
    wedge = abs(scenario.jurisdiction_2.tax_rate - scenario.jurisdiction_1.tax_rate)
    g = act.combined_factor
    if g == 0.0:
        return _result_at(scenario, regime, band.active_limit(regime),
                          SolutionKind.CORNER_AT_LIMIT)
    d = interior_deviation_magnitude(wedge, width, band.convexity, g)
    # Decimal parameters that place the optimum exactly on the limit in
    # real arithmetic land a few ulps inside it in binary; classify that
    # sliver as the corner it represents.
    if d >= width * (1.0 - _CORNER_EDGE_REL):
        return _result_at(scenario, regime, band.active_limit(regime),
                          SolutionKind.CORNER_AT_LIMIT)
    price = w + band.side_sign(regime) * d
    return _result_at(scenario, regime, price, SolutionKind.INTERIOR)


def second_order_value(scenario: Scenario, price: float) -> float:
    """Objective curvature ``-m*G*alpha_pp`` at an interior price.

    Negative whenever the enforcement factor is positive (convexity > 1 is
    guaranteed by the band); exactly zero when ``G`` is zero, where the
    objective is linear in the price.
    """
    regime = scenario.regime()
    if regime is Regime.NEUTRAL:
        raise ValidationError(
            "objective curvature undefined in the neutral regime "
            "(no manipulation side)")
    act = active_enforcement(scenario)
    _, dd_alpha = alpha_derivatives(scenario.band, regime, price)
    return -scenario.trade_quantity * act.combined_factor * dd_alpha


def deviation_sensitivity_to_enforcement(scenario: Scenario) -> float:
    """d(deviation)/dG at an interior optimum.

    The interior magnitude scales as ``G**(-1/(r-1))``, so its derivative is
    ``-d / ((r - 1) * G)``; the sign of the regime's deviation makes the
    signed derivative negative when shifting raises the price and positive
    when it lowers it (the deviation shrinks toward zero either way).
    """
    result = closed_form_deviation(scenario)
    if result.solution_kind is not SolutionKind.INTERIOR:
        raise ClampedSolutionError(
            f"deviation sensitivity applies to interior solutions only; "
            f"solution is {result.solution_kind.value}")
    regime = scenario.regime()
    act = active_enforcement(scenario)
    d = abs(result.deviation)
    magnitude_slope = -d / ((scenario.band.convexity - 1.0) * act.combined_factor)
    return scenario.band.side_sign(regime) * magnitude_slope


def enforcement_effect_decomposition(scenario: Scenario, parameter: str,
                                     new_value: float) -> EffectDecomposition:
    """Spillover and deterrent effect of changing the harmed country's lever.

    ``parameter`` is ``"theta"`` or ``"unit_penalty"`` of the harmed
    jurisdiction; the baseline and perturbed scenarios are both solved in
    closed form.
    """
    if parameter not in ("theta", "unit_penalty"):
        raise ValidationError(
            f"parameter must be 'theta' or 'unit_penalty', got {parameter!r}")
    act = active_enforcement(scenario)
    if act is None:
        raise ValidationError(
            "no harmed jurisdiction in the neutral regime; nothing to perturb")
    field_name = "enforcement_theta" if parameter == "theta" else "unit_penalty"
    if act.harmed_jurisdiction == 2:
        perturbed_scenario = replace(
            scenario,
            jurisdiction_2=replace(scenario.jurisdiction_2, **{field_name: new_value}))
    else:
        perturbed_scenario = replace(
            scenario,
            jurisdiction_1=replace(scenario.jurisdiction_1, **{field_name: new_value}))
    baseline = closed_form_deviation(scenario)
    perturbed = closed_form_deviation(perturbed_scenario)
    return EffectDecomposition(
        baseline=baseline,
        perturbed=perturbed,
        spillover_effect=abs(perturbed.deviation) - abs(baseline.deviation),
        deterrent_effect=perturbed.objective_at_optimum - baseline.objective_at_optimum,
    )


def apply_parameter(scenario: Scenario, name: str, value: float) -> Scenario:
    """Return a copy of the scenario with one sweepable parameter replaced.

    Band widths are set as distances from the reference price, so
    ``band_width_above = 5`` places the upper limit at ``w + 5``.
    """
    band = scenario.band
    w = band.arms_length_price
    if name == "theta_1":
        return replace(scenario, jurisdiction_1=replace(
            scenario.jurisdiction_1, enforcement_theta=value))
    if name == "theta_2":
        return replace(scenario, jurisdiction_2=replace(
            scenario.jurisdiction_2, enforcement_theta=value))
    if name == "penalty_1":
        return replace(scenario, jurisdiction_1=replace(
            scenario.jurisdiction_1, unit_penalty=value))
    if name == "penalty_2":
        return replace(scenario, jurisdiction_2=replace(
            scenario.jurisdiction_2, unit_penalty=value))
    if name == "t1":
        return replace(scenario, jurisdiction_1=replace(
            scenario.jurisdiction_1, tax_rate=value))
    if name == "t2":
        return replace(scenario, jurisdiction_2=replace(
            scenario.jurisdiction_2, tax_rate=value))
    if name == "band_width_above":
        return replace(scenario, band=replace(band, limit_above=w + value))
    if name == "band_width_below":
        return replace(scenario, band=replace(band, limit_below=w - value))
    if name == "r":
        return replace(scenario, band=replace(band, convexity=value))
    if name == "m":
        return replace(scenario, trade_quantity=value)
    raise ValidationError(
        f"unknown sweep parameter {name!r}; expected one of {', '.join(SWEEP_PARAMETERS)}")


def sweep(scenario: Scenario, parameter: str, start: float, stop: float,
          steps: int) -> SweepTable:
    """Closed-form solves at equally spaced values of one parameter."""
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    if not start < stop:
        raise ValidationError(
            f"sweep range must satisfy from < to, got {start} .. {stop}")
    rows = []
    for k in range(steps):
        value = start + k * (stop - start) / (steps - 1)
        if k == steps - 1:
            value = stop
        rows.append((value, closed_form_deviation(
            apply_parameter(scenario, parameter, value))))
    return SweepTable(parameter_name=parameter, rows=tuple(rows))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def _golden_max(f, a: float, b: float, tol: float):
    """Golden-section search for a maximum of a unimodal f on [a, b].

    Returns the final bracket (lo, hi) with hi - lo <= tol.
    """
    h = b - a
    if h <= tol:
        return a, b
    n = int(math.ceil(math.log(tol / h) / math.log(_INV_PHI)))
    c = a + _INV_PHI_SQ * h
    d = a + _INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= _INV_PHI
            c = a + _INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            yd = f(d)
    return (a, d) if yc > yd else (c, b)


def _parabolic_polish(f, x: float, lo: float, hi: float, spacings) -> float:
    """Refine a near-optimal point by symmetric three-point parabola fits.

    Pure value comparisons cannot place a smooth maximum closer than about
    sqrt(eps) in relative terms, because nearby objective values differ by
    less than their rounding error.  A parabola fitted at spacings well
    above that noise floor recovers the vertex far more precisely, exactly
    so (up to rounding) when the penalty term is quadratic.
    """
    for delta in spacings:
        # repeat at one spacing: a step clamped to +-spacing can leave a
        # residual larger than the next, finer spacing would tolerate
        for _ in range(3):
            d_eff = min(delta, 0.5 * (x - lo), 0.5 * (hi - x))
            if d_eff <= 0.0:
                return x
            f_minus = f(x - d_eff)
            f_mid = f(x)
            f_plus = f(x + d_eff)
            denom = f_minus - 2.0 * f_mid + f_plus
            if denom >= 0.0:
                break  # no concave signal at this spacing
            step = 0.5 * d_eff * (f_minus - f_plus) / denom
            step = min(max(step, -d_eff), d_eff)
            x = min(max(x + step, lo), hi)
            if abs(step) < 0.05 * d_eff:
                break
    return x


_COARSE_POINTS = 64


def _maximize_on_side(scenario: Scenario, lo: float, hi: float,
                      tol: float) -> float:
    """Bracketed search for the objective's maximizer on [lo, hi].

    Coarse grid to bracket, golden-section refinement to ``tol``, then a
    parabola polish whose spacings sit above the floating-point noise floor
    of objective comparisons.
    """
    def f(p):
        return float(objective(scenario, p))

    grid = np.linspace(lo, hi, _COARSE_POINTS)
    values = objective(scenario, grid)
    w = scenario.band.arms_length_price
    order = np.lexsort((grid, np.abs(grid - w), -values))
    i = int(order[0])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, _COARSE_POINTS - 1)]
    ga, gb = _golden_max(f, float(a), float(b), tol)
    x = 0.5 * (ga + gb)

    width = hi - lo
    if scenario.band.convexity == 2.0:
        # quadratic penalty: the parabola fit is exact at any spacing, so
        # wide spacings only suppress rounding noise
        spacings = (0.05 * width, 0.01 * width)
    else:
        spacings = (0.05 * width, 1e-3 * width, 1e-4 * width, 1e-5 * width)
    return _parabolic_polish(f, x, lo, hi, spacings)


def numeric_optimal_price(scenario: Scenario, abs_tolerance: float = 1e-8) -> SolveResult:
    """Maximize the objective by search, independent of the closed form.

    Searches the closed interval between the reference price and the active
    limiting price; with equal tax rates both sides are searched and the
    reference price wins unless a strict improvement is found (the objective
    is then flat, so it never is).  Fields are populated exactly as in
    :func:`closed_form_deviation`.
    """
    if not abs_tolerance > 0.0:
        raise ValidationError(
            f"abs_tolerance must be > 0, got {abs_tolerance}")
    regime = scenario.regime()
    band = scenario.band
    w = band.arms_length_price

    if regime is Regime.NEUTRAL:
        at_w = float(objective(scenario, w))
        guard = 1e-9 * (1.0 + abs(at_w))
        best_price, best_value = w, at_w
        for lo, hi in ((band.limit_below, w), (w, band.limit_above)):
            candidate = _maximize_on_side(scenario, lo, hi, abs_tolerance)
            value = float(objective(scenario, candidate))
            if value > best_value + guard:
                best_price, best_value = candidate, value
        if best_price == w:
            return _result_at(scenario, regime, w, SolutionKind.NO_INCENTIVE)
        return _result_at(scenario, regime, best_price, SolutionKind.INTERIOR)

    limit = band.active_limit(regime)
    lo, hi = min(w, limit), max(w, limit)
    x = _maximize_on_side(scenario, lo, hi, abs_tolerance)
    # The search resolves the maximizer only to its tolerance, so a result
    # within a few tolerances of the limit is the corner it grazes.
    snap = max(4.0 * abs_tolerance, _CORNER_EDGE_REL * (hi - lo))
    if abs(x - limit) <= snap or float(objective(scenario, limit)) > float(objective(scenario, x)):
        return _result_at(scenario, regime, limit, SolutionKind.CORNER_AT_LIMIT)
    return _result_at(scenario, regime, x, SolutionKind.INTERIOR)
