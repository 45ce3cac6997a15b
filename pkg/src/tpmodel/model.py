"""Core model of a two-division multinational trading an intermediate good.

Division 1 produces and exports a fixed quantity ``m`` to division 2 at an
internal price ``p``.  Each country taxes its resident division; when the two
tax rates differ, the firm can shift taxable income by moving ``p`` away from
the arm's-length reference price ``w``.  The country losing tax base may
detect the distortion and fine each traded unit.  The probability of the fine
grows with the distance of ``p`` from ``w`` and becomes certain once ``p``
reaches a limiting price at the edge of the acceptable band, so the firm
trades off the tax saving from shifting against the expected fine.

Price arguments of the evaluation functions (:func:`pretax_profits`,
:func:`after_tax_profit`, :func:`detection_probability`,
:func:`expected_penalty`, :func:`objective`) accept a float or a numpy array,
so a whole grid of candidate prices can be evaluated in one call.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class ValidationError(ValueError):
    """An input violates a model invariant."""


class ClampedBranchError(ValueError):
    """A derivative was requested on a flat (clamped) part of the curve.

    Carries ``branch``: ``"compliant"`` for the side where detection is
    impossible (including the reference price itself) and ``"certain"`` for
    prices at or past the limiting price.
    """

    def __init__(self, message: str, branch: str):
        super().__init__(message)
        self.branch = branch


class Regime(Enum):
    """Direction of the income-shifting incentive."""

    HIGH_TP = "HighTP"  # t2 > t1: shifting requires raising the price
    LOW_TP = "LowTP"    # t1 > t2: shifting requires lowering the price
    NEUTRAL = "Neutral"  # equal rates: no incentive


@dataclass(frozen=True)
class Jurisdiction:
    """Tax parameters of one country.

    ``enforcement_theta`` is the country-level effectiveness of enforcement
    on [0, 1]; ``unit_penalty`` is the fine per traded unit levied on
    detected manipulation (zero is allowed as a degenerate input).
    """

    tax_rate: float
    enforcement_theta: float
    unit_penalty: float

    def __post_init__(self):
        if not 0.0 <= self.tax_rate < 1.0:
            raise ValidationError(
                f"tax_rate must be in [0, 1), got {self.tax_rate}")
        if not 0.0 <= self.enforcement_theta <= 1.0:
            raise ValidationError(
                f"enforcement_theta must be in [0, 1], got {self.enforcement_theta}")
        if not self.unit_penalty >= 0.0:
            raise ValidationError(
                f"unit_penalty must be >= 0, got {self.unit_penalty}")


@dataclass(frozen=True)
class DivisionEconomics:
    """Linear-quadratic revenue and cost of one division.

    Revenue from selling ``s`` units domestically is ``a*s - b*s**2`` and the
    cost of producing ``x`` units is ``c*x + d*x**2`` with ``b, d >= 0``
    (concave revenue, convex cost).
    """

    domestic_sales: float
    revenue_linear: float
    revenue_quadratic: float
    cost_linear: float
    cost_quadratic: float

    def __post_init__(self):
        if not self.domestic_sales >= 0.0:
            raise ValidationError(
                f"domestic_sales must be >= 0, got {self.domestic_sales}")
        if not self.revenue_quadratic >= 0.0:
            raise ValidationError(
                f"revenue_quadratic must be >= 0, got {self.revenue_quadratic}")
        if not self.cost_quadratic >= 0.0:
            raise ValidationError(
                f"cost_quadratic must be >= 0, got {self.cost_quadratic}")
        for name in ("revenue_linear", "cost_linear"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v}")

    def revenue(self, quantity):
        return self.revenue_linear * quantity - self.revenue_quadratic * quantity**2

    def cost(self, quantity):
        return self.cost_linear * quantity + self.cost_quadratic * quantity**2


@dataclass(frozen=True)
class ArmsLengthBand:
    """Acceptable price band around the arm's-length reference price.

    ``limit_above`` and ``limit_below`` are the prices at which the penalty
    becomes certain on each side; ``convexity`` (> 1) controls how fast the
    detection probability rises across the band.
    """

    arms_length_price: float
    limit_above: float
    limit_below: float
    convexity: float

    def __post_init__(self):
        for name in ("arms_length_price", "limit_above", "limit_below"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v}")
        if not self.limit_below < self.arms_length_price < self.limit_above:
            raise ValidationError(
                "band must satisfy limit_below < arms_length_price < limit_above, "
                f"got {self.limit_below}, {self.arms_length_price}, {self.limit_above}")
        if not self.convexity > 1.0:
            raise ValidationError(
                f"convexity must be > 1, got {self.convexity}")

    def active_limit(self, regime: Regime) -> float:
        """Limiting price on the manipulation side of the given regime."""
        if regime is Regime.HIGH_TP:
            return self.limit_above
        if regime is Regime.LOW_TP:
            return self.limit_below
        raise ValidationError("neutral regime has no manipulation side")

    def width(self, regime: Regime) -> float:
        """Distance from the reference price to the active limit (> 0)."""
        return abs(self.active_limit(regime) - self.arms_length_price)

    def side_sign(self, regime: Regime) -> float:
        """+1 when manipulation raises the price, -1 when it lowers it."""
        if regime is Regime.HIGH_TP:
            return 1.0
        if regime is Regime.LOW_TP:
            return -1.0
        raise ValidationError("neutral regime has no manipulation side")


@dataclass(frozen=True)
class Scenario:
    """Full model instance: two countries, two divisions, one trade flow."""

    jurisdiction_1: Jurisdiction
    jurisdiction_2: Jurisdiction
    division_1: DivisionEconomics
    division_2: DivisionEconomics
    trade_quantity: float
    band: ArmsLengthBand

    def __post_init__(self):
        if not self.trade_quantity > 0.0:
            raise ValidationError(
                f"trade_quantity must be > 0, got {self.trade_quantity}")
        # x2 = s2 - m < 0 keeps the algebra well defined; warn, don't reject.
        if self.division_2.domestic_sales - self.trade_quantity < 0.0:
            warnings.warn(
                "division 2 output s2 - m is negative; profits remain "
                "well defined but check the scenario",
                UserWarning, stacklevel=2)

    def regime(self) -> Regime:
        return classify_regime(self.jurisdiction_1.tax_rate,
                               self.jurisdiction_2.tax_rate)


@dataclass(frozen=True)
class ActiveEnforcement:
    """Enforcement parameters of the jurisdiction harmed by the shifting.

    ``combined_factor`` is theta times the unit penalty: the single lever
    through which both instruments act on the optimum.
    """

    harmed_jurisdiction: int
    theta: float
    unit_penalty: float
    combined_factor: float = field(init=False)

    def __post_init__(self):
        if self.harmed_jurisdiction not in (1, 2):
            raise ValidationError(
                f"harmed_jurisdiction must be 1 or 2, got {self.harmed_jurisdiction}")
        object.__setattr__(self, "combined_factor",
                           self.theta * self.unit_penalty)


def classify_regime(t1: float, t2: float) -> Regime:
    """Classify the shifting incentive from the two tax rates.

    Equal rates are compared exactly; callers wanting a tolerance must
    pre-round their inputs.
    """
    for name, rate in (("t1", t1), ("t2", t2)):
        if not 0.0 <= rate < 1.0:
            raise ValidationError(f"{name} must be in [0, 1), got {rate}")
    if t2 > t1:
        return Regime.HIGH_TP
    if t1 > t2:
        return Regime.LOW_TP
    return Regime.NEUTRAL


def active_enforcement(scenario: Scenario) -> ActiveEnforcement | None:
    """Enforcement of the harmed jurisdiction, or None in the neutral regime.

    The harmed country is jurisdiction 2 when shifting raises the price and
    jurisdiction 1 when it lowers it.
    """
    regime = scenario.regime()
    if regime is Regime.NEUTRAL:
        return None
    if regime is Regime.HIGH_TP:
        jur, index = scenario.jurisdiction_2, 2
    else:
        jur, index = scenario.jurisdiction_1, 1
    return ActiveEnforcement(harmed_jurisdiction=index,
                             theta=jur.enforcement_theta,
                             unit_penalty=jur.unit_penalty)


def pretax_profits(scenario: Scenario, price):
    """Pretax profit of each division under one set of books.

    Division 1 produces ``s1 + m`` and earns ``p*m`` on the internal sale;
    division 2 produces ``s2 - m`` and pays ``p*m``.  Returns ``(pi1, pi2)``.
    """
    d1, d2 = scenario.division_1, scenario.division_2
    m = scenario.trade_quantity
    pi1 = (d1.revenue(d1.domestic_sales)
           - d1.cost(d1.domestic_sales + m)
           + price * m)
    pi2 = (d2.revenue(d2.domestic_sales)
           - d2.cost(d2.domestic_sales - m)
           - price * m)
    return pi1, pi2


def after_tax_profit(scenario: Scenario, price):
    """Consolidated after-tax profit ``(1 - t1)*pi1 + (1 - t2)*pi2``."""
    pi1, pi2 = pretax_profits(scenario, price)
    return ((1.0 - scenario.jurisdiction_1.tax_rate) * pi1
            + (1.0 - scenario.jurisdiction_2.tax_rate) * pi2)


def detection_probability(band: ArmsLengthBand, regime: Regime, price):
    """Probability that the price distortion triggers the penalty.

    On the manipulation side the probability is the distance from the
    reference price, relative to the band width, raised to the convexity
    exponent.  It is exactly 0 at the reference price and on the compliant
    side, and exactly 1 at or past the limiting price.
    """
    if regime is Regime.NEUTRAL:
        raise ValidationError(
            "detection probability undefined in the neutral regime "
            "(no manipulation side); expected_penalty returns 0 instead")
    w = band.arms_length_price
    relative = band.side_sign(regime) * (price - w) / band.width(regime)
    return np.clip(relative, 0.0, 1.0) ** band.convexity


def alpha_derivatives(band: ArmsLengthBand, regime: Regime, price: float):
    """First and second derivative of the detection probability in price.

    Defined only strictly inside the manipulation side of the band; the
    clamped branches are flat and a request there raises
    :class:`ClampedBranchError` naming the branch.  The first derivative has
    the sign of ``price - w``; the second is positive for any convexity > 1.

    For non-integer convexity the power law is evaluated on the absolute
    distance from the reference price, with the regime's sign applied to the
    first derivative.
    """
    w = band.arms_length_price
    sign = band.side_sign(regime)
    width = band.width(regime)
    u = sign * (price - w)
    if u <= 0.0:
        raise ClampedBranchError(
            f"price {price} is on the compliant branch (alpha = 0, flat)",
            branch="compliant")
    if u >= width:
        raise ClampedBranchError(
            f"price {price} is on the certain-penalty branch (alpha = 1, flat)",
            branch="certain")
    r = band.convexity
    scale = width**r
    first = sign * r * u ** (r - 1.0) / scale
    second = r * (r - 1.0) * u ** (r - 2.0) / scale
    return first, second


def expected_penalty(scenario: Scenario, price):
    """Expected fine: unit penalty times quantity, detection and enforcement.

    Zero in the neutral regime and wherever the price sits on the compliant
    side of the band.
    """
    act = active_enforcement(scenario)
    if act is None:
        return 0.0 * price
    alpha = detection_probability(scenario.band, scenario.regime(), price)
    return act.unit_penalty * scenario.trade_quantity * alpha * act.theta


def objective(scenario: Scenario, price):
    """After-tax profit net of the expected penalty."""
    return after_tax_profit(scenario, price) - expected_penalty(scenario, price)
