"""Brute-force and finite-difference machinery for checking the solvers.

Everything here works from objective or probability *values* only; none of
the closed forms from :mod:`tpmodel.equilibrium` are consulted, so agreement
between the two modules is evidence rather than tautology.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    ArmsLengthBand,
    Regime,
    Scenario,
    ValidationError,
    alpha_derivatives,
    detection_probability,
    objective,
)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Minimal 64-bit PRNG with a portable, platform-independent stream.

    State advances by the increment 0x9E3779B97F4A7C15; output mixing
    multiplies by 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB with xor-shifts
    30/27/31.  Uniform doubles take the top 53 bits, so seeded verification
    runs are bit-reproducible everywhere.
    """

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53


@dataclass(frozen=True)
class GridSpec:
    """Uniform price grid from ``lower`` to ``upper`` in steps of ``step``."""

    lower: float
    upper: float
    step: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValidationError(
                f"grid must satisfy lower < upper, got {self.lower} .. {self.upper}")
        if not self.step > 0.0:
            raise ValidationError(f"grid step must be > 0, got {self.step}")
        if not self.step <= self.upper - self.lower:
            raise ValidationError(
                f"grid step {self.step} exceeds the range {self.upper - self.lower}")

    def points(self) -> np.ndarray:
        n = int(math.floor((self.upper - self.lower) / self.step + 1e-9)) + 1
        return self.lower + self.step * np.arange(n)


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of the seeded detection-curve checks.

    ``worst_violation`` is the largest relative disagreement between the
    analytic curve derivatives and their central-difference estimates over
    all samples.
    """

    samples_checked: int
    zero_at_w_ok: bool
    sign_condition_ok: bool
    convexity_ok: bool
    worst_violation: float


def grid_argmax(scenario: Scenario, grid: GridSpec) -> float:
    """Grid point with the highest objective; ties go to the most compliant.

    Points whose objective sits within a few rounding errors of the best are
    treated as tied, so a flat objective resolves to the point nearest the
    reference price instead of to rounding noise.
    """
    prices = grid.points()
    values = np.asarray(objective(scenario, prices), dtype=float)
    best = values.max()
    tie_tol = 256.0 * np.finfo(float).eps * max(1.0, abs(best))
    contenders = prices[values >= best - tie_tol]
    w = scenario.band.arms_length_price
    order = np.lexsort((contenders, np.abs(contenders - w)))
    return float(contenders[order[0]])


def central_difference(f, at: float, h: float, order: int = 1) -> float:
    """Central finite difference of a scalar function.

    Order 1: ``(f(at+h) - f(at-h)) / (2h)``; order 2 uses the standard
    three-point second-difference stencil.
    """
    if not h > 0.0:
        raise ValidationError(f"step h must be > 0, got {h}")
    if order == 1:
        return (f(at + h) - f(at - h)) / (2.0 * h)
    if order == 2:
        return (f(at + h) - 2.0 * f(at) + f(at - h)) / (h * h)
    raise ValidationError(f"order must be 1 or 2, got {order}")


# Interior samples stay this fraction of the band width away from both the
# reference price and the limit, keeping the difference stencils off the
# clamped branches and away from the power law's endpoint singularities.
_EDGE_MARGIN = 0.05

# Step sizes for the two stencil orders, as fractions of the sample's
# distance from the reference price: the power law's truncation terms grow
# with inverse powers of that distance, so a proportional step keeps the
# relative error flat across the band.  The balance between truncation and
# rounding sits near eps**(1/3) for first differences and eps**(1/4) for
# second differences.
_H1_SCALE = 1e-5
_H2_SCALE = 2.5e-4


def check_alpha_conditions(band: ArmsLengthBand, regime: Regime,
                           sample_count: int, seed: int) -> ConditionReport:
    """Check the detection curve's shape conditions at seeded interior points.

    Verifies that the probability is exactly zero at the reference price,
    that the finite-difference slope carries the sign of the deviation, and
    that the finite-difference curvature is positive; records the worst
    relative disagreement between analytic and finite-difference
    derivatives.
    """
    if sample_count < 1:
        raise ValidationError(f"sample_count must be >= 1, got {sample_count}")
    w = band.arms_length_price
    sign = band.side_sign(regime)
    width = band.width(regime)

    def alpha(p):
        return float(detection_probability(band, regime, p))

    zero_at_w_ok = alpha(w) == 0.0
    sign_ok = True
    convex_ok = True
    worst = 0.0
    rng = SplitMix64(seed)
    for _ in range(sample_count):
        u = _EDGE_MARGIN + (1.0 - 2.0 * _EDGE_MARGIN) * rng.uniform()
        p = w + sign * u * width
        distance = u * width
        edge_room = 0.2 * min(u, 1.0 - u) * width
        h1 = min(_H1_SCALE * distance, edge_room)
        h2 = min(_H2_SCALE * distance, edge_room)
        fd1 = central_difference(alpha, p, h1, order=1)
        fd2 = central_difference(alpha, p, h2, order=2)
        if fd1 == 0.0 or (fd1 > 0.0) != (p > w):
            sign_ok = False
        if not fd2 > 0.0:
            convex_ok = False
        a1, a2 = alpha_derivatives(band, regime, p)
        worst = max(worst,
                    abs(fd1 - a1) / abs(a1),
                    abs(fd2 - a2) / abs(a2))
    return ConditionReport(
        samples_checked=sample_count,
        zero_at_w_ok=zero_at_w_ok,
        sign_condition_ok=sign_ok,
        convexity_ok=convex_ok,
        worst_violation=worst,
    )
