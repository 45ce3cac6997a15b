"""Transfer-price choice of a two-division multinational under enforcement.

The package models a firm that trades an intermediate good between a
division in a low-tax country and one in a high-tax country.  Shifting
income by pricing the trade away from the arm's-length reference price
raises expected penalties through a detection probability that grows with
the distance from that reference.  The library solves for the optimal
transfer price in closed form and numerically, sweeps policy parameters,
decomposes enforcement changes into compliance and profit effects, and
verifies every closed form against brute-force oracles.
"""

from .equilibrium import (
    ClampedSolutionError,
    EffectDecomposition,
    SolutionKind,
    SolveResult,
    SweepTable,
    SWEEP_PARAMETERS,
    apply_parameter,
    closed_form_deviation,
    deviation_sensitivity_to_enforcement,
    enforcement_effect_decomposition,
    interior_deviation_magnitude,
    numeric_optimal_price,
    second_order_value,
    sweep,
)
from .model import (
    ActiveEnforcement,
    ArmsLengthBand,
    ClampedBranchError,
    DivisionEconomics,
    Jurisdiction,
    Regime,
    Scenario,
    ValidationError,
    active_enforcement,
    after_tax_profit,
    alpha_derivatives,
    classify_regime,
    detection_probability,
    expected_penalty,
    objective,
    pretax_profits,
)
from .oracle import (
    ConditionReport,
    GridSpec,
    SplitMix64,
    central_difference,
    check_alpha_conditions,
    grid_argmax,
)
from .scenario_io import load_scenario, parse_scenario, scenario_digest

__version__ = "0.1.0"

__all__ = [
    "ActiveEnforcement",
    "ArmsLengthBand",
    "ClampedBranchError",
    "ClampedSolutionError",
    "ConditionReport",
    "DivisionEconomics",
    "EffectDecomposition",
    "GridSpec",
    "Jurisdiction",
    "Regime",
    "Scenario",
    "SolutionKind",
    "SolveResult",
    "SplitMix64",
    "SweepTable",
    "SWEEP_PARAMETERS",
    "ValidationError",
    "active_enforcement",
    "after_tax_profit",
    "alpha_derivatives",
    "apply_parameter",
    "central_difference",
    "check_alpha_conditions",
    "classify_regime",
    "closed_form_deviation",
    "detection_probability",
    "deviation_sensitivity_to_enforcement",
    "enforcement_effect_decomposition",
    "expected_penalty",
    "grid_argmax",
    "interior_deviation_magnitude",
    "load_scenario",
    "numeric_optimal_price",
    "objective",
    "parse_scenario",
    "pretax_profits",
    "scenario_digest",
    "second_order_value",
    "sweep",
]
