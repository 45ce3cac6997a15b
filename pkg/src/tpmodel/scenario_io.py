"""Scenario JSON files: strict loading, validation and content digests.

The file layout is::

    {
      "jurisdictions": [{"tax_rate", "theta", "unit_penalty"}, {...}],
      "divisions": [{"sales", "revenue_linear", "revenue_quadratic",
                     "cost_linear", "cost_quadratic"}, {...}],
      "trade_quantity": <number>,
      "band": {"w", "limit_above", "limit_below", "r"}
    }

Unknown keys are rejected so that a typo in an economic parameter cannot
silently fall back to a default; every violation is reported with the JSON
path of the offending field.
"""

from __future__ import annotations

import hashlib
import json
import math

from .model import (
    ArmsLengthBand,
    DivisionEconomics,
    Jurisdiction,
    Scenario,
    ValidationError,
)

_TOP_KEYS = frozenset({"jurisdictions", "divisions", "trade_quantity", "band"})
_JURISDICTION_KEYS = frozenset({"tax_rate", "theta", "unit_penalty"})
_DIVISION_KEYS = frozenset({"sales", "revenue_linear", "revenue_quadratic",
                            "cost_linear", "cost_quadratic"})
_BAND_KEYS = frozenset({"w", "limit_above", "limit_below", "r"})


def _require_mapping(value, path: str, allowed: frozenset) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(
            f"{path}: expected an object, got {type(value).__name__}")
    for key in sorted(set(value) - allowed):
        raise ValidationError(f"{path}.{key}: unknown key")
    for key in sorted(allowed - set(value)):
        raise ValidationError(f"{path}.{key}: missing required key")
    return value


def _require_pair(value, path: str) -> list:
    if not isinstance(value, list) or len(value) != 2:
        raise ValidationError(f"{path}: expected an array of exactly 2 objects")
    return value


def _number(obj: dict, path: str, key: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(
            f"{path}.{key}: expected a number, got {type(value).__name__}")
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(f"{path}.{key}: must be finite, got {value}")
    return v


def _parse_jurisdiction(obj, path: str) -> Jurisdiction:
    obj = _require_mapping(obj, path, _JURISDICTION_KEYS)
    tax_rate = _number(obj, path, "tax_rate")
    theta = _number(obj, path, "theta")
    penalty = _number(obj, path, "unit_penalty")
    if not 0.0 <= tax_rate < 1.0:
        raise ValidationError(f"{path}.tax_rate: must be in [0, 1), got {tax_rate:g}")
    if not 0.0 <= theta <= 1.0:
        raise ValidationError(f"{path}.theta: must be in [0, 1], got {theta:g}")
    if not penalty >= 0.0:
        raise ValidationError(f"{path}.unit_penalty: must be >= 0, got {penalty:g}")
    return Jurisdiction(tax_rate=tax_rate, enforcement_theta=theta,
                        unit_penalty=penalty)


def _parse_division(obj, path: str) -> DivisionEconomics:
    obj = _require_mapping(obj, path, _DIVISION_KEYS)
    sales = _number(obj, path, "sales")
    if not sales >= 0.0:
        raise ValidationError(f"{path}.sales: must be >= 0, got {sales:g}")
    for key in ("revenue_quadratic", "cost_quadratic"):
        if not _number(obj, path, key) >= 0.0:
            raise ValidationError(f"{path}.{key}: must be >= 0, got {obj[key]:g}")
    return DivisionEconomics(
        domestic_sales=sales,
        revenue_linear=_number(obj, path, "revenue_linear"),
        revenue_quadratic=_number(obj, path, "revenue_quadratic"),
        cost_linear=_number(obj, path, "cost_linear"),
        cost_quadratic=_number(obj, path, "cost_quadratic"),
    )


def _parse_band(obj, path: str) -> ArmsLengthBand:
    obj = _require_mapping(obj, path, _BAND_KEYS)
    w = _number(obj, path, "w")
    above = _number(obj, path, "limit_above")
    below = _number(obj, path, "limit_below")
    r = _number(obj, path, "r")
    if not above > w:
        raise ValidationError(f"{path}.limit_above: must exceed w, got {above:g}")
    if not below < w:
        raise ValidationError(f"{path}.limit_below: must be less than w, got {below:g}")
    if not r > 1.0:
        raise ValidationError(f"{path}.r: must be > 1, got {r:g}")
    return ArmsLengthBand(arms_length_price=w, limit_above=above,
                          limit_below=below, convexity=r)


def parse_scenario(document) -> Scenario:
    """Build a validated scenario from a decoded JSON document."""
    top = _require_mapping(document, "$", _TOP_KEYS)
    jurisdictions = _require_pair(top["jurisdictions"], "jurisdictions")
    divisions = _require_pair(top["divisions"], "divisions")
    m = _number(top, "$", "trade_quantity")
    if not m > 0.0:
        raise ValidationError(f"$.trade_quantity: must be > 0, got {m:g}")
    return Scenario(
        jurisdiction_1=_parse_jurisdiction(jurisdictions[0], "jurisdictions[0]"),
        jurisdiction_2=_parse_jurisdiction(jurisdictions[1], "jurisdictions[1]"),
        division_1=_parse_division(divisions[0], "divisions[0]"),
        division_2=_parse_division(divisions[1], "divisions[1]"),
        trade_quantity=m,
        band=_parse_band(top["band"], "band"),
    )


def scenario_digest(document) -> str:
    """Hex SHA-256 of the canonicalized document (whitespace-insensitive)."""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_scenario(path) -> tuple[Scenario, str]:
    """Read, validate and digest a scenario file.

    Raises :class:`ValidationError` for malformed JSON or schema violations
    and lets OS-level errors (missing file, permissions) propagate.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}") from None
    try:
        scenario = parse_scenario(document)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    return scenario, scenario_digest(document)
