import numpy as np
import pytest

from tpmodel import (
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
from helpers import canonical_scenario, make_scenario, neutral_scenario


def test_jurisdiction_bounds():
    Jurisdiction(0.0, 0.0, 0.0)
    Jurisdiction(0.999, 1.0, 50.0)
    with pytest.raises(ValidationError):
        Jurisdiction(1.0, 0.5, 1.0)
    with pytest.raises(ValidationError):
        Jurisdiction(-0.1, 0.5, 1.0)
    with pytest.raises(ValidationError):
        Jurisdiction(0.3, 1.2, 1.0)
    with pytest.raises(ValidationError):
        Jurisdiction(0.3, 0.5, -1.0)


def test_division_bounds():
    DivisionEconomics(0.0, -3.0, 0.0, -1.0, 0.0)  # linears may be negative
    with pytest.raises(ValidationError):
        DivisionEconomics(-1.0, 5.0, 0.0, 2.0, 0.0)
    with pytest.raises(ValidationError):
        DivisionEconomics(50.0, 5.0, -0.1, 2.0, 0.0)
    with pytest.raises(ValidationError):
        DivisionEconomics(50.0, 5.0, 0.0, 2.0, -0.1)
    with pytest.raises(ValidationError):
        DivisionEconomics(50.0, float("nan"), 0.0, 2.0, 0.0)


def test_division_revenue_and_cost():
    div = DivisionEconomics(50.0, 5.0, 0.01, 2.0, 0.005)
    assert div.revenue(10.0) == pytest.approx(5.0 * 10 - 0.01 * 100)
    assert div.cost(10.0) == pytest.approx(2.0 * 10 + 0.005 * 100)


def test_band_ordering_and_convexity():
    ArmsLengthBand(10.0, 20.0, 0.0, 1.01)
    with pytest.raises(ValidationError):
        ArmsLengthBand(10.0, 10.0, 0.0, 2.0)  # w must sit strictly inside
    with pytest.raises(ValidationError):
        ArmsLengthBand(10.0, 20.0, 10.0, 2.0)
    with pytest.raises(ValidationError):
        ArmsLengthBand(10.0, 20.0, 0.0, 1.0)  # curvature requires r > 1
    with pytest.raises(ValidationError):
        ArmsLengthBand(10.0, 20.0, 0.0, 0.5)


def test_band_sides():
    band = ArmsLengthBand(10.0, 22.0, 4.0, 2.0)
    assert band.active_limit(Regime.HIGH_TP) == 22.0
    assert band.active_limit(Regime.LOW_TP) == 4.0
    assert band.width(Regime.HIGH_TP) == 12.0
    assert band.width(Regime.LOW_TP) == 6.0
    assert band.side_sign(Regime.HIGH_TP) == 1.0
    assert band.side_sign(Regime.LOW_TP) == -1.0
    with pytest.raises(ValidationError):
        band.active_limit(Regime.NEUTRAL)


def test_scenario_requires_positive_trade():
    with pytest.raises(ValidationError):
        make_scenario(m=0.0)


def test_scenario_warns_on_negative_division2_output():
    with pytest.warns(UserWarning):
        make_scenario(m=200.0)  # division 2 sells 150 < 200 traded units


def test_classify_regime():
    assert classify_regime(0.2, 0.3) is Regime.HIGH_TP
    assert classify_regime(0.3, 0.2) is Regime.LOW_TP
    assert classify_regime(0.25, 0.25) is Regime.NEUTRAL
    # only exact equality is neutral
    assert classify_regime(0.25, 0.25 + 1e-15) is Regime.HIGH_TP


def test_active_enforcement_selects_harmed_side():
    act = active_enforcement(canonical_scenario())
    assert act.harmed_jurisdiction == 2
    assert act.theta == 0.8
    assert act.unit_penalty == 1.0
    assert act.combined_factor == pytest.approx(0.8)

    low = make_scenario(t1=0.3, t2=0.2, theta1=0.6, phi1=2.0,
                        theta2=0.9, phi2=9.0)
    act = active_enforcement(low)
    assert act.harmed_jurisdiction == 1
    assert act.combined_factor == pytest.approx(1.2)

    assert active_enforcement(neutral_scenario()) is None


def test_pretax_profits_canonical_values():
    scenario = canonical_scenario()
    pi1, pi2 = pretax_profits(scenario, 16.25)
    # division 1: 5*50 - 2*150 + 16.25*100
    assert pi1 == pytest.approx(1575.0)
    # division 2: 8*150 - 1*50 - 16.25*100
    assert pi2 == pytest.approx(-475.0)


def test_consolidated_pretax_profit_ignores_the_price(canonical):
    prices = np.linspace(0.0, 20.0, 101)
    pi1, pi2 = pretax_profits(canonical, prices)
    total = pi1 + pi2
    assert np.all(np.abs(total - total[0]) <= 1e-9 * np.abs(total[0]))


def test_after_tax_profit_linear_in_price(canonical):
    # slope is (t2 - t1) * m, the whole incentive to shift income
    assert after_tax_profit(canonical, 12.0) == pytest.approx(885.0)
    assert after_tax_profit(canonical, 16.25) == pytest.approx(927.5)
    slope = (after_tax_profit(canonical, 15.0)
             - after_tax_profit(canonical, 5.0)) / 10.0
    assert slope == pytest.approx((0.3 - 0.2) * 100.0)


def test_detection_probability_shape(canonical):
    band = canonical.band
    assert detection_probability(band, Regime.HIGH_TP, 10.0) == 0.0
    assert detection_probability(band, Regime.HIGH_TP, 20.0) == 1.0
    assert detection_probability(band, Regime.HIGH_TP, 16.25) == pytest.approx(0.390625)
    # clamped on both sides of the active branch
    assert detection_probability(band, Regime.HIGH_TP, 8.0) == 0.0
    assert detection_probability(band, Regime.HIGH_TP, 25.0) == 1.0
    assert detection_probability(band, Regime.LOW_TP, 4.0) == pytest.approx(0.36)
    assert detection_probability(band, Regime.LOW_TP, 12.0) == 0.0


def test_detection_probability_vectorized(canonical):
    prices = np.array([8.0, 10.0, 15.0, 20.0, 23.0])
    alphas = detection_probability(canonical.band, Regime.HIGH_TP, prices)
    assert alphas == pytest.approx([0.0, 0.0, 0.25, 1.0, 1.0])
    assert np.all(np.diff(alphas) >= 0.0)


@pytest.mark.parametrize("r", [1.5, 2.0, 3.0])
def test_alpha_derivatives_match_the_power_law(r):
    band = ArmsLengthBand(10.0, 20.0, 0.0, r)
    u, width = 4.0, 10.0
    first, second = alpha_derivatives(band, Regime.HIGH_TP, 14.0)
    assert first == pytest.approx(r * u ** (r - 1.0) / width ** r)
    assert second == pytest.approx(r * (r - 1.0) * u ** (r - 2.0) / width ** r)
    # shifting down mirrors the slope's sign
    first_low, second_low = alpha_derivatives(band, Regime.LOW_TP, 6.0)
    assert first_low == pytest.approx(-first)
    assert second_low == pytest.approx(second)


def test_alpha_derivatives_clamped_branches(canonical):
    band = canonical.band
    with pytest.raises(ClampedBranchError) as info:
        alpha_derivatives(band, Regime.HIGH_TP, 9.0)
    assert info.value.branch == "compliant"
    with pytest.raises(ClampedBranchError) as info:
        alpha_derivatives(band, Regime.HIGH_TP, 20.0)
    assert info.value.branch == "certain"


def test_expected_penalty_canonical(canonical):
    assert expected_penalty(canonical, 16.25) == pytest.approx(31.25)
    assert expected_penalty(canonical, 10.0) == 0.0
    # certain detection at the limit: phi * m * theta
    assert expected_penalty(canonical, 20.0) == pytest.approx(80.0)


def test_expected_penalty_neutral_is_zero(neutral):
    prices = np.linspace(0.0, 20.0, 7)
    assert np.all(expected_penalty(neutral, prices) == 0.0)


def test_objective_canonical(canonical):
    assert objective(canonical, 16.25) == pytest.approx(896.25)
    assert objective(canonical, 12.0) == pytest.approx(885.0 - 3.2)
    prices = np.array([10.0, 16.25])
    assert objective(canonical, prices) == pytest.approx([865.0, 896.25])
