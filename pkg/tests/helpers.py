"""Shared scenario builders and seeded generators for the test suite."""

from tpmodel import (
    ArmsLengthBand,
    DivisionEconomics,
    Jurisdiction,
    Scenario,
)


def make_scenario(t1=0.2, t2=0.3, theta1=0.0, phi1=0.0, theta2=0.8, phi2=1.0,
                  w=10.0, above=20.0, below=0.0, r=2.0, m=100.0,
                  div1=(50.0, 5.0, 0.0, 2.0, 0.0),
                  div2=(150.0, 8.0, 0.0, 1.0, 0.0)):
    return Scenario(
        jurisdiction_1=Jurisdiction(t1, theta1, phi1),
        jurisdiction_2=Jurisdiction(t2, theta2, phi2),
        division_1=DivisionEconomics(*div1),
        division_2=DivisionEconomics(*div2),
        trade_quantity=m,
        band=ArmsLengthBand(w, above, below, r),
    )


def canonical_scenario():
    """Interior optimum at 16.25: deviation 6.25, alpha 0.390625."""
    return make_scenario()


def corner_scenario():
    """Weak enforcement pushes the optimum onto the upper limit."""
    return make_scenario(theta2=0.2, phi2=0.5)


def neutral_scenario():
    """Equal tax rates: no incentive to deviate from the reference price."""
    return make_scenario(t1=0.25, t2=0.25, theta1=0.5, phi1=1.0,
                         theta2=0.5, phi2=1.0)


def lowtp_scenario():
    """Canonical setup reflected: jurisdiction 1 carries the higher rate."""
    return make_scenario(t1=0.3, t2=0.2, theta1=0.8, phi1=1.0,
                         theta2=0.0, phi2=0.0)


def rand_int(rng, n):
    return rng.next_u64() % n


def random_interior_scenario(rng, convexity=2.0):
    """Draw a scenario whose optimum is interior by at least 10% of the width.

    The combined enforcement factor is sampled above the level that would
    push the unconstrained deviation to 90% of the band width, so the
    closed form is guaranteed interior with margin; the non-harmed
    jurisdiction gets arbitrary enforcement parameters, which must not
    matter.
    """
    w = 5.0 + 45.0 * rng.uniform()
    width_above = 1.0 + 19.0 * rng.uniform()
    width_below = 1.0 + 19.0 * rng.uniform()
    high = rand_int(rng, 2) == 0
    low_rate = 0.05 + 0.25 * rng.uniform()
    wedge = 0.02 + 0.28 * rng.uniform()
    if high:
        t1, t2 = low_rate, low_rate + wedge
    else:
        t1, t2 = low_rate + wedge, low_rate
    width = width_above if high else width_below
    r = convexity
    g_floor = wedge * width / (r * 0.9 ** (r - 1.0))
    g = g_floor * (1.2 + 6.8 * rng.uniform())
    theta = 0.3 + 0.7 * rng.uniform()
    phi = g / theta
    other = Jurisdiction(0.0, rng.uniform(), 2.0 * rng.uniform())
    harmed_rate = t2 if high else t1
    harmed = Jurisdiction(harmed_rate, theta, phi)
    if high:
        j1, j2 = Jurisdiction(t1, other.enforcement_theta, other.unit_penalty), harmed
    else:
        j1, j2 = harmed, Jurisdiction(t2, other.enforcement_theta, other.unit_penalty)
    m = 10.0 + 190.0 * rng.uniform()
    div1 = DivisionEconomics(20.0 + 180.0 * rng.uniform(),
                             3.0 + 6.0 * rng.uniform(),
                             0.002 * rng.uniform(),
                             0.5 + 2.5 * rng.uniform(),
                             0.002 * rng.uniform())
    div2 = DivisionEconomics(m + 20.0 + 180.0 * rng.uniform(),
                             3.0 + 6.0 * rng.uniform(),
                             0.002 * rng.uniform(),
                             0.5 + 2.5 * rng.uniform(),
                             0.002 * rng.uniform())
    return Scenario(j1, j2, div1, div2, m,
                    ArmsLengthBand(w, w + width_above, w - width_below, r))


def scaling_law_scenario(rng):
    """Interior quadratic-penalty scenario on a dyadic parameter lattice.

    Tax rates are multiples of 1/128 and the band geometry multiples of
    1/4, so doubling the wedge or the width scales the closed form's
    inputs exactly in floating point; the margin keeps every doubled
    variant interior.  Theta is drawn at or below 1/2 so it can be doubled
    without leaving [0, 1].
    """
    w = 0.25 * (4 + rand_int(rng, 185))
    width = 0.25 * (4 + rand_int(rng, 61))
    base = (1 + rand_int(rng, 16)) / 64.0
    wedge = (1 + rand_int(rng, 12)) / 128.0
    high = rand_int(rng, 2) == 0
    # unconstrained deviation at most 0.4 of the width: doubling the wedge
    # or the width keeps the optimum interior
    g_floor = wedge * width / (2.0 * 0.4)
    g = g_floor * (1.1 + 4.0 * rng.uniform())
    theta = 0.25 + 0.25 * rng.uniform()
    phi = g / theta
    if high:
        j1 = Jurisdiction(base, 0.0, 0.0)
        j2 = Jurisdiction(base + wedge, theta, phi)
    else:
        j1 = Jurisdiction(base + wedge, theta, phi)
        j2 = Jurisdiction(base, 0.0, 0.0)
    m = 10.0 + 90.0 * rng.uniform()
    div = DivisionEconomics(m + 50.0, 6.0, 0.0, 1.0, 0.0)
    return Scenario(j1, j2, div, div, m,
                    ArmsLengthBand(w, w + width, w - width, 2.0))


def mirror_pair(rng):
    """A shifting-up scenario and its exact reflection around the reference.

    Every quantity that feeds the closed form is a dyadic rational (the
    combined enforcement factor is a power of two), so the two optima are
    exact mirror images bit for bit, not merely up to rounding.
    """
    w = 2.0 + 0.25 * rand_int(rng, 193)
    width = float(2 ** rand_int(rng, 4))
    base = (1 + rand_int(rng, 20)) / 64.0
    wedge = (1 + rand_int(rng, 16)) / 64.0
    theta = (1.0, 0.5, 0.25)[rand_int(rng, 3)]
    phi = (0.5, 1.0, 2.0, 4.0)[rand_int(rng, 4)]
    d = wedge * width * width / (2.0 * theta * phi)
    while d > 0.75 * width:
        phi *= 2.0
        d *= 0.5
    while d < 0.05 * width:
        phi *= 0.5
        d *= 2.0
    m = 25.0 + float(rand_int(rng, 100))
    div1 = DivisionEconomics(40.0, 5.0, 0.0, 2.0, 0.0)
    div2 = DivisionEconomics(m + 60.0, 8.0, 0.0, 1.0, 0.0)
    band = ArmsLengthBand(w, w + width, w - width, 2.0)
    high = Scenario(Jurisdiction(base, 0.0, 0.0),
                    Jurisdiction(base + wedge, theta, phi),
                    div1, div2, m, band)
    low = Scenario(Jurisdiction(base + wedge, theta, phi),
                   Jurisdiction(base, 0.0, 0.0),
                   div1, div2, m, band)
    return high, low


def scenario_document(scenario):
    """JSON document for a Scenario, in the scenario-file layout."""
    def jur(j):
        return {"tax_rate": j.tax_rate, "theta": j.enforcement_theta,
                "unit_penalty": j.unit_penalty}

    def div(d):
        return {"sales": d.domestic_sales,
                "revenue_linear": d.revenue_linear,
                "revenue_quadratic": d.revenue_quadratic,
                "cost_linear": d.cost_linear,
                "cost_quadratic": d.cost_quadratic}

    band = scenario.band
    return {
        "jurisdictions": [jur(scenario.jurisdiction_1), jur(scenario.jurisdiction_2)],
        "divisions": [div(scenario.division_1), div(scenario.division_2)],
        "trade_quantity": scenario.trade_quantity,
        "band": {"w": band.arms_length_price, "limit_above": band.limit_above,
                 "limit_below": band.limit_below, "r": band.convexity},
    }
