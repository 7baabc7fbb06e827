import math

import numpy as np
import pytest
from mpmath import mp, mpf

from pslet.errors import InvalidCharge, NonPositiveRadius, OrderTooLarge
from pslet.potentials import PotentialModel, ScreeningRule, screening_alpha


def test_coulomb_value_and_slope():
    pot = PotentialModel.coulomb(1)
    assert pot.value(2) == mpf("-0.5")
    assert pot.derivative(2, 1) == mpf("0.25")


def test_derivative_order_zero_is_value():
    pot = PotentialModel.yukawa(2, "0.3")
    with mp.workdps(30):
        assert pot.derivative(1.7, 0) == pot.value(1.7)


def test_yukawa_third_derivative_matches_seven_point_stencil():
    # independent oracle: 7-point central stencil for f''' applied to V itself
    pot = PotentialModel.yukawa(1, "0.1")
    with mp.workdps(40):
        r, h = mpf(3), mpf("0.002")
        f = [pot.value(r + k * h) for k in range(-3, 4)]
        stencil = (-f[6] + 8 * f[5] - 13 * f[4] + 13 * f[2] - 8 * f[1] + f[0]) / (8 * h ** 3)
        closed = pot.derivative(r, 3)
        assert abs(closed - stencil) / abs(stencil) < 1e-8


@pytest.mark.parametrize("alpha", ["0", "0.1", "0.3"])
@pytest.mark.parametrize("n", range(1, 7))
def test_derivative_consistent_with_lower_order(alpha, n):
    # d^n V must be the (5-point) finite difference of d^(n-1) V
    pot = PotentialModel.yukawa(1, alpha)
    with mp.workdps(40):
        h = mpf("0.001")
        for r in (mpf("0.5"), mpf(2), mpf(10)):
            f = [pot.derivative(r + k * h, n - 1) for k in range(-2, 3)]
            fd = (-f[4] + 8 * f[3] - 8 * f[1] + f[0]) / (12 * h)
            closed = pot.derivative(r, n)
            assert abs(closed - fd) / max(abs(closed), mpf("1e-30")) < 1e-8


def test_yukawa_zero_screening_equals_coulomb():
    yuk = PotentialModel.yukawa(3, 0)
    cou = PotentialModel.coulomb(3)
    with mp.workdps(30):
        for r in (0.3, 1.0, 7.5):
            for n in (0, 1, 5, 12, 24):
                a, b = yuk.derivative(r, n), cou.derivative(r, n)
                assert abs(a - b) <= abs(b) * 1e-14


def test_value_floats_matches_scalar_path():
    pot = PotentialModel.yukawa(4, "0.25")
    r = np.array([0.5, 1.0, 3.0, 12.0])
    vals = pot.value_floats(r)
    for ri, vi in zip(r, vals):
        assert math.isclose(vi, float(pot.value(ri)), rel_tol=1e-14)


def test_radius_and_order_guards():
    pot = PotentialModel.yukawa(1, "0.1")
    with pytest.raises(NonPositiveRadius):
        pot.value(0)
    with pytest.raises(NonPositiveRadius):
        pot.derivative(-2, 1)
    with pytest.raises(OrderTooLarge):
        pot.derivative(1.0, 25)
    small_cap = PotentialModel.yukawa(1, "0.1", derivative_cap=6)
    with pytest.raises(OrderTooLarge):
        small_cap.derivative(1.0, 7)


def test_custom_provider_roundtrip():
    # analytic provider for -1/r: d^n V = (-1)^(n+1) n! / r^(n+1)
    def provider(r, n):
        return (-1) ** (n + 1) * mpf(math.factorial(n)) / mpf(r) ** (n + 1)

    pot = PotentialModel.custom(provider)
    ref = PotentialModel.coulomb(1)
    with mp.workdps(30):
        for n in range(0, 8):
            a, b = pot.derivative(1.5, n), ref.derivative(1.5, n)
            assert abs(a - b) <= abs(b) * 1e-25
    assert not pot.reduced_precision


def test_custom_from_value_flags_reduced_precision():
    pot = PotentialModel.custom_from_value(lambda r: -mp.exp(-r / 10) / r)
    ref = PotentialModel.yukawa(1, "0.1")
    assert pot.reduced_precision
    with mp.workdps(30):
        for n in (0, 1, 2, 3):
            a, b = pot.derivative(2.0, n), ref.derivative(2.0, n)
            assert abs(a - b) <= abs(b) * 1e-8


# --- screening rules ---

def test_scaled_screening_vanishes_for_hydrogen():
    assert screening_alpha(ScreeningRule("scaled"), 1) == 0


def test_scaled_screening_maximum():
    val = screening_alpha(ScreeningRule("scaled"), 2)
    assert abs(val - mpf("0.38891326")) < 1e-8


def test_scaled_screening_decreases_beyond_two():
    rule = ScreeningRule("scaled")
    values = [screening_alpha(rule, z) for z in range(1, 201)]
    assert max(values) == values[1]           # peak at Z = 2
    assert all(v < mpf("0.4") for v in values)
    assert all(a > b for a, b in zip(values[1:-1], values[2:]))


def test_dimensional_screening_closed_form():
    # independent evaluation of alpha0 * Z^(1/3) * (1 - 1/Z)^(2/3)
    with mp.workdps(30):
        z = 3
        expected = mpf("0.98") * mp.cbrt(z) * (1 - mpf(1) / z) ** (mpf(2) / 3)
        got = screening_alpha(ScreeningRule("dimensional"), z)
        assert abs(got - expected) < mpf("1e-25")


def test_alternate_alpha0_knob():
    rule = ScreeningRule("dimensional", alpha0=mpf(1))
    base = ScreeningRule("dimensional")
    assert screening_alpha(rule, 8) > screening_alpha(base, 8)


def test_invalid_charge_rejected():
    rule = ScreeningRule("scaled")
    with pytest.raises(InvalidCharge):
        screening_alpha(rule, 0)
    with pytest.raises(InvalidCharge):
        screening_alpha(rule, 2.5)
