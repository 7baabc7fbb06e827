import pytest
from mpmath import exp, mp, mpf, sqrt

from pslet.classical import QuantumProblem, frequency_w, solve_r0
from pslet.errors import (BoundStateNotFound, ImaginaryFrequency, ZeroForce)
from pslet.potentials import PotentialModel, ScreeningRule, screening_alpha


def _yukawa_w(alpha, r):
    # closed form specialized to the Yukawa family, evaluated independently
    return sqrt((-alpha ** 2 * r ** 2 + alpha * r + 1) / (alpha * r + 1))


def test_coulomb_frequency_is_unity():
    pot = PotentialModel.coulomb(1)
    for r0 in (0.3, 1.0, 8.0):
        assert abs(frequency_w(pot, r0) - 1) < 1e-15


def test_yukawa_frequency_closed_form():
    with mp.workdps(30):
        alpha = mpf("0.1")
        pot = PotentialModel.yukawa(1, alpha)
        got = frequency_w(pot, 2)
        assert abs(got - _yukawa_w(alpha, mpf(2))) < 1e-14


def test_imaginary_frequency_beyond_window():
    # numerator -a^2 r^2 + a r + 1 turns negative at a*r = (1+sqrt(5))/2
    pot = PotentialModel.yukawa(1, "0.5")
    with pytest.raises(ImaginaryFrequency):
        frequency_w(pot, 3.3)


def test_zero_force_flat_potential():
    flat = PotentialModel.custom(lambda r, n: mpf(-1) if n == 0 else mpf(0))
    with pytest.raises(ZeroForce):
        frequency_w(flat, 1.0)


def test_coulomb_ground_orbit():
    with mp.workdps(50):
        cfg = solve_r0(QuantumProblem.scaled(0, 0))
        assert abs(cfg.r0 - 1) < mpf("1e-28")
        assert abs(cfg.w - 1) < mpf("1e-28")
        assert abs(cfg.beta + 1) < mpf("1e-28")
        assert abs(cfg.lbar - 1) < mpf("1e-28")
        assert abs(cfg.q - 1) < mpf("1e-28")
        assert abs(cfg.leading_energy + mpf("0.5")) < mpf("1e-28")


def test_coulomb_l1_orbit():
    with mp.workdps(50):
        cfg = solve_r0(QuantumProblem.scaled(0, 1))
        assert abs(cfg.r0 - 4) < mpf("1e-27")
        assert abs(cfg.lbar - 2) < mpf("1e-27")
        assert abs(cfg.leading_energy + mpf("0.125")) < mpf("1e-28")


@pytest.mark.parametrize("l", [0, 1, 2, 3])
@pytest.mark.parametrize("nr", [0, 1])
def test_coulomb_leading_term_is_hydrogenic(l, nr):
    with mp.workdps(50):
        z = 2
        problem = QuantumProblem(PotentialModel.coulomb(z), l, nr)
        cfg = solve_r0(problem)
        n = l + nr + 1
        expected = -mpf(z) ** 2 / (2 * mpf(n) ** 2)
        assert abs(cfg.leading_energy - expected) < abs(expected) * mpf("1e-28")


def test_r0_matches_independent_bisection():
    # oracle: plain bisection of the Yukawa-specialized orbit equation,
    # built only from closed forms local to this test
    with mp.workdps(50):
        alpha = mpf("0.1")

        def g(r):
            return (mpf(1) / 2) * (1 + _yukawa_w(alpha, r)) - sqrt(
                r * exp(-alpha * r) * (alpha * r + 1))

        lo, hi = mpf("0.5"), mpf(5)
        g_lo = g(lo)
        for _ in range(120):
            mid = (lo + hi) / 2
            if g_lo * g(mid) <= 0:
                hi = mid
            else:
                lo = mid
                g_lo = g(lo)
        oracle_r0 = (lo + hi) / 2

        cfg = solve_r0(QuantumProblem.scaled("0.1", 0))
        assert abs(cfg.r0 - oracle_r0) < mpf("1e-12")


@pytest.mark.parametrize("alpha_prime,l", [("0.1", 0), ("0.3", 0), ("0.2", 1)])
def test_orbit_invariants(alpha_prime, l, solved):
    with mp.workdps(50):
        cfg = solved("scaled", alpha_prime, l).orbit
        assert abs(cfg.residual) < mpf("1e-30")
        assert abs(cfg.e_minus1) <= mpf("1e-12") * abs(cfg.e_minus2)
        assert cfg.curvature > 0
        assert cfg.lbar > 0 and cfg.q == cfg.lbar ** 2
        # numeric second-derivative check of the leading coefficient
        pot = cfg.problem.potential
        q = cfg.q

        def leading(r):
            return 1 / (2 * r ** 2) + pot.value(r) / q

        assert mp.diff(leading, cfg.r0, 2) > 0


def test_dimensional_scaled_consistency():
    with mp.workdps(50):
        for z in (3, 19, 49):
            alpha_prime = screening_alpha(ScreeningRule("scaled"), z)
            dim = solve_r0(QuantumProblem.dimensional(z, 0))
            sca = solve_r0(QuantumProblem.scaled(alpha_prime, 0))
            assert abs(dim.r0 - sca.r0 / z) <= sca.r0 / z * mpf("1e-10")
            assert abs(dim.leading_energy - z ** 2 * sca.leading_energy) <= \
                abs(dim.leading_energy) * mpf("1e-10")


def test_no_bound_orbit_for_large_l():
    with pytest.raises(BoundStateNotFound):
        solve_r0(QuantumProblem.scaled("0.3", 5))


def test_excited_radial_configs_allowed():
    # nr > 0 still yields an orbit; only the series beyond two terms refuses
    with mp.workdps(50):
        cfg = solve_r0(QuantumProblem.scaled("0.05", 0, nr=1))
        assert cfg.r0 > 0
        assert abs(cfg.e_minus1) <= mpf("1e-12") * abs(cfg.e_minus2)


def test_quantum_number_validation():
    with pytest.raises(ValueError):
        QuantumProblem(PotentialModel.coulomb(1), -1)
