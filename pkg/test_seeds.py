"""
Seed solutions, the real-case bridge, ladder operators and the regularity scan.
"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import optimize, special

from errors import ContractError, DomainError
from jets import ground_state_jet
from seeds import (
    Regular,
    SeedSpec,
    SingularAt,
    ladder_apply,
    lambda_from_nu,
    nu_from_lambda,
    oscillator_state_jet,
    regularity_check,
    seed_chain_jets,
    seed_eval,
    seed_jet,
)


def test_lambda_from_nu_values():
    assert_allclose(lambda_from_nu(-2.5, 1.0), 4.0 / math.sqrt(math.pi), rtol=1e-13)
    assert_allclose(lambda_from_nu(-0.5, 1.0), 2.0 / math.sqrt(math.pi), rtol=1e-13)
    assert lambda_from_nu(0.5, 0.0) == 0
    assert lambda_from_nu(-0.3, 0.7).imag == 0.0


def test_lambda_from_nu_poles():
    # Gamma((1-2e)/4) has a pole at e = 1/2
    with pytest.raises(DomainError):
        lambda_from_nu(0.5, 0.3)
    # Gamma((3-2e)/4) has a pole at e = 3/2
    with pytest.raises(DomainError):
        lambda_from_nu(1.5, 0.3)


def test_nu_round_trip():
    Lambda = lambda_from_nu(-1.1, 0.35)
    assert_allclose(nu_from_lambda(-1.1, Lambda), 0.35, rtol=1e-13)
    assert nu_from_lambda(-1.1, 1j) is None


def test_seed_at_origin():
    u, du = seed_eval(0.37, 0.2 - 0.9j, 0.0)
    assert u == 1
    assert du == 0.2 - 0.9j


def test_seed_rational_case():
    u, du = seed_eval(-2.5, 0.0, 1.0)
    assert_allclose(u, 3.0 * math.exp(0.5), rtol=1e-14)
    assert_allclose(du, 7.0 * math.exp(0.5), rtol=1e-14)


def test_seed_ground_state():
    for x in (-1.3, 0.4, 2.2):
        u, du = seed_eval(0.5, 0.0, x)
        assert_allclose(u, math.exp(-0.5 * x * x), rtol=1e-15)
        assert_allclose(du, -x * math.exp(-0.5 * x * x), rtol=1e-14)


@pytest.mark.parametrize("eps, Lambda, x", [(-0.7, 0.3 + 1.1j, 1.4), (1.7, -0.5j, -2.3), (2.5, 1.0, 0.6)])
def test_seed_matches_scipy_hyp1f1(eps, Lambda, x):
    z = x * x
    y = special.hyp1f1((1 - 2 * eps) / 4, 0.5, z) + x * Lambda * special.hyp1f1((3 - 2 * eps) / 4, 1.5, z)
    u, _ = seed_eval(eps, Lambda, x)
    assert_allclose(u, math.exp(-0.5 * z) * y, rtol=1e-12)


def test_seed_slope_against_finite_difference():
    eps, Lambda, x, h = -1.2, 0.4 + 0.3j, 0.9, 1e-5
    (up, _), (um, _) = seed_eval(eps, Lambda, x + h), seed_eval(eps, Lambda, x - h)
    assert_allclose(seed_eval(eps, Lambda, x)[1], (up - um) / (2 * h), rtol=1e-8)


def test_real_case_bridge_gives_real_seed():
    rng = np.random.default_rng(1)
    for _ in range(20):
        eps = rng.uniform(-4.0, 0.4)
        nu = rng.uniform(-0.99, 0.99)
        x = rng.uniform(-4.0, 4.0)
        u, du = seed_eval(eps, lambda_from_nu(eps, nu), x)
        assert abs(u.imag) <= 1e-15 * abs(u)
        assert abs(du.imag) <= 1e-15 * abs(du)


def test_even_seed_parity():
    for x in (0.3, 1.1, 2.9):
        assert seed_eval(-0.8, 0.0, x)[0] == seed_eval(-0.8, 0.0, -x)[0]


def test_annihilation_kills_ground_state():
    lowered = ladder_apply("-", ground_state_jet(0.7, 6))
    assert np.max(np.abs(lowered.coeffs)) <= 1e-14


def test_creation_gives_first_excited_state():
    x = 0.7
    raised = ladder_apply("+", ground_state_jet(x, 6))
    f = math.exp(-0.5 * x * x)
    expected = [
        math.sqrt(2) * x * f,
        math.sqrt(2) * (1 - x * x) * f,
        math.sqrt(2) * (x**3 - 3 * x) * f / 2,
    ]
    assert_allclose(raised.coeffs[:3].real, expected, rtol=1e-14)
    assert raised.order == 5


def test_ladder_rejects_unknown_sign():
    with pytest.raises(ContractError):
        ladder_apply("*", ground_state_jet(0.0, 3))


def test_double_lowering_matches_chain():
    spec = SeedSpec(-0.6, 0.5 + 0.2j, k=3)
    x = 0.45
    chain = seed_chain_jets(spec, x, 10)
    direct = ladder_apply("-", ladder_apply("-", seed_jet(spec.epsilon1, spec.Lambda, x, 10)))
    scale = np.max(np.abs(direct.coeffs))
    assert np.max(np.abs(chain[2].coeffs[:9] - direct.coeffs)) <= 1e-12 * scale


def test_chain_of_length_one_is_the_seed():
    spec = SeedSpec(-2.5, 0.0, k=1)
    (only,) = seed_chain_jets(spec, 1.0, 4)
    assert_allclose(only.coeffs, seed_jet(-2.5, 0.0, 1.0, 4).coeffs)


def test_chain_energy_shift():
    spec = SeedSpec(-0.5, 0.0, k=2)
    x = 0.8
    u2 = seed_chain_jets(spec, x, 5)[1]
    d = u2.derivatives()
    assert_allclose(d[2], (x * x + 3.0) * d[0], rtol=1e-13)


def test_chain_residuals_at_random_points():
    rng = np.random.default_rng(7)
    for _ in range(100):
        spec = SeedSpec(rng.uniform(-3, 3), complex(rng.normal(), rng.normal()), k=3)
        x = rng.uniform(-3, 3)
        for j, u in enumerate(seed_chain_jets(spec, x, 5), start=1):
            d = u.derivatives()
            residual = d[2] - (x * x - 2 * spec.epsilon(j)) * d[0]
            assert abs(residual) <= 1e-11 * max(abs(d[2]), abs(d[0]), 1.0)


def test_real_chain_stays_real():
    spec = SeedSpec(-2.5, 0.0, k=3)
    for u in seed_chain_jets(spec, 1.0, 5):
        assert np.all(u.coeffs.imag == 0.0)


def test_chain_order_contract():
    with pytest.raises(ContractError):
        seed_chain_jets(SeedSpec(-2.5, 0.0, k=3), 0.0, 3)


def test_oscillator_state_jet():
    x = -0.6
    psi2 = oscillator_state_jet(2, x, 4)
    # (a+)^2 e^{-x^2/2} = (2x^2 - 1) e^{-x^2/2}
    f = math.exp(-0.5 * x * x)
    assert_allclose(psi2.value, (2 * x * x - 1) * f, rtol=1e-13)


@pytest.mark.parametrize("kwargs", [{"k": 0}, {"k": 11}, {"family": 4}])
def test_spec_validation(kwargs):
    with pytest.raises(DomainError):
        SeedSpec(-0.5, 0.0, **kwargs)


def test_spec_energies():
    spec = SeedSpec.from_nu(-0.5, 0.2, k=3)
    assert spec.is_real
    assert spec.energies == (-0.5, -1.5, -2.5)


def test_regular_inside_real_region():
    verdict = regularity_check(SeedSpec.from_nu(-2.5, 0.0))
    assert isinstance(verdict, Regular)
    assert verdict.is_regular
    assert verdict.analytic_rule is True


@pytest.mark.parametrize("eps", [1.5, 2.5])
def test_real_seeds_above_ground_energy_are_singular(eps):
    verdict = regularity_check(SeedSpec(eps, 0.0))
    assert isinstance(verdict, SingularAt)
    assert not verdict.is_regular
    assert len(verdict.zeros) >= 2
    assert_allclose(sorted(verdict.zeros), sorted(-z for z in verdict.zeros), atol=1e-8)


def test_singular_zeros_are_located():
    verdict = regularity_check(SeedSpec(2.5, 0.0))
    assert_allclose(verdict.zeros, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-8)


def test_complex_seed_above_ground_energy_is_regular():
    assert regularity_check(SeedSpec(2.5, 1j)).is_regular


def test_real_third_family_is_singular():
    verdict = regularity_check(SeedSpec(-2.5, 0.0, k=1, family=3))
    assert_allclose(verdict.zeros, [-1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-8)


def test_real_second_family_is_singular_at_origin():
    verdict = regularity_check(SeedSpec(-2.5, 0.0, k=1, family=2))
    assert_allclose(verdict.zeros, [0.0], atol=1e-8)


def test_scan_grid_contract():
    with pytest.raises(ContractError):
        regularity_check(SeedSpec(-2.5, 0.0), grid_n=50)


def test_rule_failure_widens_the_scan():
    nu = 1.01
    verdict = regularity_check(SeedSpec.from_nu(-2.5, nu), interval=(0.0, 0.9))
    assert isinstance(verdict, SingularAt)
    assert verdict.analytic_rule is False

    # for epsilon1 = -5/2 the seed reduces to erf: its single zero lies left of the window
    def reduced(x):
        return (1 + 2 * x * x) * (1 + nu * special.erf(x)) + 2 * nu / math.sqrt(math.pi) * x * math.exp(-x * x)

    expected = optimize.brentq(reduced, -1.5, -0.9, xtol=1e-14)
    assert_allclose(verdict.zeros, [expected], atol=1e-8)
