import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from errors import ContractError, DegenerateFactorError, DomainError, SingularityError
from jets import Jet, ground_state_jet, jet_log_derivative
from seeds import SeedSpec, oscillator_state_jet, seed_chain_jets, seed_jet
from susy import (
    SusySystem,
    bkp_action,
    darboux_step,
    eigen_residual,
    extremal_state_logderiv,
    missing_state_eigenfunction,
    missing_state_eigenfunction_jet,
    partner_potential,
    partner_potential_jet,
    pole_wronskians,
    transformed_eigenfunction,
    transformed_eigenfunction_jet,
    wronskian_jet,
)

RATIONAL = SeedSpec(-2.5, 0.0, k=1)


def _second_log_derivative(f: Jet) -> complex:
    return jet_log_derivative(f).derivative().coeffs[0]


def test_extremal_energies():
    system = SusySystem(SeedSpec(0.3, 1j, k=4))
    e1, e2, e3 = system.extremal_energies()
    assert e2 == 0.5
    assert_allclose(e3 - e1, 4.0)
    assert system.energy(1) == e1
    with pytest.raises(DomainError):
        system.energy(0)


def test_wronskian_of_one_function_is_the_function():
    u = seed_jet(-0.7, 0.4j, 0.3, 5)
    assert_allclose(wronskian_jet([u], 5).coeffs, u.coeffs)


def test_wronskian_of_repeated_function_vanishes():
    u = seed_jet(-0.7, 0.4, 0.3, 6)
    w = wronskian_jet([u, u], 3)
    assert np.max(np.abs(w.coeffs)) <= 1e-13 * np.max(np.abs(u.coeffs)) ** 2


def test_wronskian_of_oscillator_states():
    for x in (-1.2, 0.0, 0.8):
        f = ground_state_jet(x, 4)
        g = Jet.variable(x, 4) * f
        w = wronskian_jet([f, g], 2)
        expected = math.exp(-x * x)
        assert_allclose(w.coeffs[:2].real, [expected, -2 * x * expected], rtol=1e-13, atol=1e-15)


def test_wronskian_with_vanishing_column():
    # W(x^2, x^3) = x^4 at the origin, where the whole first column vanishes
    x2 = Jet(0.0, [0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    x3 = Jet(0.0, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0])
    w = wronskian_jet([x2, x3], 4)
    assert_allclose(w.coeffs, [0.0, 0.0, 0.0, 0.0, 1.0], atol=1e-15)


def test_empty_wronskian_and_contracts():
    assert wronskian_jet([], 2, center=0.4).coeffs.tolist() == [1, 0, 0]
    with pytest.raises(ContractError):
        wronskian_jet([], 2)
    with pytest.raises(ContractError):
        wronskian_jet([seed_jet(0.1, 0.0, 0.0, 3)] * 3, 2)


def test_first_family_log_derivative_rational():
    value, slope = extremal_state_logderiv(SusySystem(RATIONAL), 1, 1.0)
    assert_allclose(value, -7.0 / 3.0, rtol=1e-13)
    assert_allclose(slope, -5.0 / 9.0, rtol=1e-12)


def test_first_family_k1_is_inverse_seed():
    spec = SeedSpec(-0.4, 0.3 + 0.6j, k=1)
    x = 0.9
    u = seed_jet(spec.epsilon1, spec.Lambda, x, 3)
    value, _ = extremal_state_logderiv(SusySystem(spec), 1, x)
    assert_allclose(value, -u.coeffs[1] / u.coeffs[0], rtol=1e-13)


def test_second_family_complex_is_finite():
    system = SusySystem(SeedSpec(0.5, 1 + 1j, k=1, family=2))
    for x in np.linspace(-5, 5, 41):
        value, slope = extremal_state_logderiv(system, 2, x)
        assert np.isfinite(value) and np.isfinite(slope)


def test_pole_wronskians_per_family():
    assert len(pole_wronskians(SeedSpec(-2.5, 0.0, k=1), 0.3)) == 1
    assert len(pole_wronskians(SeedSpec(-2.5, 0.0, k=3), 0.3)) == 2
    assert len(pole_wronskians(SeedSpec(-2.5, 1j, k=2, family=3), 0.3)) == 2


def test_bkp_annihilates_its_seed():
    system = SusySystem(SeedSpec(-1.3, 0.2, k=1))
    x = 0.6
    u1 = seed_jet(-1.3, 0.2, x, 5)
    image = bkp_action(system, u1, x)
    assert np.max(np.abs(image.coeffs)) <= 1e-12 * np.max(np.abs(u1.coeffs))


def test_bkp_first_order_unfolds_definition():
    system = SusySystem(RATIONAL)
    x = 0.7
    psi = ground_state_jet(x, 4)
    u1 = seed_jet(-2.5, 0.0, x, 4)
    expected = wronskian_jet([u1, psi], 3) / wronskian_jet([u1], 3) * (-1 / math.sqrt(2))
    assert_allclose(bkp_action(system, psi, x).coeffs, expected.coeffs, rtol=1e-13)


def test_bkp_matches_two_darboux_steps():
    spec = SeedSpec(-0.7, 0.3, k=2)
    x = 0.4
    order = 8
    u1, u2 = seed_chain_jets(spec, x, order)
    psi = oscillator_state_jet(1, x, order)
    stepped = darboux_step(darboux_step(u1, u2), darboux_step(u1, psi))
    crum = bkp_action(SusySystem(spec), psi, x)
    assert_allclose(stepped.coeffs, crum.coeffs, rtol=1e-10, atol=1e-14)


def test_bkp_order_contract():
    system = SusySystem(SeedSpec(-0.7, 0.3, k=2))
    with pytest.raises(ContractError):
        bkp_action(system, ground_state_jet(0.1, 3), 0.1)


def test_rational_partner_potential():
    system = SusySystem(RATIONAL)
    assert_allclose(partner_potential(system, 0.0), -5.0, rtol=1e-13)
    assert_allclose(partner_potential(system, 1.0), -1.0 / 18.0, rtol=1e-12)


def test_ground_state_partner_potential():
    system = SusySystem(SeedSpec(0.5, 0.0, k=1))
    for x in (-2.0, 0.0, 0.7):
        assert_allclose(partner_potential(system, x), 0.5 * x * x + 1.0, rtol=1e-13)


def test_iterated_first_order_potential():
    spec = SeedSpec(-0.9, 0.45, k=2)
    system = SusySystem(spec)
    rng = np.random.default_rng(3)
    for x in rng.uniform(-3.0, 3.0, 50):
        u1, u2 = seed_chain_jets(spec, x, 6)
        v = darboux_step(u1, u2)
        iterated = 0.5 * x * x - _second_log_derivative(u1.truncate(5)) - _second_log_derivative(v)
        assert_allclose(partner_potential(system, x), iterated, rtol=1e-10, atol=1e-10)


def test_real_regular_potential_is_real():
    system = SusySystem(SeedSpec.from_nu(-1.3, 0.6, k=2))
    for x in np.linspace(-4, 4, 17):
        v = partner_potential(system, x)
        assert abs(v.imag) <= 1e-13 * abs(v)


@pytest.mark.parametrize(
    "spec",
    [RATIONAL, SeedSpec(-0.5, 0.0, k=2), SeedSpec.from_nu(-0.8, 0.4, k=3), SeedSpec(1.7, 1j, k=1)],
)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_transformed_eigenfunction_residuals(spec, n):
    system = SusySystem(spec)
    for x in np.linspace(-4, 4, 9):
        psi = transformed_eigenfunction_jet(system, n, x)
        potential = partner_potential_jet(system, x)
        residual = eigen_residual(psi, potential, n + 0.5)
        assert abs(residual) <= 1e-9 * max(abs(psi.value), 1.0)


def test_transformed_eigenfunction_value_matches_jet():
    system = SusySystem(RATIONAL)
    assert transformed_eigenfunction(system, 1, 0.3) == transformed_eigenfunction_jet(system, 1, 0.3).value


def test_degenerate_factorization_energy():
    with pytest.raises(DegenerateFactorError):
        transformed_eigenfunction(SusySystem(SeedSpec(0.5, 0.0, k=1)), 0, 0.2)


def test_missing_state_single_seed_is_inverse():
    x = 0.35
    u, _ = seed_jet(-2.5, 0.0, x, 2).coeffs[:2]
    assert_allclose(missing_state_eigenfunction(SusySystem(RATIONAL), 1, x), 1.0 / u, rtol=1e-14)


def test_last_missing_state_is_first_extremal_state():
    spec = SeedSpec(-0.4, 0.2 + 0.5j, k=3)
    system = SusySystem(spec)
    x = -0.8
    log_d = jet_log_derivative(missing_state_eigenfunction_jet(system, 3, x))
    value, _ = extremal_state_logderiv(system, 1, x)
    assert_allclose(log_d.coeffs[0], value, rtol=1e-12)


@pytest.mark.parametrize("spec", [SeedSpec(-0.5, 0.0, k=2), SeedSpec(-1.1, 0.3j, k=3)])
def test_missing_state_residuals(spec):
    system = SusySystem(spec)
    for j in range(1, spec.k + 1):
        for x in (-1.5, 0.6, 2.0):
            psi = missing_state_eigenfunction_jet(system, j, x)
            residual = eigen_residual(psi, partner_potential_jet(system, x), spec.epsilon(j))
            assert abs(residual) <= 1e-9 * max(abs(psi.value), 1.0)


def test_missing_state_index_and_poles():
    system = SusySystem(SeedSpec(2.5, 0.0, k=1))
    with pytest.raises(DomainError):
        missing_state_eigenfunction(system, 2, 0.0)
    with pytest.raises(SingularityError):
        missing_state_eigenfunction(system, 1, 1 / math.sqrt(2))
