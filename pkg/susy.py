"""
Wronskian and Crum machinery for k-th order SUSY partners of the oscillator.

All functions work on jets at a single point x. A k-th order partner of
H0 = -1/2 d^2/dx^2 + x^2/2 built from the seed chain u_1..u_k has

    V_k = x^2/2 - (ln W(u_1, ..., u_k))''

and maps oscillator states through B_k+ psi = (-1/sqrt(2))^k W(u, psi) / W(u).
"""

from dataclasses import dataclass
import cmath
import math

import numpy as np

import config
from errors import ContractError, DegenerateFactorError, DomainError
from jets import Jet, ground_state_jet, jet_log_derivative, series_div, series_mul
from seeds import (
    SeedSpec,
    extend_with_energy,
    ladder_apply,
    oscillator_state_jet,
    seed_chain_jets,
)


@dataclass(frozen=True)
class SusySystem:
    spec: SeedSpec

    @property
    def k(self) -> int:
        return self.spec.k

    def extremal_energies(self) -> tuple[float, float, float]:
        """(E1, E2, E3) = (e1 - (k-1), 1/2, e1 + 1)."""
        e1 = self.spec.epsilon1
        return e1 - (self.k - 1), 0.5, e1 + 1.0

    def energy(self, family: int) -> float:
        if family not in (1, 2, 3):
            raise DomainError(f"family must be 1, 2 or 3, got {family}")
        return self.extremal_energies()[family - 1]

    def chain(self, x: float, out_order: int) -> list[Jet]:
        """Seed chain deep enough for Wronskians of k+1 functions at out_order."""
        return seed_chain_jets(self.spec, x, self.k + out_order + 1)


def _jet_determinant(entries: np.ndarray, center: float) -> Jet:
    a = np.array(entries, dtype=complex)
    m, _, n_coeffs = a.shape
    det = np.zeros(n_coeffs, dtype=complex)
    det[0] = 1.0
    sign = 1.0
    shifts = 0

    for col in range(m):
        scale = np.max(np.abs(a[col:, col, :]))
        if scale == 0.0:
            return Jet(center, np.zeros(n_coeffs))
        # (x - x0) divides every remaining entry: pull it out of the column
        while np.max(np.abs(a[col:, col, 0])) <= config.SINGULARITY_RTOL * scale:
            a[col:, col, :-1] = a[col:, col, 1:].copy()
            a[col:, col, -1] = 0.0
            shifts += 1
            if shifts >= n_coeffs or not np.any(a[col:, col, :]):
                return Jet(center, np.zeros(n_coeffs))

        pivot = col + int(np.argmax(np.abs(a[col:, col, 0])))
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            sign = -sign
        p = a[col, col]
        det = series_mul(det, p)
        for r in range(col + 1, m):
            factor = series_div(a[r, col], p, center)
            for c in range(col + 1, m):
                a[r, c] = a[r, c] - series_mul(factor, a[col, c])
            a[r, col] = 0.0

    result = np.zeros(n_coeffs, dtype=complex)
    result[shifts:] = sign * det[: n_coeffs - shifts]
    return Jet(center, result)


def wronskian_jet(funcs: list[Jet], out_order: int, center: float | None = None) -> Jet:
    """Jet of W(f_1, ..., f_m); W() = 1, which then needs `center`."""
    m = len(funcs)
    if m == 0:
        if center is None:
            raise ContractError("the empty Wronskian needs an explicit center")
        return Jet.constant(1.0, center, out_order)
    need = m - 1 + out_order
    for f in funcs:
        if f.order < need:
            raise ContractError(
                f"Wronskian of {m} functions at order {out_order} needs jets of order {need}, got {f.order}"
            )
    center = funcs[0].center
    entries = np.zeros((m, m, out_order + 1), dtype=complex)
    for j, f in enumerate(funcs):
        d = f
        for i in range(m):
            entries[i, j] = d.coeffs[: out_order + 1]
            if i < m - 1:
                d = d.derivative()
    return _jet_determinant(entries, center)


def raised_seed_jet(spec: SeedSpec, u1: Jet) -> Jet:
    """a+ u_1, a solution at energy e1 + 1."""
    return extend_with_energy(ladder_apply("+", u1), spec.epsilon1 + 1.0, u1.order)


def _family_partner(spec: SeedSpec, chain: list[Jet], family: int) -> Jet:
    if family == 2:
        return ground_state_jet(chain[0].center, chain[0].order)
    if family == 3:
        return raised_seed_jet(spec, chain[0])
    raise DomainError(f"family {family} has no extra Wronskian column")


def pole_wronskians(spec: SeedSpec, x: float, out_order: int = 1) -> list[Jet]:
    """The Wronskians whose real zeros are poles of the family's g."""
    chain = seed_chain_jets(spec, x, spec.k + out_order + 1)
    if spec.family == 1:
        found = [wronskian_jet(chain, out_order)]
        if spec.k >= 2:
            found.insert(0, wronskian_jet(chain[:-1], out_order))
        return found
    extra = _family_partner(spec, chain, spec.family)
    return [wronskian_jet(chain, out_order), wronskian_jet(chain + [extra], out_order)]


def extremal_state_jet(system: SusySystem, family: int, x: float, order: int = 2) -> Jet:
    """Jet of the extremal state for `family`, up to a constant factor."""
    chain = system.chain(x, order)
    denominator = wronskian_jet(chain, order)
    if family == 1:
        numerator = wronskian_jet(chain[:-1], order, center=x)
    else:
        numerator = wronskian_jet(chain + [_family_partner(system.spec, chain, family)], order)
    return numerator / denominator


def extremal_state_logderiv(system: SusySystem, family: int, x: float) -> tuple[complex, complex]:
    """((ln psi)'(x), (ln psi)''(x)) for the family's extremal state."""
    log_d = jet_log_derivative(extremal_state_jet(system, family, x, order=2))
    return log_d.coeffs[0], log_d.coeffs[1]


def bkp_action(system: SusySystem, psi: Jet, x: float) -> Jet:
    """B_k+ psi through its Crum form."""
    k = system.k
    if psi.order < k + 2:
        raise ContractError(f"B_k+ with k={k} needs a jet of order >= {k + 2}, got {psi.order}")
    if psi.center != x:
        raise ContractError(f"jet centered at {psi.center}, expected {x}")
    out_order = psi.order - k
    chain = seed_chain_jets(system.spec, x, psi.order)
    ratio = wronskian_jet(chain + [psi], out_order) / wronskian_jet(chain, out_order)
    return ratio * (-1.0 / math.sqrt(2.0)) ** k


def darboux_step(seed: Jet, psi: Jet) -> Jet:
    """First-order intertwining A+ psi = (-psi' + (ln seed)' psi)/sqrt(2)."""
    alpha = jet_log_derivative(seed)
    lowered = psi.truncate(psi.order - 1)
    return (alpha * lowered - psi.derivative()) * (1.0 / math.sqrt(2.0))


def partner_potential_jet(system: SusySystem, x: float, order: int = 0) -> Jet:
    chain = system.chain(x, order + 2)
    w = wronskian_jet(chain[: system.k], order + 2)
    second = jet_log_derivative(w).derivative()
    xs = Jet.variable(x, order)
    return xs * xs * 0.5 - second


def partner_potential(system: SusySystem, x: float) -> complex:
    """V_k(x) = x^2/2 - (ln W(u_1..u_k))''(x)."""
    return partner_potential_jet(system, x).value


def _check_nondegenerate(system: SusySystem, energy: float):
    for j, eps in enumerate(system.spec.energies, start=1):
        if abs(energy - eps) <= config.HIERARCHY_TOL:
            raise DegenerateFactorError(
                f"E={energy} coincides with the factorization energy e_{j}={eps}"
            )


def transformed_eigenfunction_jet(system: SusySystem, n: int, x: float, order: int = 2) -> Jet:
    if n < 0:
        raise DomainError(f"oscillator level must be >= 0, got {n}")
    energy = n + 0.5
    _check_nondegenerate(system, energy)
    psi_n = oscillator_state_jet(n, x, order + system.k)
    norm = cmath.sqrt(np.prod([energy - eps for eps in system.spec.energies]))
    return bkp_action(system, psi_n, x) / complex(norm)


def transformed_eigenfunction(system: SusySystem, n: int, x: float) -> complex:
    """psi_n^(k) = B_k+ psi_n / sqrt(prod (E_n - e_j)), without the global normalization."""
    return transformed_eigenfunction_jet(system, n, x).value


def missing_state_eigenfunction_jet(system: SusySystem, j: int, x: float, order: int = 2) -> Jet:
    k = system.k
    if not 1 <= j <= k:
        raise DomainError(f"missing state index must be in 1..{k}, got {j}")
    chain = system.chain(x, order)
    rest = chain[: j - 1] + chain[j:]
    return wronskian_jet(rest, order, center=x) / wronskian_jet(chain, order)


def missing_state_eigenfunction(system: SusySystem, j: int, x: float) -> complex:
    return missing_state_eigenfunction_jet(system, j, x).value


def eigen_residual(psi: Jet, potential: Jet, energy: float) -> complex:
    """-psi''/2 + V psi - E psi at the jet center."""
    if psi.order < 2:
        raise ContractError("eigen residual needs psi to order 2")
    second = 2.0 * psi.coeffs[2]
    return -0.5 * second + (potential.coeffs[0] - energy) * psi.coeffs[0]
