"""
Schrodinger seed solutions of the harmonic oscillator and their chains.

The free seed at factorization energy epsilon is

    u(x) = exp(-x^2/2) [ M((1-2e)/4, 1/2, x^2) + x L M((3-2e)/4, 3/2, x^2) ]

with a complex mixing constant L. The chain u_j = (a-)^(j-1) u_1 carries the
energies e_j = e_1 - (j-1). Oscillator units throughout (hbar = omega = 1).
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

import config
from errors import AccuracyError, ContractError, DomainError, RangeError
from jets import Jet, ground_state_jet, seed_derivative_recurrence
from numerics import gamma, is_nonpositive_integer, kummer_1f1

MAX_ORDER_K = 10
FAMILIES = (1, 2, 3)


def lambda_from_nu(epsilon: float, nu: float) -> complex:
    """Real-case mixing constant: L = 2 nu Gamma((3-2e)/4) / Gamma((1-2e)/4)."""
    if nu == 0:
        return 0j
    a_even = (1.0 - 2.0 * epsilon) / 4.0
    a_odd = (3.0 - 2.0 * epsilon) / 4.0
    if is_nonpositive_integer(a_even):
        raise DomainError(
            f"the even series degenerates at epsilon={epsilon}: Gamma({a_even}) has a pole"
        )
    if is_nonpositive_integer(a_odd):
        raise DomainError(
            f"Lambda is unbounded at epsilon={epsilon} for nu={nu}: Gamma({a_odd}) has a pole"
        )
    return complex(2.0 * nu * gamma(a_odd) / gamma(a_even), 0.0)


def nu_from_lambda(epsilon: float, Lambda: complex) -> float | None:
    """Inverse of lambda_from_nu for real Lambda; None where it is undefined."""
    if complex(Lambda).imag != 0.0:
        return None
    if Lambda == 0:
        return 0.0
    a_even = (1.0 - 2.0 * epsilon) / 4.0
    a_odd = (3.0 - 2.0 * epsilon) / 4.0
    if is_nonpositive_integer(a_even) or is_nonpositive_integer(a_odd):
        return None
    return complex(Lambda).real * gamma(a_even) / (2.0 * gamma(a_odd))


@dataclass(frozen=True)
class SeedSpec:
    epsilon1: float
    Lambda: complex = 0j
    k: int = 1
    family: int = 1

    def __post_init__(self):
        object.__setattr__(self, "epsilon1", float(self.epsilon1))
        object.__setattr__(self, "Lambda", complex(self.Lambda))
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise DomainError(f"SUSY order k must be a positive integer, got {self.k}")
        if self.k > MAX_ORDER_K:
            raise DomainError(f"SUSY order k={self.k} exceeds the cap {MAX_ORDER_K}")
        if self.family not in FAMILIES:
            raise DomainError(f"family must be one of {FAMILIES}, got {self.family}")

    @classmethod
    def from_nu(cls, epsilon1: float, nu: float, k: int = 1, family: int = 1) -> "SeedSpec":
        return cls(epsilon1, lambda_from_nu(epsilon1, nu), k, family)

    @property
    def is_real(self) -> bool:
        return self.Lambda.imag == 0.0

    def epsilon(self, j: int) -> float:
        """Factorization energy of the j-th seed of the chain."""
        return self.epsilon1 - (j - 1)

    @property
    def energies(self) -> tuple[float, ...]:
        return tuple(self.epsilon(j) for j in range(1, self.k + 1))


def seed_eval(epsilon: float, Lambda: complex, x: float) -> tuple[complex, complex]:
    """Seed value and slope; the slope uses d/dz M(a,b,z) = (a/b) M(a+1,b+1,z)."""
    z = x * x
    a_even = (1.0 - 2.0 * epsilon) / 4.0
    a_odd = (3.0 - 2.0 * epsilon) / 4.0
    m_even = kummer_1f1(a_even, 0.5, z)
    m_odd = kummer_1f1(a_odd, 1.5, z)
    dm_even = 4.0 * a_even * x * kummer_1f1(a_even + 1.0, 1.5, z) if a_even != 0 else 0.0
    dm_odd = 4.0 * a_odd * x / 3.0 * kummer_1f1(a_odd + 1.0, 2.5, z) if a_odd != 0 else 0.0

    y = m_even + x * Lambda * m_odd
    dy = dm_even + Lambda * m_odd + x * Lambda * dm_odd
    envelope = math.exp(-0.5 * z)
    return complex(envelope * y), complex(envelope * (dy - x * y))


def seed_jet(epsilon: float, Lambda: complex, x: float, order: int) -> Jet:
    u, du = seed_eval(epsilon, Lambda, x)
    return seed_derivative_recurrence(u, du, epsilon, x, order)


def ladder_apply(sign: str, f: Jet) -> Jet:
    """a- f = (f' + x f)/sqrt(2), a+ f = (-f' + x f)/sqrt(2); one order lost."""
    if f.order < 1:
        raise ContractError("ladder operators need a jet of order >= 1")
    x = Jet.variable(f.center, f.order - 1)
    base = x * f.truncate(f.order - 1)
    if sign in ("-", -1):
        return (f.derivative() + base) * (1.0 / math.sqrt(2.0))
    if sign in ("+", 1):
        return (base - f.derivative()) * (1.0 / math.sqrt(2.0))
    raise ContractError(f"unknown ladder sign {sign!r}")


def extend_with_energy(f: Jet, epsilon: float, order: int) -> Jet:
    """Re-expand a solution at energy epsilon from its value and slope."""
    return seed_derivative_recurrence(f.coeffs[0], f.coeffs[1], epsilon, f.center, order)


def seed_chain_jets(spec: SeedSpec, x: float, order: int) -> list[Jet]:
    """Jets of u_1..u_k at x, each satisfying its own Schrodinger recurrence."""
    if order < spec.k + 1:
        raise ContractError(f"order {order} too low for a chain of length {spec.k}")
    chain = [seed_jet(spec.epsilon1, spec.Lambda, x, order)]
    for j in range(2, spec.k + 1):
        lowered = ladder_apply("-", chain[-1])
        chain.append(extend_with_energy(lowered, spec.epsilon(j), order))
    return chain


def oscillator_state_jet(n: int, x: float, order: int) -> Jet:
    """Unnormalized oscillator eigenstate (a+)^n exp(-x^2/2)."""
    psi = ground_state_jet(x, order)
    for level in range(1, n + 1):
        raised = ladder_apply("+", psi)
        psi = extend_with_energy(raised, level + 0.5, order)
    return psi


@dataclass(frozen=True)
class Regular:
    analytic_rule: bool | None = None

    is_regular = True


@dataclass(frozen=True)
class SingularAt:
    zeros: tuple[float, ...]
    analytic_rule: bool | None = None

    is_regular = False


def real_case_rule(spec: SeedSpec) -> bool | None:
    """epsilon1 < 1/2 and |nu1| < 1 for real first-family seeds; None elsewhere."""
    if not spec.is_real or spec.family != 1:
        return None
    nu = nu_from_lambda(spec.epsilon1, spec.Lambda)
    if nu is None:
        return False
    return spec.epsilon1 < 0.5 and abs(nu) < 1.0


def _bisect(f, lo: float, hi: float, f_lo: float, tol: float = 1e-10) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _wronskian_values(spec: SeedSpec, x: float) -> list[tuple[complex, complex]]:
    # deferred: susy builds on this module
    from susy import pole_wronskians

    return [(w.coeffs[0], w.coeffs[1]) for w in pole_wronskians(spec, x)]


def _scan_zeros(spec: SeedSpec, xs: np.ndarray, which: int, values: np.ndarray, slopes: np.ndarray) -> list[float]:
    zeros = []

    def w_at(x: float) -> tuple[complex, complex]:
        return _wronskian_values(spec, x)[which]

    mags = np.abs(values)
    is_real = np.all(np.abs(values.imag) <= 1e-13 * mags)
    if is_real:
        re = values.real
        for i in range(len(xs) - 1):
            if re[i] == 0.0:
                zeros.append(float(xs[i]))
            elif (re[i] < 0.0) != (re[i + 1] < 0.0) and re[i + 1] != 0.0:
                zeros.append(_bisect(lambda t: w_at(t)[0].real, xs[i], xs[i + 1], re[i]))
        if re[-1] == 0.0:
            zeros.append(float(xs[-1]))
        return zeros

    # complex: minima of |W| where Re(conj(W) W') turns from - to +
    flux = (np.conj(values) * slopes).real
    for i in range(len(xs) - 1):
        if flux[i] < 0.0 <= flux[i + 1]:
            def d_mod2(t: float) -> float:
                w, dw = w_at(t)
                return (w.conjugate() * dw).real

            x_min = _bisect(d_mod2, xs[i], xs[i + 1], flux[i])
            w, dw = w_at(x_min)
            approach = abs((w * dw.conjugate()).imag) / abs(dw) if dw != 0 else abs(w)
            window = mags[max(0, i - 5) : i + 7]
            local_scale = float(np.median(window))
            if approach <= 1e-12 * local_scale:
                zeros.append(x_min)
    return zeros


def _scan_window(spec: SeedSpec, lo: float, hi: float, grid_n: int) -> list[float]:
    xs = np.linspace(lo, hi, grid_n)
    samples = [_wronskian_values(spec, float(x)) for x in xs]
    zeros = []
    for which in range(len(samples[0])):
        values = np.array([s[which][0] for s in samples], dtype=complex)
        slopes = np.array([s[which][1] for s in samples], dtype=complex)
        zeros.extend(_scan_zeros(spec, xs, which, values, slopes))

    merged = []
    for z in sorted(zeros):
        if not merged or z - merged[-1] > 1e-8:
            merged.append(z)
    return merged


def _widened_scan(spec: SeedSpec, lo: float, hi: float, grid_n: int) -> list[float]:
    """Rescan doubling windows out to SCAN_X_MAX; stops where the series give out."""
    reach = max(abs(lo), abs(hi), 1.0)
    while reach < config.SCAN_X_MAX:
        reach = min(2.0 * reach, config.SCAN_X_MAX)
        try:
            zeros = _scan_window(spec, min(lo, -reach), max(hi, reach), grid_n)
        except (AccuracyError, RangeError, OverflowError) as e:
            logging.warning(f"Widened scan of {spec} stopped at |x| = {reach}: {e}")
            return []
        if zeros:
            return zeros
    return []


def regularity_check(
    spec: SeedSpec,
    interval: tuple[float, float] | None = None,
    grid_n: int | None = None,
) -> Regular | SingularAt:
    """Classify a spec as Regular or SingularAt(real zeros of the pole Wronskians).

    A real first-family spec that fails the analytic rule but shows no zero in
    `interval` is rescanned on wider windows, so the zeros reported may lie
    outside it.
    """
    lo, hi = interval if interval is not None else (config.SCAN_X_LO, config.SCAN_X_HI)
    grid_n = config.SCAN_GRID_N if grid_n is None else grid_n
    if grid_n < 100:
        raise ContractError(f"regularity scan needs grid_n >= 100, got {grid_n}")
    if not lo < hi:
        raise ContractError(f"empty scan interval [{lo}, {hi}]")

    rule = real_case_rule(spec)
    merged = _scan_window(spec, lo, hi, grid_n)
    if not merged and rule is False and spec.family == 1:
        merged = _widened_scan(spec, lo, hi, grid_n)
        if merged:
            logging.info(f"Zeros of {spec} outside [{lo}, {hi}] found by a widened scan")
        else:
            logging.warning(
                f"No zeros of {spec} found out to |x| = {config.SCAN_X_MAX} although the real-case rule fails"
            )

    if merged:
        if rule:
            logging.warning(
                f"Real-case rule predicts a regular seed for {spec}, scan found zeros at {merged}"
            )
        logging.info(f"Spec {spec} is singular at x={merged}")
        return SingularAt(tuple(merged), rule)
    logging.info(f"Spec {spec} is regular on [{lo}, {hi}]")
    return Regular(rule)
