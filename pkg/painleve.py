"""
Painleve IV solutions generated by k-th order SUSY partners of the oscillator.

    g'' = g'^2/(2g) + 3/2 g^3 + 4x g^2 + 2(x^2 - a) g + b/g

For family i the solution is g = -x - (ln psi_Ei)' with psi_Ei the extremal
state at E_i, and (a, b) follow from the extremal energies taken in cyclic
order starting at E_i.
"""

from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
import logging
import math

import numpy as np

import config
from errors import DomainError, SingularityError, SkipPoint
from jets import Jet, jet_log_derivative
from numerics import SQRT_PI, bessel_i, erf, erfi, gamma, kummer_1f1
from seeds import SeedSpec
from susy import SusySystem, extremal_state_jet


@dataclass(frozen=True)
class PivParams:
    a: float
    b: float

    @classmethod
    def from_energies(cls, e1: float, e2: float, e3: float) -> "PivParams":
        return cls(e2 + e3 - 2.0 * e1 - 1.0, -2.0 * (e2 - e3) ** 2)


def extremal_energies(epsilon1: float, k: int) -> tuple[float, float, float]:
    return epsilon1 - (k - 1), 0.5, epsilon1 + 1.0


def piv_params(family: int, epsilon1: float, k: int) -> PivParams:
    """(a, b) from the extremal energies rotated to start at the family's one."""
    if family not in (1, 2, 3):
        raise DomainError(f"family must be 1, 2 or 3, got {family}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    energies = extremal_energies(epsilon1, k)
    i = family - 1
    return PivParams.from_energies(energies[i], energies[(i + 1) % 3], energies[(i + 2) % 3])


def printed_piv_params(family: int, epsilon1: float, k: int) -> PivParams:
    if family == 1:
        return PivParams(-epsilon1 + 2 * k - 1.5, -2.0 * (epsilon1 + 0.5) ** 2)
    if family == 2:
        return PivParams(2.0 * epsilon1 - k, -2.0 * k * k)
    if family == 3:
        return PivParams(-epsilon1 - k - 1.5, -2.0 * (epsilon1 - k + 0.5) ** 2)
    raise DomainError(f"family must be 1, 2 or 3, got {family}")


class HierarchyTag(str, Enum):
    CONFLUENT_HYPERGEOMETRIC = "ConfluentHypergeometric"
    ERF = "Erf"
    ERFI = "Erfi"
    RATIONAL = "Rational"
    BESSEL_I = "BesselI"


def _nearest_integer(value: float, tol: float) -> int | None:
    n = round(value)
    return int(n) if abs(value - n) <= tol else None


def classify_hierarchy(epsilon1: float, Lambda: complex, tol: float | None = None) -> HierarchyTag:
    """Which special functions the solution is written in, from epsilon1 and Lambda."""
    tol = config.HIERARCHY_TOL if tol is None else tol
    twice = _nearest_integer(2.0 * epsilon1, 2.0 * tol)
    if twice is not None and twice % 2 != 0:
        if twice < 0:
            if (-twice) % 4 == 1 and abs(Lambda) <= tol:
                return HierarchyTag.RATIONAL
            return HierarchyTag.ERF
        return HierarchyTag.ERFI
    whole = _nearest_integer(epsilon1, tol)
    if whole is not None and whole <= 0:
        return HierarchyTag.BESSEL_I
    return HierarchyTag.CONFLUENT_HYPERGEOMETRIC


def hierarchy_energies(tag: HierarchyTag, lo: float, hi: float) -> list[float]:
    """Marker energies of a hierarchy inside [lo, hi], ascending."""
    if tag == HierarchyTag.ERF:
        candidates = [-(2 * m + 1) / 2 for m in range(_count_below(lo, 2))]
    elif tag == HierarchyTag.RATIONAL:
        candidates = [-(4 * m + 1) / 2 for m in range(_count_below(lo, 4))]
    elif tag == HierarchyTag.ERFI:
        candidates = [(2 * m + 1) / 2 for m in range(max(0, math.ceil(hi)) + 1)]
    elif tag == HierarchyTag.BESSEL_I:
        candidates = [-float(m) for m in range(max(0, math.ceil(-lo)) + 1)]
    else:
        candidates = []
    return sorted(e for e in candidates if lo <= e <= hi)


def _count_below(lo: float, step: int) -> int:
    return max(0, math.ceil(-2.0 * lo / step) + 1)


def g_jet(spec: SeedSpec, x: float, order: int = 2) -> Jet:
    """Jet of g = -x - (ln psi)' at x."""
    system = SusySystem(spec)
    psi = extremal_state_jet(system, spec.family, x, order + 1)
    return -jet_log_derivative(psi) - Jet.variable(x, order)


def g_solution(spec: SeedSpec, x: float) -> complex:
    return g_jet(spec, x, order=1).value


def ladder_functions_fh(g: complex, g_prime: complex, x: float, a: float) -> tuple[complex, complex]:
    """f = x + g and h = -x^2 + g'/2 - g^2/2 - 2xg + a."""
    f = x + g
    h = -x * x + 0.5 * g_prime - 0.5 * g * g - 2.0 * x * g + a
    return f, h


def potential_from_g(g: complex, g_prime: complex, x: float, E1: float) -> complex:
    return 0.5 * x * x - 0.5 * g_prime + 0.5 * g * g + x * g + E1 - 0.5


@dataclass(frozen=True)
class SolutionSample:
    x: float
    g: complex | None
    residual: complex | None
    regular: bool


@dataclass(frozen=True)
class PivSolution:
    spec: SeedSpec
    params: PivParams
    tag: HierarchyTag
    samples: tuple[SolutionSample, ...]
    tol: float = field(default=1e-8)

    @property
    def flagged(self) -> list[float]:
        return [s.x for s in self.samples if not s.regular]

    @property
    def regular_samples(self) -> list[SolutionSample]:
        return [s for s in self.samples if s.regular]


def sample_point(spec: SeedSpec, params: PivParams, x: float, tol: float | None = None) -> SolutionSample:
    """One grid sample; poles become irregular samples, g = 0 leaves the residual unset."""
    # deferred: verify builds on this module
    from verify import piv_residual

    try:
        jet = g_jet(spec, x, order=2)
    except SingularityError:
        return SolutionSample(float(x), None, None, False)
    try:
        report = piv_residual(jet, params, x, tol)
    except SkipPoint:
        return SolutionSample(float(x), jet.value, None, True)
    return SolutionSample(float(x), jet.value, report.residual, True)


def solve_curve(
    spec: SeedSpec,
    xs,
    tol: float | None = None,
    workers: int | None = None,
    params: PivParams | None = None,
) -> PivSolution:
    """Sample g over xs; `params` overrides the (a, b) the residuals are taken against."""
    tol = config.PIV_RESIDUAL_TOL if tol is None else tol
    workers = config.WORKERS if workers is None else workers
    if params is None:
        params = piv_params(spec.family, spec.epsilon1, spec.k)
    tag = classify_hierarchy(spec.epsilon1, spec.Lambda)
    xs = [float(x) for x in xs]
    evaluate = partial(sample_point, spec, params, tol=tol)

    if workers > 1 and len(xs) > 1:
        chunk = max(1, len(xs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            samples = tuple(pool.map(evaluate, xs, chunksize=chunk))
    else:
        samples = tuple(evaluate(x) for x in xs)

    solution = PivSolution(spec, params, tag, samples, tol)
    if solution.flagged:
        logging.warning(f"{len(solution.flagged)} singular samples for {spec}: {solution.flagged}")
    logging.info(f"Solved {spec} on {len(xs)} points: a={params.a}, b={params.b}, {tag.value}")
    return solution


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------

def _g1_chf_real(x: float, nu: float, epsilon1: float) -> complex:
    e = epsilon1
    a1, a3 = (1.0 - 2.0 * e) / 4.0, (3.0 - 2.0 * e) / 4.0
    g1, g3 = gamma(a1), gamma(a3)
    z = x * x
    m3 = kummer_1f1(a3, 1.5, z)
    numerator = 2.0 * nu * g3 * (3.0 * m3 - (2.0 * e + 3.0) * z * kummer_1f1(a3, 2.5, z)) - 3.0 * x * (
        2.0 * e + 1.0
    ) * g1 * kummer_1f1(a1, 1.5, z)
    denominator = 3.0 * g1 * kummer_1f1(a1, 0.5, z) + 6.0 * nu * x * g3 * m3
    return _ratio(numerator, denominator, x)


def _g1_chf_complex(x: float, Lambda: complex, epsilon1: float) -> complex:
    e = epsilon1
    a1, a3 = (1.0 - 2.0 * e) / 4.0, (3.0 - 2.0 * e) / 4.0
    z = x * x
    m3 = kummer_1f1(a3, 1.5, z)
    numerator = Lambda * (3.0 * m3 - (2.0 * e + 3.0) * z * kummer_1f1(a3, 2.5, z)) - 3.0 * x * (
        2.0 * e + 1.0
    ) * kummer_1f1(a1, 1.5, z)
    denominator = 3.0 * (kummer_1f1(a1, 0.5, z) + Lambda * x * m3)
    return _ratio(numerator, denominator, x)


def _phi_nu(x: float, nu: float) -> float:
    return SQRT_PI * math.exp(x * x) * (1.0 + nu * erf(x))


def _erf2_real(x: float, nu: float, epsilon1: float) -> complex:
    phi = _phi_nu(x, nu)
    return _ratio(4.0 * (nu + x * phi), 2.0 * nu * x + (1.0 + 2.0 * x * x) * phi, x)


def _erf_g2_real(x: float, nu: float, epsilon1: float) -> complex:
    phi = _phi_nu(x, nu)
    numerator = 4.0 * nu * (nu + x * phi) ** 2
    denominator = phi * (phi * phi - 2.0 * nu * x * phi - 2.0 * nu * nu)
    return _ratio(numerator, denominator, x)


def _erf_complex(x: float, Lambda: complex, epsilon1: float) -> complex:
    phi = math.exp(x * x) * (4.0 + Lambda * SQRT_PI * erf(x))
    return _ratio(4.0 * Lambda + 4.0 * x * phi, 2.0 * Lambda * x + (1.0 + 2.0 * x * x) * phi, x)


def _erfi_complex(x: float, Lambda: complex, epsilon1: float) -> complex:
    phi = math.exp(-x * x) * (4.0 + Lambda * SQRT_PI * erfi(x))
    numerator = 4.0 * Lambda * (1.0 - x * x) + 2.0 * x * (2.0 * x * x - 3.0) * phi
    return _ratio(numerator, 2.0 * Lambda * x + (1.0 - 2.0 * x * x) * phi, x)


def _rg1(x: float, *_) -> complex:
    return _ratio(4.0 * x, 1.0 + 2.0 * x * x, x)


def _rg2(x: float, *_) -> complex:
    x2 = x * x
    return -_rg1(x) + _ratio(16.0 * x2 * x, 3.0 + 4.0 * x2 * x2, x)


def _rg3(x: float, *_) -> complex:
    x2 = x * x
    x4 = x2 * x2
    tail = _ratio(12.0 * (3.0 * x - 4.0 * x2 * x + 4.0 * x4 * x), 9.0 + 18.0 * x2 - 12.0 * x4 + 8.0 * x4 * x2, x)
    return -_ratio(16.0 * x2 * x, 3.0 + 4.0 * x4, x) + tail


def _bessel_parts(x: float) -> tuple[float, dict[float, float]]:
    if x == 0.0:
        raise SingularityError("the Bessel forms are singular at x=0", x=0.0)
    z = 0.5 * x * x
    orders = (-0.75, -0.25, 0.25, 0.75, 1.25)
    return math.copysign(1.0, x), {nu: bessel_i(nu, z) for nu in orders}


def _bessel_real(x: float, nu: float, epsilon1: float) -> complex:
    s, i = _bessel_parts(x)
    x2 = x * x
    numerator = s * nu * (1.0 - x2) * i[0.25] + x2 * (-i[-0.25] + i[0.75] + s * nu * i[1.25])
    return _ratio(numerator, x * (i[-0.25] + s * nu * i[0.25]), x)


def _bessel_complex(x: float, Lambda: complex, epsilon1: float) -> complex:
    s, i = _bessel_parts(x)
    even = gamma(0.75)
    odd = 2.0 * Lambda * gamma(1.25)
    numerator = x * (even * (i[0.75] - i[-0.25]) + s * odd * (i[-0.75] - i[0.25]))
    return _ratio(numerator, even * i[-0.25] + s * odd * i[0.25], x)


def _ratio(numerator, denominator, x: float) -> complex:
    if denominator == 0:
        raise SingularityError(f"closed form has a pole at x={x}", x=x)
    return complex(numerator / denominator)


@dataclass(frozen=True)
class CatalogCase:
    case_id: str
    family: int
    k: int
    parameter: str
    default_param: complex
    epsilon1: float | None
    evaluator: Callable[..., complex]
    default_epsilon1: float | None = None

    def resolve_epsilon(self, epsilon1: float | None = None) -> float:
        if self.epsilon1 is not None:
            if epsilon1 is not None and epsilon1 != self.epsilon1:
                raise DomainError(f"{self.case_id} is fixed at epsilon1={self.epsilon1}")
            return self.epsilon1
        return self.default_epsilon1 if epsilon1 is None else epsilon1

    def to_spec(self, param=None, epsilon1: float | None = None) -> SeedSpec:
        """The engine spec whose g the closed form reproduces."""
        param = self.default_param if param is None else param
        e = self.resolve_epsilon(epsilon1)
        if self.parameter == "nu":
            return SeedSpec.from_nu(e, float(np.real(param)), self.k, self.family)
        return SeedSpec(e, complex(param), self.k, self.family)


CATALOG = {
    case.case_id: case
    for case in (
        CatalogCase("g1_chf_real", 1, 1, "nu", 0.4, None, _g1_chf_real, -0.3),
        CatalogCase("erf2_real", 1, 1, "nu", 0.5, -2.5, _erf2_real),
        CatalogCase("erf_g2_real", 1, 2, "nu", 0.5, -0.5, _erf_g2_real),
        CatalogCase("rg1", 1, 1, "nu", 0.0, -2.5, _rg1),
        CatalogCase("rg2", 1, 2, "nu", 0.0, -2.5, _rg2),
        CatalogCase("rg3", 1, 3, "nu", 0.0, -2.5, _rg3),
        CatalogCase("bessel_real", 1, 1, "nu", 0.5, 0.0, _bessel_real),
        CatalogCase("g1_chf_complex", 1, 1, "Lambda", 1j, None, _g1_chf_complex, 1.7),
        CatalogCase("erf_complex", 1, 1, "Lambda", 1j, -2.5, _erf_complex),
        CatalogCase("erfi_complex", 1, 1, "Lambda", 1j, 2.5, _erfi_complex),
        CatalogCase("bessel_complex", 1, 1, "Lambda", 1j, 0.0, _bessel_complex),
    )
}


def closed_form_g(case_id: str, x: float, param=None, epsilon1: float | None = None) -> complex:
    """Evaluate a catalog closed form; `param` is nu or Lambda depending on the case."""
    try:
        case = CATALOG[case_id]
    except KeyError:
        raise DomainError(f"unknown closed form {case_id!r}; known: {sorted(CATALOG)}") from None
    param = case.default_param if param is None else param
    return case.evaluator(float(x), param, case.resolve_epsilon(epsilon1))


# ---------------------------------------------------------------------------
# Parameter space
# ---------------------------------------------------------------------------

def _record(family: int, k: int, epsilon1: float, tag: HierarchyTag, regime: str, point: str) -> dict:
    params = piv_params(family, epsilon1, k)
    return {
        "family": family,
        "k": k,
        "epsilon1": float(epsilon1),
        "a": float(params.a),
        "b": float(params.b),
        "hierarchy": tag.value,
        "regime": regime,
        "point": point,
    }


def parameter_space(k_max: int, eps_lo: float, eps_hi: float, samples: int) -> list[dict]:
    """Curves {(a(e1), b(e1))} per family and k, plus hierarchy marker points."""
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    grid = np.linspace(eps_lo, eps_hi, samples)
    real_markers = [HierarchyTag.ERF, HierarchyTag.RATIONAL, HierarchyTag.BESSEL_I]
    complex_markers = [HierarchyTag.ERF, HierarchyTag.ERFI, HierarchyTag.BESSEL_I]
    records = []
    for family in (1, 2, 3):
        for k in range(1, k_max + 1):
            if family == 1:
                for e in grid[grid < 0.5]:
                    records.append(_record(family, k, e, classify_hierarchy(e, 1.0), "real", "curve"))
                for tag in real_markers:
                    for e in hierarchy_energies(tag, eps_lo, min(eps_hi, 0.5)):
                        if e < 0.5:
                            records.append(_record(family, k, e, tag, "real", "marker"))
            for e in grid:
                records.append(_record(family, k, e, classify_hierarchy(e, 1j), "complex", "curve"))
            for tag in complex_markers:
                for e in hierarchy_energies(tag, eps_lo, eps_hi):
                    records.append(_record(family, k, e, tag, "complex", "marker"))
    logging.info(f"Parameter space: {len(records)} records for k <= {k_max}, e1 in [{eps_lo}, {eps_hi}]")
    return records
