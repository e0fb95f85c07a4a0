"""
Residual oracles for the Painleve IV and Schrodinger equations, plus the
verification battery the `verify` command runs.
"""

from dataclasses import dataclass, field
import json
import logging
import os

import numpy as np

import config
from errors import ContractError, DomainError, SingularityError, SkipPoint
from jets import Jet
from painleve import PivParams, g_jet, g_solution, piv_params, potential_from_g
from seeds import SeedSpec, seed_chain_jets
from susy import SusySystem, partner_potential

BATTERY_FILE = os.path.join(os.path.dirname(__file__), "data", "verify_battery.json")

FALLBACK_BATTERY = [
    {"name": "rational_k1", "epsilon1": -2.5, "nu": 0.0, "k": 1, "family": 1},
]


@dataclass(frozen=True)
class ResidualReport:
    x: float
    lhs: complex
    rhs: complex
    residual: complex
    scale: float
    passed: bool
    riccati: complex | None = None

    @property
    def relative(self) -> float:
        return abs(self.residual) / max(self.scale, 1.0)


def piv_residual(g: Jet, params: PivParams, x: float, tol: float | None = None) -> ResidualReport:
    """g'' against g'^2/(2g) + 3/2 g^3 + 4x g^2 + 2(x^2 - a) g + b/g."""
    tol = config.PIV_RESIDUAL_TOL if tol is None else tol
    if g.order < 2:
        raise ContractError(f"the P_IV residual needs g to order 2, got {g.order}")
    g0, g1 = g.coeffs[0], g.coeffs[1]
    g2 = 2.0 * g.coeffs[2]
    if abs(g0) <= config.SINGULARITY_RTOL * max(abs(g1), abs(g2), 1.0):
        raise SkipPoint(f"g vanishes at x={x}", x=x)

    terms = (
        g1 * g1 / (2.0 * g0),
        1.5 * g0**3,
        4.0 * x * g0 * g0,
        2.0 * (x * x - params.a) * g0,
        params.b / g0,
    )
    rhs = complex(sum(terms))
    scale = float(max(abs(t) for t in terms))
    residual = complex(g2 - rhs)
    passed = abs(residual) <= tol * max(scale, 1.0)
    return ResidualReport(float(x), complex(g2), rhs, residual, scale, passed)


def schrodinger_residual(u: Jet, epsilon: float, x: float, tol: float | None = None) -> ResidualReport:
    """-u''/2 + x^2 u/2 - epsilon u, with the Riccati form attached where u != 0."""
    tol = config.SEED_RESIDUAL_TOL if tol is None else tol
    if u.order < 2:
        raise ContractError(f"the Schrodinger residual needs u to order 2, got {u.order}")
    u0 = u.coeffs[0]
    kinetic = -u.coeffs[2]
    confining = 0.5 * x * x * u0
    lhs = complex(kinetic + confining)
    rhs = complex(epsilon * u0)
    residual = lhs - rhs
    scale = float(max(abs(kinetic), abs(confining), abs(rhs)))
    riccati = None if u0 == 0 else complex(-2.0 * residual / u0)
    passed = abs(residual) <= tol * max(scale, 1.0)
    return ResidualReport(float(x), lhs, rhs, residual, scale, passed, riccati)


def riccati_residual(u: Jet, epsilon: float, x: float) -> complex:
    """alpha' + alpha^2 - (x^2 - 2 epsilon) with alpha = u'/u."""
    if u.order < 2:
        raise ContractError(f"the Riccati residual needs u to order 2, got {u.order}")
    u0 = u.coeffs[0]
    if u0 == 0:
        raise SkipPoint(f"u vanishes at x={x}", x=x)
    alpha = u.coeffs[1] / u0
    alpha_prime = 2.0 * u.coeffs[2] / u0 - alpha * alpha
    return complex(alpha_prime + alpha * alpha - (x * x - 2.0 * epsilon))


def fd_cross_check(f, x: float, h: float) -> tuple[complex, complex]:
    """Central five-point first and second derivatives of f at x."""
    if h == 0:
        raise ContractError("finite-difference step must be nonzero")
    try:
        fm2, fm1, f0, fp1, fp2 = (f(x + m * h) for m in (-2, -1, 0, 1, 2))
    except SingularityError as e:
        raise SkipPoint(f"stencil around x={x} hits a singularity at {e.x}", x=x) from e
    d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return complex(d1), complex(d2)


def fd_allowance(exact: tuple[complex, complex], g_value: complex, h: float) -> tuple[float, float]:
    """Accepted |jet - fd| for (g', g''): FD_RTOL plus stencil roundoff.

    The five-point weights sum in magnitude to 18/12 and 64/12, so a relative
    noise n in g shows up as 1.5 n |g| / h and 16/3 n |g| / h^2.
    """
    noise = config.FD_NOISE_RTOL * abs(g_value)
    tol1 = config.FD_RTOL * max(abs(exact[0]), 1.0) + 1.5 * noise / abs(h)
    tol2 = config.FD_RTOL * max(abs(exact[1]), 1.0) + 16.0 / 3.0 * noise / (h * h)
    return tol1, tol2


@dataclass(frozen=True)
class BatteryEntry:
    spec: SeedSpec
    name: str = ""
    b_offset: float = 0.0
    x_lo: float = -4.0
    x_hi: float = 4.0
    samples: int = 41
    source: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, raw: dict) -> "BatteryEntry":
        k = int(raw.get("k", 1))
        family = int(raw.get("family", 1))
        epsilon1 = float(raw["epsilon1"])
        if "nu" in raw:
            if "lambda_re" in raw or "lambda_im" in raw:
                raise DomainError("battery entry gives both nu and Lambda")
            spec = SeedSpec.from_nu(epsilon1, float(raw["nu"]), k, family)
        else:
            spec = SeedSpec(epsilon1, complex(raw.get("lambda_re", 0.0), raw.get("lambda_im", 0.0)), k, family)
        name = raw.get("name") or f"e{epsilon1}_k{k}_f{family}"
        return cls(
            spec,
            name,
            float(raw.get("b_offset", 0.0)),
            float(raw.get("x_lo", -4.0)),
            float(raw.get("x_hi", 4.0)),
            int(raw.get("samples", 41)),
            dict(raw),
        )

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.samples)

    def describe(self) -> dict:
        return {
            "epsilon1": self.spec.epsilon1,
            "lambda": {"re": self.spec.Lambda.real, "im": self.spec.Lambda.imag},
            "k": self.spec.k,
            "family": self.spec.family,
            "b_offset": self.b_offset,
        }


def load_battery(path: str) -> list[BatteryEntry]:
    with open(path, "r", encoding="utf-8") as f:
        raw = json.load(f)
    if not isinstance(raw, list):
        raise DomainError(f"battery file {path} must hold a JSON list")
    return [BatteryEntry.from_dict(item) for item in raw]


def default_battery() -> list[BatteryEntry]:
    try:
        return load_battery(BATTERY_FILE)
    except Exception as e:
        logging.error(f"Error loading verification battery: {e}")
        return [BatteryEntry.from_dict(item) for item in FALLBACK_BATTERY]


def _suite(name: str, entry: BatteryEntry, errors: list[float], passed: bool) -> dict:
    return {
        "name": name,
        "entry": entry.name,
        "spec": entry.describe(),
        "passed": bool(passed),
        "max_residual": max(errors) if errors else 0.0,
        "points": len(errors),
    }


def _piv_suite(entry: BatteryEntry, tol: float) -> dict:
    spec = entry.spec
    base = piv_params(spec.family, spec.epsilon1, spec.k)
    params = PivParams(base.a, base.b + entry.b_offset)
    errors, passed = [], True
    for x in entry.grid():
        try:
            report = piv_residual(g_jet(spec, x), params, x, tol)
        except (SingularityError, SkipPoint):
            continue
        errors.append(report.relative)
        passed = passed and report.passed
    return _suite("piv_residual", entry, errors, passed)


def _schrodinger_suite(entry: BatteryEntry) -> dict:
    spec = entry.spec
    errors, passed = [], True
    for x in entry.grid():
        for j, u in enumerate(seed_chain_jets(spec, x, spec.k + 2), start=1):
            report = schrodinger_residual(u, spec.epsilon(j), x)
            errors.append(report.relative)
            passed = passed and report.passed
    return _suite("schrodinger", entry, errors, passed)


def _potential_suite(entry: BatteryEntry) -> dict:
    spec = entry.spec
    system = SusySystem(spec)
    energy = system.energy(spec.family)
    errors = []
    for x in entry.grid():
        try:
            v_wronskian = partner_potential(system, x)
            g = g_jet(spec, x, order=1)
        except SingularityError:
            continue
        v_riccati = potential_from_g(g.coeffs[0], g.coeffs[1], x, energy)
        errors.append(abs(v_wronskian - v_riccati) / max(abs(v_wronskian), 1.0))
    return _suite("potential", entry, errors, all(e <= config.POTENTIAL_TOL for e in errors))


def _fd_suite(entry: BatteryEntry, checks: int = 5) -> dict:
    spec = entry.spec
    xs = entry.grid()
    errors, passed = [], True
    for x in xs[1 :: max(1, len(xs) // checks)][:checks]:
        try:
            jet = g_jet(spec, x)
            d1, d2 = fd_cross_check(lambda t: g_solution(spec, t), x, config.FD_STEP)
        except (SingularityError, SkipPoint):
            continue
        exact = jet.derivatives()
        tol1, tol2 = fd_allowance((exact[1], exact[2]), exact[0], config.FD_STEP)
        diff1, diff2 = abs(exact[1] - d1), abs(exact[2] - d2)
        if diff1 > tol1 or diff2 > tol2:
            logging.debug(f"jet_vs_fd mismatch at x={x}: {diff1:.3e} > {tol1:.3e} or {diff2:.3e} > {tol2:.3e}")
            passed = False
        errors.append(max(diff1 / max(abs(exact[1]), 1.0), diff2 / max(abs(exact[2]), 1.0)))
    return _suite("jet_vs_fd", entry, errors, passed)


def run_battery(entries: list[BatteryEntry], tol: float | None = None) -> dict:
    """Run every suite over every entry; passed only if all suites pass."""
    tol = config.PIV_RESIDUAL_TOL if tol is None else tol
    suites = []
    for entry in entries:
        logging.info(f"Verifying {entry.name}: {entry.describe()}")
        suites.append(_piv_suite(entry, tol))
        suites.append(_schrodinger_suite(entry))
        suites.append(_potential_suite(entry))
        suites.append(_fd_suite(entry))
    failed = [s for s in suites if not s["passed"]]
    for s in failed:
        logging.warning(f"Suite {s['name']} failed for {s['spec']}: max residual {s['max_residual']:.3e}")
    return {"passed": not failed, "suites": suites}
