"""
Scalar special functions used by the seeds and by the closed-form catalog:
Gamma, Kummer's 1F1, erf/erfi and the modified Bessel function I_nu.

Everything here takes and returns plain Python floats. Series are summed with
Neumaier's compensated summation and stop once the next term is negligible
against the partial sum.
"""

import math

import config
from errors import AccuracyError, DomainError, RangeError

SQRT_PI = math.sqrt(math.pi)
TWO_OVER_SQRT_PI = 2.0 / SQRT_PI

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_SERIES_RTOL = 1e-17
ERFI_MAX_X = 8.0
ERF_SATURATION_X = 6.0


class CompensatedSum:
    """Running Neumaier sum."""

    def __init__(self, start: float = 0.0):
        self.total = start
        self.compensation = 0.0

    def add(self, term: float):
        t = self.total + term
        if abs(self.total) >= abs(term):
            self.compensation += (self.total - t) + term
        else:
            self.compensation += (term - t) + self.total
        self.total = t

    @property
    def value(self) -> float:
        return self.total + self.compensation


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def gamma(x: float) -> float:
    """Gamma function for real x, reflection formula below 1/2."""
    x = float(x)
    if is_nonpositive_integer(x):
        raise DomainError(f"gamma has a pole at x={x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def kummer_1f1(a: float, b: float, z: float, max_terms: int | None = None) -> float:
    """Kummer's confluent hypergeometric function M(a, b, z) for z >= 0."""
    if is_nonpositive_integer(b):
        raise DomainError(f"1F1 undefined for b={b} (pole)")
    if z < 0.0:
        raise DomainError(f"1F1 is only evaluated for z >= 0, got z={z}")
    if z == 0.0:
        return 1.0
    max_terms = config.KUMMER_MAX_TERMS if max_terms is None else max_terms

    acc = CompensatedSum(1.0)
    term = 1.0
    for n in range(max_terms):
        term *= (a + n) / (b + n) * z / (n + 1)
        acc.add(term)
        if term == 0.0:
            # a is a non-positive integer: the series terminates
            return acc.value
        if n + 1 >= z and abs(term) <= _SERIES_RTOL * abs(acc.value):
            return acc.value
    raise AccuracyError(
        f"1F1({a}, {b}, {z}) did not converge within {max_terms} terms"
    )


def erf(x: float) -> float:
    """Error function; saturates at +-1 beyond |x| = 6."""
    s = abs(float(x))
    if s == 0.0:
        return 0.0 * x
    if s > ERF_SATURATION_X:
        return math.copysign(1.0, x)
    # erf(s) = 2/sqrt(pi) exp(-s^2) sum 2^n s^(2n+1) / (2n+1)!!, all terms positive
    s2 = s * s
    term = s
    acc = CompensatedSum(term)
    n = 0
    while True:
        term *= 2.0 * s2 / (2 * n + 3)
        acc.add(term)
        n += 1
        if n >= s2 and term <= _SERIES_RTOL * acc.value:
            break
        if n > config.KUMMER_MAX_TERMS:
            raise AccuracyError(f"erf({x}) did not converge")
    return math.copysign(TWO_OVER_SQRT_PI * math.exp(-s2) * acc.value, x)


def erfi(x: float) -> float:
    """Imaginary error function -i erf(ix) for |x| <= 8."""
    s = abs(float(x))
    if s > ERFI_MAX_X:
        raise RangeError(f"erfi({x}) outside the supported range |x| <= {ERFI_MAX_X}")
    if s == 0.0:
        return 0.0 * x
    s2 = s * s
    power = s
    acc = CompensatedSum(power)
    n = 0
    while True:
        power *= s2 / (n + 1)
        term = power / (2 * n + 3)
        acc.add(term)
        n += 1
        if n >= s2 and term <= _SERIES_RTOL * acc.value:
            break
        if n > config.KUMMER_MAX_TERMS:
            raise AccuracyError(f"erfi({x}) did not converge")
    return math.copysign(TWO_OVER_SQRT_PI * acc.value, x)


def error_functions(x: float) -> tuple[float, float]:
    return erf(x), erfi(x)


def bessel_i(nu: float, z: float) -> float:
    """Modified Bessel function of the first kind by its ascending series."""
    nu = float(nu)
    z = float(z)
    if z < 0.0:
        raise DomainError(f"bessel_i needs z >= 0, got z={z}")
    if nu < 0.0 and nu == math.floor(nu):
        nu = -nu
    if z == 0.0:
        if nu == 0.0:
            return 1.0
        if nu > 0.0:
            return 0.0
        raise DomainError(f"I_{nu}(z) diverges at z=0")

    half = 0.5 * z
    quarter_sq = half * half
    term = half ** nu / gamma(nu + 1.0)
    acc = CompensatedSum(term)
    for m in range(config.KUMMER_MAX_TERMS):
        term *= quarter_sq / ((m + 1) * (m + 1 + nu))
        acc.add(term)
        if m + 1 >= half and abs(term) <= _SERIES_RTOL * abs(acc.value):
            return acc.value
    raise AccuracyError(f"I_{nu}({z}) did not converge")
