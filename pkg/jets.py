"""
Truncated Taylor jets at a point.

A Jet of order N stores c[n] = f^(n)(x0) / n! for n = 0..N as complex numbers.
Arithmetic between jets is exact truncated-series arithmetic; dividing by a
jet whose constant term vanishes raises SingularityError, which is how the
rest of the package detects on-axis poles.
"""

from dataclasses import dataclass
import math
from numbers import Number

import numpy as np

import config
from errors import ContractError, SingularityError


def series_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Cauchy product truncated to len(a)."""
    return np.convolve(a, b)[: len(a)]


def is_vanishing(c: np.ndarray) -> bool:
    scale = np.max(np.abs(c))
    return abs(c[0]) <= config.SINGULARITY_RTOL * scale


def series_div(a: np.ndarray, b: np.ndarray, x0: float | None = None) -> np.ndarray:
    """Recursive deconvolution q = a / b, truncated to len(a)."""
    if is_vanishing(b):
        raise SingularityError(f"division by a vanishing jet at x={x0}", x=x0)
    n = len(a)
    q = np.zeros(n, dtype=complex)
    b0 = b[0]
    for i in range(n):
        acc = a[i]
        upper = min(i, len(b) - 1)
        if upper > 0:
            acc = acc - np.dot(b[1 : upper + 1], q[i - 1 :: -1][:upper])
        q[i] = acc / b0
    return q


@dataclass(frozen=True, eq=False)
class Jet:
    center: float
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or len(c) < 1:
            raise ContractError("a jet needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ContractError(f"non-finite jet coefficients at x={self.center}")
        c.setflags(write=False)
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def constant(cls, value: complex, center: float, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(center, c)

    @classmethod
    def variable(cls, center: float, order: int) -> "Jet":
        """The jet of f(x) = x."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = center
        if order >= 1:
            c[1] = 1.0
        return cls(center, c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def derivatives(self) -> np.ndarray:
        """f(x0), f'(x0), f''(x0), ..."""
        factorials = np.array([math.factorial(n) for n in range(self.order + 1)], dtype=float)
        return self.coeffs * factorials

    def derivative(self) -> "Jet":
        if self.order < 1:
            raise ContractError("cannot differentiate an order-0 jet")
        n = np.arange(1, self.order + 1)
        return Jet(self.center, self.coeffs[1:] * n)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ContractError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.center, self.coeffs[: order + 1])

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        if isinstance(other, Number):
            return Jet.constant(other, self.center, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_algebra(self, other, "add")

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_algebra(self, other, "sub")

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_algebra(other, self, "sub")

    def __mul__(self, other):
        if isinstance(other, Number):
            return jet_algebra(self, other, "scale")
        if isinstance(other, Jet):
            return jet_algebra(self, other, "mul")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return jet_algebra(self, 1.0 / other, "scale")
        if isinstance(other, Jet):
            return jet_algebra(self, other, "div")
        return NotImplemented

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return jet_algebra(other, self, "div")

    def __neg__(self):
        return Jet(self.center, -self.coeffs)

    def __repr__(self):
        return f"Jet(center={self.center}, coeffs={self.coeffs.tolist()})"


def _check_compatible(a: Jet, b: Jet):
    if a.center != b.center:
        raise ContractError(f"jets at different centers: {a.center} and {b.center}")
    if a.order != b.order:
        raise ContractError(f"jets of different orders: {a.order} and {b.order}")


def jet_algebra(a: Jet, b, op: str) -> Jet:
    """Truncated-series arithmetic; `b` is a scalar for op == "scale"."""
    if op == "scale":
        return Jet(a.center, a.coeffs * b)
    _check_compatible(a, b)
    if op == "add":
        return Jet(a.center, a.coeffs + b.coeffs)
    if op == "sub":
        return Jet(a.center, a.coeffs - b.coeffs)
    if op == "mul":
        return Jet(a.center, series_mul(a.coeffs, b.coeffs))
    if op == "div":
        return Jet(a.center, series_div(a.coeffs, b.coeffs, a.center))
    raise ContractError(f"unknown jet operation {op!r}")


def jet_log_derivative(f: Jet) -> Jet:
    """Jet of f'/f, one order lower than f."""
    if f.order < 1:
        raise ContractError("log-derivative needs a jet of order >= 1")
    return f.derivative() / f.truncate(f.order - 1)


def seed_derivative_recurrence(
    u0: complex, u1: complex, epsilon: float, x0: float, order: int
) -> Jet:
    """Jet of the solution of u'' = (x^2 - 2 epsilon) u with u(x0)=u0, u'(x0)=u1."""
    if order < 1:
        raise ContractError("seed jets need order >= 1")
    c = np.zeros(order + 1, dtype=complex)
    c[0] = u0
    c[1] = u1
    # Taylor coefficients of x^2 - 2 epsilon at x0
    p = (x0 * x0 - 2.0 * epsilon, 2.0 * x0, 1.0)
    for n in range(order - 1):
        s = 0j
        for m in range(min(2, n) + 1):
            s += p[m] * c[n - m]
        c[n + 2] = s / ((n + 2) * (n + 1))
    return Jet(x0, c)


def ground_state_jet(x0: float, order: int) -> Jet:
    """Jet of exp(-x^2/2)."""
    u0 = math.exp(-0.5 * x0 * x0)
    return seed_derivative_recurrence(u0, -x0 * u0, 0.5, x0, order)
