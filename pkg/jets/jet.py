"""Truncated multivariate Taylor arithmetic.

A `JetValue` holds the normalized Taylor coefficients c_a = (d^a f)(x0) / a!
of a complex scalar at a base point, for every multi-index a with |a| <= order.
"""
import functools
import math
import numbers
from itertools import product

import numpy as np

from diracni.exceptions import JetOrderError, SingularPoint, UnsupportedPrimitive

MAX_ORDER = 3


class JetSpace:
    """Monomial bookkeeping shared by every jet with the same (nvars, order)."""

    def __init__(self, nvars, order):
        if not 0 <= order <= MAX_ORDER:
            raise JetOrderError(f"Jet order must be between 0 and {MAX_ORDER}, got {order}.")
        self.nvars = nvars
        self.order = order
        monomials = [
            alpha for alpha in product(range(order + 1), repeat=nvars) if sum(alpha) <= order
        ]
        monomials.sort(key=lambda alpha: (sum(alpha), tuple(-a for a in alpha)))
        self.monomials = tuple(monomials)
        self.index = {alpha: i for i, alpha in enumerate(monomials)}
        self.size = len(monomials)
        self.factorials = np.array(
            [math.prod(math.factorial(a) for a in alpha) for alpha in monomials], dtype=float
        )

        left, right, target = [], [], []
        for i, a in enumerate(monomials):
            for j, b in enumerate(monomials):
                total = tuple(x + y for x, y in zip(a, b))
                if sum(total) <= order:
                    left.append(i)
                    right.append(j)
                    target.append(self.index[total])
        self._left = np.array(left, dtype=int)
        self._right = np.array(right, dtype=int)
        self._target = np.array(target, dtype=int)

    @classmethod
    @functools.lru_cache(maxsize=None)
    def get(cls, nvars, order):
        return cls(nvars, order)

    def lower(self):
        if self.order == 0:
            raise JetOrderError("Cannot differentiate a jet of order 0.")
        return JetSpace.get(self.nvars, self.order - 1)

    def multiply(self, a, b):
        """Truncated product of coefficient arrays; the last axis runs over monomials."""
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=complex)
        np.add.at(out.T, self._target, (a[..., self._left] * b[..., self._right]).T)
        return out

    def derivative(self, coeffs, var):
        """Coefficients of d/dx_var in the space one order lower."""
        lower = self.lower()
        out = np.zeros(coeffs.shape[:-1] + (lower.size,), dtype=complex)
        for k, alpha in enumerate(lower.monomials):
            raised = list(alpha)
            raised[var] += 1
            out[..., k] = (alpha[var] + 1) * coeffs[..., self.index[tuple(raised)]]
        return out

    def truncate(self, coeffs, order):
        if order > self.order:
            raise JetOrderError(f"Cannot raise jet order from {self.order} to {order}.")
        if order == self.order:
            return coeffs
        return coeffs[..., : JetSpace.get(self.nvars, order).size]

    def __repr__(self):
        return f"JetSpace(nvars={self.nvars}, order={self.order})"


def _is_number(value):
    return isinstance(value, numbers.Number)


class JetValue:
    __slots__ = ("space", "coeffs")
    __array_ufunc__ = None

    def __init__(self, space, coeffs):
        self.space = space
        self.coeffs = np.asarray(coeffs, dtype=complex)

    @classmethod
    def constant(cls, space, value):
        coeffs = np.zeros(space.size, dtype=complex)
        coeffs[0] = value
        return cls(space, coeffs)

    @classmethod
    def variable(cls, space, var, value):
        coeffs = np.zeros(space.size, dtype=complex)
        coeffs[0] = value
        if space.order >= 1:
            unit = [0] * space.nvars
            unit[var] = 1
            coeffs[space.index[tuple(unit)]] = 1.0
        return cls(space, coeffs)

    @property
    def value(self):
        return complex(self.coeffs[0])

    @property
    def order(self):
        return self.space.order

    @property
    def nvars(self):
        return self.space.nvars

    def coefficient(self, multi_index):
        return complex(self.coeffs[self.space.index[tuple(multi_index)]])

    def partial(self, multi_index):
        """The actual partial derivative d^a f at the base point."""
        i = self.space.index[tuple(multi_index)]
        return complex(self.coeffs[i] * self.space.factorials[i])

    def derivative(self, var):
        return JetValue(self.space.lower(), self.space.derivative(self.coeffs, var))

    def truncate(self, order):
        return JetValue(JetSpace.get(self.nvars, order), self.space.truncate(self.coeffs, order))

    def conj(self):
        return JetValue(self.space, np.conj(self.coeffs))

    def compose(self, taylor):
        """Evaluate sum_k taylor[k] * (self - self.value)^k, i.e. g(self) for a
        univariate g with Taylor coefficients `taylor` at self.value."""
        h = self.coeffs.copy()
        h[0] = 0.0
        out = np.zeros_like(h)
        out[0] = taylor[0]
        power = np.zeros_like(h)
        power[0] = 1.0
        for k in range(1, self.order + 1):
            power = self.space.multiply(power, h)
            out = out + taylor[k] * power
        return JetValue(self.space, out)

    def _coerce(self, other):
        if isinstance(other, JetValue):
            if other.nvars != self.nvars:
                raise JetOrderError("Cannot combine jets over different numbers of variables.")
            order = min(self.order, other.order)
            return self.truncate(order), other.truncate(order)
        if _is_number(other):
            return self, JetValue.constant(self.space, other)
        return None

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetValue(a.space, a.coeffs + b.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return JetValue(self.space, -self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetValue(a.space, a.coeffs - b.coeffs)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if _is_number(other):
            return JetValue(self.space, self.coeffs * other)
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return JetValue(a.space, a.space.multiply(a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_number(other):
            if other == 0:
                raise SingularPoint("Division of a jet by zero.")
            return JetValue(self.space, self.coeffs / other)
        if isinstance(other, JetValue):
            return self * power(other, -1)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_number(other):
            return other * power(self, -1)
        return NotImplemented

    def __pow__(self, exponent):
        if _is_number(exponent):
            return power(self, exponent)
        return NotImplemented

    def __float__(self):
        raise UnsupportedPrimitive("Jet values only support the primitives of jets.jet.")

    __complex__ = __float__

    def __repr__(self):
        return f"JetValue(order={self.order}, value={self.value:.6g})"


def constant_like(reference, value):
    if isinstance(reference, JetValue):
        return JetValue.constant(reference.space, value)
    return value


def binom(p, k):
    """Generalized binomial coefficient for real p and integral k >= 0."""
    return math.prod(p - i for i in range(k)) / math.factorial(k)


def _taylor(derivatives):
    return [d / math.factorial(k) for k, d in enumerate(derivatives)]


def _univariate(x, numeric, taylor, vectorized=None):
    if isinstance(x, JetValue):
        return x.compose(taylor(x.value, x.order))
    if isinstance(x, np.ndarray):
        return (vectorized or numeric)(x)
    if _is_number(x):
        return numeric(x)
    raise UnsupportedPrimitive(f"Unsupported argument of type {type(x).__name__}.")


def _plain(x):
    """Drop a zero imaginary part so real inputs stay on real numpy paths."""
    x = complex(x)
    return x.real if x.imag == 0 else x


def sin(x):
    def taylor(x0, order):
        s, c = np.sin(x0), np.cos(x0)
        return _taylor([s, c, -s, -c][: order + 1])

    return _univariate(x, np.sin, taylor)


def cos(x):
    def taylor(x0, order):
        s, c = np.sin(x0), np.cos(x0)
        return _taylor([c, -s, -c, s][: order + 1])

    return _univariate(x, np.cos, taylor)


def exp(x):
    def taylor(x0, order):
        e = np.exp(x0)
        return _taylor([e] * (order + 1))

    return _univariate(x, np.exp, taylor)


def log(x):
    """Principal branch."""

    def numeric(x0):
        if x0 == 0:
            raise SingularPoint("log is singular at 0.")
        return np.emath.log(x0)

    def taylor(x0, order):
        x0 = _plain(x0)
        value = numeric(x0)
        return [value] + [(-1) ** (k + 1) / (k * x0**k) for k in range(1, order + 1)]

    return _univariate(x, numeric, taylor, np.emath.log)


def power(x, p):
    """x**p on the principal branch; integral p >= 0 is regular at 0."""
    integral = float(p).is_integer()

    def vectorized(values):
        if integral:
            return np.asarray(values, dtype=complex) ** int(p)
        return np.emath.power(values, p)

    def numeric(x0):
        if x0 == 0:
            if integral and p >= 0:
                return 1.0 if p == 0 else 0.0
            raise SingularPoint(f"x**{p} is singular at 0.")
        if integral:
            return x0 ** int(p)
        return np.emath.power(x0, p)

    def taylor(x0, order):
        x0 = _plain(x0)
        if x0 == 0:
            numeric(x0)
            return [1.0 if k == p else 0.0 for k in range(order + 1)]
        if integral:
            return [binom(p, k) * x0 ** (int(p) - k) for k in range(order + 1)]
        return [binom(p, k) * np.emath.power(x0, p - k) for k in range(order + 1)]

    return _univariate(x, numeric, taylor, vectorized)


def sqrt(x):
    return power(x, 0.5)


def conj(x):
    if isinstance(x, JetValue):
        return x.conj()
    return np.conj(x)


def value_of(x):
    if isinstance(x, JetValue):
        return x.value
    return complex(x)
