"""Whittaker parabolic cylinder functions D_nu(x) for real order and argument."""
import logging
import math

import numpy as np
from django.core.exceptions import ValidationError
from scipy.special import hyp1f1, pbdv, poch, rgamma

from jets.jet import JetValue

logger = logging.getLogger(__name__)

MAX_ARGUMENT = 40.0
MAX_ORDER = 50.0
SWITCH = 6.0
# beyond this the confluent series overflows; the asymptotic expansion is accurate there
KUMMER_LIMIT = 25.0
MAX_TERMS = 60


def _validate(nu, x):
    if abs(x) > MAX_ARGUMENT or abs(nu) > MAX_ORDER:
        raise ValidationError(
            f"D_nu(x) is supported for |x| <= {MAX_ARGUMENT:g} and |nu| <= {MAX_ORDER:g}."
        )


def _fallback(nu, x):
    value, _ = pbdv(nu, x)
    return float(value)


def _kummer(nu, x):
    """Confluent series; None when the even and odd parts cancel."""
    z = 0.5 * x * x
    even = math.sqrt(math.pi) * rgamma(0.5 * (1 - nu)) * hyp1f1(-0.5 * nu, 0.5, z)
    odd = math.sqrt(2 * math.pi) * x * rgamma(-0.5 * nu) * hyp1f1(0.5 * (1 - nu), 1.5, z)
    value = 2 ** (0.5 * nu) * math.exp(-0.25 * x * x) * (even - odd)
    largest = 2 ** (0.5 * nu) * math.exp(-0.25 * x * x) * max(abs(even), abs(odd))
    if largest and abs(value) < 1e-6 * largest:
        logger.debug("Kummer cancellation at nu=%g, x=%g", nu, x)
        return None
    return value


def _asymptotic_sum(terms):
    """Sum an asymptotic series up to its smallest term; None if it never settles."""
    total, previous = 0.0, math.inf
    for term in terms:
        if abs(term) > previous:
            break
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
        previous = abs(term)
    if previous > 1e-12 * abs(total):
        return None
    return total


def _u_series(nu, y):
    return _asymptotic_sum(
        (-1) ** s * poch(-nu, 2 * s) / (math.factorial(s) * (2 * y * y) ** s)
        for s in range(MAX_TERMS)
    )


def _v_series(nu, y):
    return _asymptotic_sum(
        poch(nu + 1, 2 * s) / (math.factorial(s) * (2 * y * y) ** s) for s in range(MAX_TERMS)
    )


def _asymptotic(nu, x):
    y = abs(x)
    u = _u_series(nu, y)
    if u is None:
        return _fallback(nu, x)
    decaying = math.exp(-0.25 * y * y) * y**nu * u
    if x > 0:
        return decaying
    growing_weight = math.pi * rgamma(-nu)
    if growing_weight == 0:
        return math.cos(math.pi * nu) * decaying
    v = _v_series(nu, y)
    if v is None:
        return _fallback(nu, x)
    growing = math.sqrt(2 / math.pi) * math.exp(0.25 * y * y) * y ** (-nu - 1) * v
    return math.cos(math.pi * nu) * decaying + growing_weight * growing


def _value(nu, x):
    _validate(nu, x)
    if x > SWITCH or x < -KUMMER_LIMIT:
        return _asymptotic(nu, x)
    value = _kummer(nu, x)
    if value is not None:
        return value
    if x < -SWITCH:
        return _asymptotic(nu, x)
    return _fallback(nu, x)


def parabolic_taylor(nu, x0, order):
    """Normalized Taylor coefficients of D_nu at x0 from D' = x D / 2 - D_{nu+1}
    and Weber's equation D'' = (x^2/4 - nu - 1/2) D."""
    d0 = _value(nu, x0)
    d1 = 0.5 * x0 * d0 - _value(nu + 1, x0)
    weight = 0.25 * x0 * x0 - nu - 0.5
    d2 = weight * d0
    d3 = 0.5 * x0 * d0 + weight * d1
    return [d0, d1, d2 / 2, d3 / 6][: order + 1]


def parabolic_cylinder_D(nu, x):
    """D_nu(x); accepts a jet for x, real base point."""
    if isinstance(x, JetValue):
        base = x.value
        if base.imag != 0:
            raise ValidationError("D_nu is only provided for real arguments.")
        return x.compose(parabolic_taylor(nu, base.real, x.order))
    return _value(nu, float(np.real(x)))
