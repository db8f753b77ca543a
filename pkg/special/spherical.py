"""Spherical harmonics, spin-1/2 Clebsch-Gordan coefficients and spherical spinors."""
import math

import numpy as np
from django.core.exceptions import ValidationError
from numpy.polynomial import Legendre, Polynomial

from diracni.utils import doubled, is_half_integer
from gamma.matrices import PAULI
from jets.jet import cos, exp, sin, value_of
from operators.diffop import MatrixDiffOp, Term


def _legendre_derivative(l, m):
    """Power-series coefficients of d^m/dx^m P_l(x)."""
    return Legendre.basis(l).deriv(m).convert(kind=Polynomial).coef


def _horner(coefficients, x):
    result = 0.0
    for c in reversed(coefficients):
        result = result * x + c
    return result


def spherical_harmonic(l, m, theta, phi):
    """Orthonormal Y_l^m with the Condon-Shortley phase; theta and phi may be jets."""
    if l < 0 or abs(m) > l or int(l) != l or int(m) != m:
        raise ValidationError(f"Invalid spherical harmonic indices l={l}, m={m}.")
    if not 0 < value_of(theta).real < math.pi:
        raise ValidationError("theta must lie strictly between 0 and pi.")
    l, m = int(l), int(m)
    a = abs(m)
    norm = math.sqrt((2 * l + 1) / (4 * math.pi) * math.factorial(l - a) / math.factorial(l + a))
    associated = (-1) ** a * sin(theta) ** a * _horner(_legendre_derivative(l, a), cos(theta))
    if m < 0:
        norm *= (-1) ** a
    return norm * associated * exp(1j * m * phi)


def cg_half(l, m_l, m_s, j):
    """<l m_l; 1/2 m_s | j, m_l + m_s>."""
    if m_s not in (0.5, -0.5) or abs(j - l) != 0.5 or j < 0.5 or abs(m_l) > l:
        raise ValidationError("Quantum numbers do not couple l with spin 1/2.")
    twice_m = doubled(m_l + m_s)
    width = 2 * l + 1
    if abs(twice_m) > doubled(j):
        return 0.0
    if j == l + 0.5:
        if m_s > 0:
            return math.sqrt(0.5 * (width + twice_m) / width)
        return math.sqrt(0.5 * (width - twice_m) / width)
    if m_s > 0:
        return -math.sqrt(0.5 * (width - twice_m) / width)
    return math.sqrt(0.5 * (width + twice_m) / width)


def orbital_number(j, zeta):
    return int(round(j - 0.5 * zeta))


def validate_spinor_labels(j, m, zeta):
    if zeta not in (1, -1):
        raise ValidationError("zeta must be +1 or -1.")
    if j < 0.5 or not is_half_integer(j) or doubled(j) % 2 == 0:
        raise ValidationError("Spherical spinors need half-integral j >= 1/2.")
    if abs(m) > j or not is_half_integer(m) or (doubled(m) - doubled(j)) % 2:
        raise ValidationError(f"M={m} is not a projection of j={j}.")


def spherical_spinor(j, m, zeta, theta, phi):
    """Omega^j_{M zeta} with orbital number l = j - zeta/2, upper component spin up."""
    validate_spinor_labels(j, m, zeta)
    l = orbital_number(j, zeta)
    components = []
    for m_s in (0.5, -0.5):
        m_l = m - m_s
        if abs(m_l) > l:
            components.append(0.0 * theta)
            continue
        components.append(cg_half(l, m_l, m_s, j) * spherical_harmonic(l, m_l, theta, phi))
    return components


def to_local_frame(components, theta, phi):
    """U^dagger Omega with U = exp(-i phi s3/2) exp(-i theta s2/2) W, W = (1 + i s1 + i s2 + i s3)/2;
    the frame in which alpha^1 points radially."""
    a, b = components
    a, b = exp(0.5j * phi) * a, exp(-0.5j * phi) * b
    c, s = cos(0.5 * theta), sin(0.5 * theta)
    a, b = c * a + s * b, c * b - s * a
    return [0.5 * ((1 - 1j) * a - (1 + 1j) * b), 0.5 * ((1 - 1j) * a + (1 + 1j) * b)]


def local_frame_spinor(j, m, zeta, theta, phi):
    return to_local_frame(spherical_spinor(j, m, zeta, theta, phi), theta, phi)


def total_angular_momentum():
    """J_x, J_y, J_z = L + sigma/2 on 2-spinors over (theta, phi)."""
    one = np.eye(2, dtype=complex)
    jx = MatrixDiffOp(
        2,
        [
            Term(lambda t, p: 1j * sin(p), (1, 0), one),
            Term(lambda t, p: 1j * cos(t) / sin(t) * cos(p), (0, 1), one),
            Term(1, (0, 0), 0.5 * PAULI[0]),
        ],
        dim=2,
        name="Jx",
    )
    jy = MatrixDiffOp(
        2,
        [
            Term(lambda t, p: -1j * cos(p), (1, 0), one),
            Term(lambda t, p: 1j * cos(t) / sin(t) * sin(p), (0, 1), one),
            Term(1, (0, 0), 0.5 * PAULI[1]),
        ],
        dim=2,
        name="Jy",
    )
    jz = MatrixDiffOp(
        2, [Term(-1j, (0, 1), one), Term(1, (0, 0), 0.5 * PAULI[2])], dim=2, name="Jz"
    )
    return jx, jy, jz
