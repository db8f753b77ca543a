"""The reduced first-order systems y' = A(t) y of the three field configurations."""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from django.core.exceptions import ValidationError

from gamma.matrices import IDENTITY4, crossed_field_gammas
from jets.jet import JetSpace, JetValue

from .potentials import zero_potential


@dataclass(frozen=True, eq=False)
class LinearODESystem:
    """y' = A(t) y. `rule(t)` returns the rows of A and accepts jets for t."""

    dimension: int
    rule: Callable
    params: dict = field(default_factory=dict)
    name: str = ""

    def matrix(self, t):
        return np.array(self.rule(t), dtype=complex).reshape(self.dimension, self.dimension)

    def rhs(self, t, y):
        return self.matrix(t) @ y

    def taylor_matrices(self, t0, order):
        """Normalized Taylor coefficients A_k of A at t0, shape (order + 1, d, d)."""
        space = JetSpace.get(1, order)
        rows = self.rule(JetValue.variable(space, 0, t0))
        out = np.zeros((order + 1, self.dimension, self.dimension), dtype=complex)
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                if isinstance(entry, JetValue):
                    out[:, i, j] = entry.coeffs
                else:
                    out[0, i, j] = entry
        return out


def kappa_of(j, zeta):
    return zeta * (j + 0.5)


def radial_system(energy, mass=1.0, potential=zero_potential, j=0.5, zeta=1):
    """f' = (kappa/r) f + (E + m - eV) g,  g' = -(kappa/r) g - (E - m - eV) f."""
    if zeta not in (1, -1):
        raise ValidationError("zeta must be +1 or -1.")
    kappa = kappa_of(j, zeta)

    def rule(r):
        v = potential(r)
        return [
            [kappa / r, energy + mass - v],
            [-(energy - mass - v), -kappa / r],
        ]

    params = {"E": energy, "m": mass, "j": j, "zeta": zeta, "kappa": kappa}
    return LinearODESystem(2, rule, params, name="radial")


def magnetic_system(energy, mass=1.0, eH=1.0, n=1, zeta=1, potential=zero_potential):
    """i f' - n sqrt(eH) zeta f + (m + E + eV) g = 0,  i g' + n sqrt(eH) zeta g - (m - E - eV) f = 0."""
    if not eH > 0:
        raise ValidationError("eH must be positive.")
    if zeta not in (1, -1):
        raise ValidationError("zeta must be +1 or -1.")
    spin = n * zeta * np.sqrt(eH)

    def rule(z):
        v = potential(z)
        return [
            [-1j * spin, 1j * (mass + energy + v)],
            [-1j * (mass - energy - v), 1j * spin],
        ]

    params = {"E": energy, "m": mass, "eH": eH, "n": n, "zeta": zeta}
    return LinearODESystem(2, rule, params, name="magnetic")


def crossed_matrix(u, alpha, epsilon, kappa, q1, q2, mass, charge, phi, hat=None, correction=None):
    """M(u) of -i g4 Phi' + M(u) Phi = 0, as a list of rows; u may be a jet.

    `correction` is a constant matrix added to the printed M(u).
    """
    g1, g2, g3, g4 = hat or crossed_field_gammas(epsilon).gamma
    shift = u - q1
    scale = np.exp(-q2)
    scalar = (
        -0.5 * scale * shift * shift
        - charge * phi(epsilon * u)
        + charge * alpha * u
        + 1 / (2 * epsilon**2)
        + kappa
    )
    parts = [
        (shift * scale - charge * alpha, g1),
        (-scale, g3),
        (-scale * shift, g4),
        (scalar, g2),
        (1.0, 0.5j * g2 @ g1 @ g4 - mass * IDENTITY4),
    ]
    if correction is not None:
        parts.append((1.0, np.asarray(correction, dtype=complex)))
    return combine_matrices(parts)


def combine_matrices(parts):
    """Rows of sum_k c_k M_k for (c_k, M_k) pairs; the c_k may be jets."""
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            entry = 0.0
            for coefficient, matrix in parts:
                if matrix[i, j] != 0:
                    entry = entry + coefficient * matrix[i, j]
            row.append(entry)
        rows.append(row)
    return rows


def crossed_system(alpha, epsilon, kappa, q1, q2, mass=1.0, charge=1.0, phi=zero_potential, correction=None):
    """Phi' = -i g4^{-1} M(u) Phi, with g4^{-1} = -epsilon^2 g4."""
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive.")
    hat = crossed_field_gammas(epsilon).gamma
    inverse = -(epsilon**2) * hat[3]

    def rule(u):
        m = crossed_matrix(u, alpha, epsilon, kappa, q1, q2, mass, charge, phi, hat, correction)
        return _matmul_rows(-1j * inverse, m)

    params = {
        "alpha": alpha,
        "epsilon": epsilon,
        "kappa": kappa,
        "q1": q1,
        "q2": q2,
        "m": mass,
        "e": charge,
    }
    return LinearODESystem(4, rule, params, name="crossed")


def _matmul_rows(constant, rows):
    out = []
    for i in range(constant.shape[0]):
        row = []
        for j in range(len(rows[0])):
            entry = 0.0
            for k in range(constant.shape[1]):
                if constant[i, k] != 0:
                    entry = entry + constant[i, k] * rows[k][j]
            row.append(entry)
        out.append(row)
    return out
