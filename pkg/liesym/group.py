"""The four-dimensional solvable group acting on Minkowski space in the crossed field."""
import logging
from typing import NamedTuple

import numpy as np

from jets.fields import coordinate_jets
from jets.jet import conj, exp
from operators.checks import CheckResult
from operators.diffop import MatrixDiffOp, Term

logger = logging.getLogger(__name__)

ONE = np.eye(1, dtype=complex)


class GroupElement4(NamedTuple):
    g1: float
    g2: float
    g3: float
    g4: float


IDENTITY = GroupElement4(0.0, 0.0, 0.0, 0.0)


def group_multiply(g, h):
    return GroupElement4(
        g[0] + exp(-g[1]) * h[0],
        g[1] + h[1],
        h[2] + exp(h[1]) * (g[2] + g[3] * h[0]),
        g[3] + h[3],
    )


def group_inverse(g):
    h1 = -g[0] * exp(g[1])
    return GroupElement4(h1, -g[1], -exp(-g[1]) * (g[2] + g[3] * h1), -g[3])


def chart(g, epsilon):
    """Cartesian (t, x, y, z) of the group coordinates g."""
    g1, g2, _, g4 = g
    return (
        -0.5 * (g1 * g1 * exp(g2) + exp(-g2)),
        g4 - g1,
        epsilon * g4,
        -0.5 * (g1 * g1 * exp(g2) - exp(-g2)),
    )


def chart_jacobian(g, epsilon):
    coords = coordinate_jets(list(g), 1)
    image = chart(coords, epsilon)
    return np.array([[c.partial(tuple(int(i == k) for i in range(4))) for k in range(4)] for c in image])


def chart_rank(g, epsilon):
    return int(np.linalg.matrix_rank(chart_jacobian(g, epsilon), tol=1e-10))


def _field(terms, name):
    return MatrixDiffOp(4, terms, dim=1, name=name)


def _d(k):
    return tuple(int(i == k) for i in range(4))


def invariant_fields():
    """Left-invariant fields xi_a and right-invariant fields eta_a as operators in g."""
    xi = [
        _field([Term(lambda *g: exp(-g[1]), _d(0), ONE), Term(lambda *g: g[3], _d(2), ONE)], "xi1"),
        _field([Term(1, _d(1), ONE), Term(lambda *g: g[2], _d(2), ONE)], "xi2"),
        _field([Term(1, _d(2), ONE)], "xi3"),
        _field([Term(1, _d(3), ONE)], "xi4"),
    ]
    eta = [
        _field([Term(-1, _d(0), ONE)], "eta1"),
        _field([Term(lambda *g: g[0], _d(0), ONE), Term(-1, _d(1), ONE)], "eta2"),
        _field([Term(lambda *g: -exp(g[1]), _d(2), ONE)], "eta3"),
        _field(
            [Term(lambda *g: -g[0] * exp(g[1]), _d(2), ONE), Term(-1, _d(3), ONE)], "eta4"
        ),
    ]
    return xi, eta


def crossed_D_kernel(q, g, corrected=False, q_prime=None):
    """Smooth factor of D_{q q'}(g^{-1}); the delta factors are realized as
    q'_1 = q_1 - g_4, q'_2 = q_2 - g_2 unless `q_prime` is given."""
    g1, g2, g3, g4 = g
    if q_prime is None:
        q_prime = (q[0] - g4, q[1] - g2)
    p1, p2 = q_prime
    # the printed exponent carries e^{-g_1}; the kernel equations need e^{-g_2}
    shift = g2 if corrected else g1
    return exp(-1j * (g3 * exp(-shift - p2) + g1 * p1 * exp(-p2)) - 2 * p2)


def kernel_residuals(points, corrected=False, tol=1e-10):
    """Residuals of the kernel equations that the delta factors do not touch:
    left a = 3 with and without conjugating l_3, and right a = 4."""
    left_plain, left_conj, right = 0.0, 0.0, 0.0
    label = "corrected" if corrected else "printed"
    for point in points:
        g0, q0 = point[:4], point[4:6]
        # variables (g1..g4, q1, q2) with q' substituted
        jets = coordinate_jets(list(g0) + list(q0), 1)
        g, q = jets[:4], jets[4:]
        value = crossed_D_kernel(q, g, corrected)
        l3 = 1j * exp(-q[1])
        xi3 = value.derivative(2).value
        scale = abs(value.value)
        left_plain = max(left_plain, abs(xi3 + (l3 * value).value) / scale)
        left_conj = max(left_conj, abs(xi3 + (conj(l3) * value).value) / scale)
        # variables (g1..g4, q'1, q'2) with q' free
        jets = coordinate_jets(list(g0) + [q0[0] - g0[3], q0[1] - g0[1]], 1)
        g, p = jets[:4], jets[4:]
        value = crossed_D_kernel(None, g, corrected, q_prime=p)
        eta4 = -(g[0] * exp(g[1])).value * value.derivative(2).value - value.derivative(3).value
        right = max(right, abs(eta4 + value.derivative(4).value) / abs(value.value))
    logger.debug("%s kernel residuals: %.2e %.2e %.2e", label, left_plain, left_conj, right)
    return [
        CheckResult(f"crossed: {label} kernel, left a=3", left_plain, tol),
        CheckResult(f"crossed: {label} kernel, left a=3 with conjugated l3", left_conj, tol),
        CheckResult(f"crossed: {label} kernel, right a=4", right, tol),
    ]
