"""Dirac equation in the crossed field E_x = alpha/(t - z), E_y = phi(y), H = [n, E].

Cartesian coordinates are (t, x, y, z); group coordinates are g = (g1, g2, g3, g4); the
reduced problem lives in (u, v) with v > 0.
"""
import logging
import math

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from scipy.linalg import expm

from diracni.utils import gen_random_points, gen_rng, max_abs
from gamma.matrices import IDENTITY4, MINKOWSKI, crossed_field_gammas, crossed_frame_metric, standard_gammas
from jets.fields import random_test_spinor
from jets.jet import JetValue, exp, log, power, value_of
from liesym.group import chart, chart_jacobian, invariant_fields
from ode.solver import integrate
from ode.systems import combine_matrices, crossed_matrix, crossed_system
from operators.diffop import MatrixDiffOp, Term

from .specs import SolutionField

logger = logging.getLogger(__name__)

# t - z >= 0.5 keeps the Cartesian potential regular
CARTESIAN_BOX = [(1.5, 2.5), (-1.0, 1.0), (-1.0, 1.0), (-1.0, 1.0)]
# e^{-g2} stays inside the sampled v range
GROUP_BOX = [(-1.0, 1.0), (-0.6, 0.6), (-1.0, 1.0), (-0.9, 0.9)]
EXP_TERMS = 40
LIGHT_CONE_MARGIN = 1e-12


def _unit(k, nvars=4):
    return tuple(int(i == k) for i in range(nvars))


def _light_cone(t, z):
    gap = t - z
    if abs(value_of(gap)) < LIGHT_CONE_MARGIN:
        raise ValidationError("The crossed-field potential is singular at t = z.")
    return gap


def cartesian_potential(spec):
    """A_mu(t, x, y, z) with lower indices; A_4 = -A_1 = alpha x / (t - z) + phi(y)."""
    alpha, epsilon, phi = spec.alpha, spec.epsilon, spec.phi

    def rule(t, x, y, z):
        wave = alpha * x / _light_cone(t, z) + phi(y)
        return [-wave, alpha + 0.0 * x, -alpha / epsilon + 0.0 * x, wave]

    return rule


def cartesian_hamiltonian(spec):
    """gamma^mu (i d_mu - e A_mu)."""
    gamma = standard_gammas().gamma
    potential = cartesian_potential(spec)
    e = spec.charge
    terms = [Term(1j, _unit(mu), gamma[mu]) for mu in range(4)]
    if e != 0:
        for mu in range(4):
            terms.append(Term(lambda *x, mu=mu: -e * potential(*x)[mu], (0, 0, 0, 0), gamma[mu]))
    return MatrixDiffOp(4, terms, name="H")


def crossed_generators(spec):
    """X1 = L21 + L24 + (g12 + g24)/2, X2 = L14 - g14/2, X3 = d_t + d_z, X4 = d_x + eps d_y."""
    gammas = standard_gammas()
    x1 = MatrixDiffOp(
        4,
        [
            Term(lambda t, x, y, z: -x, _unit(0), IDENTITY4),
            Term(lambda t, x, y, z: z - t, _unit(1), IDENTITY4),
            Term(lambda t, x, y, z: -x, _unit(3), IDENTITY4),
            Term(1, (0, 0, 0, 0), 0.5 * (gammas.bivector(1, 2) + gammas.bivector(2, 4))),
        ],
        name="X1",
    )
    x2 = MatrixDiffOp(
        4,
        [
            Term(lambda t, x, y, z: z, _unit(0), IDENTITY4),
            Term(lambda t, x, y, z: t, _unit(3), IDENTITY4),
            Term(-0.5, (0, 0, 0, 0), gammas.bivector(1, 4)),
        ],
        name="X2",
    )
    x3 = MatrixDiffOp(4, [Term(1, _unit(0), IDENTITY4), Term(1, _unit(3), IDENTITY4)], name="X3")
    x4 = MatrixDiffOp(
        4, [Term(1, _unit(1), IDENTITY4), Term(spec.epsilon, _unit(2), IDENTITY4)], name="X4"
    )
    return x1, x2, x3, x4


def tetrad_potential(spec):
    """A_a(g): alpha, e^{-g2} phi(eps g4) - alpha g4, 0, 0."""
    alpha, epsilon, phi = spec.alpha, spec.epsilon, spec.phi

    def rule(g1, g2, g3, g4):
        zero = 0.0 * g1
        return [alpha + zero, exp(-g2) * phi(epsilon * g4) - alpha * g4, zero, zero]

    return rule


def eta_matrix(g):
    """eta[a, k]: component along d/dg_k of the right-invariant field eta_a at g."""
    _, eta = invariant_fields()
    out = np.zeros((4, 4), dtype=complex)
    for a, op in enumerate(eta):
        for term in op.terms:
            k = term.multi_index.index(1)
            out[a, k] += term.matrix[0, 0] * term.evaluate_coefficient(list(g))
    return out


def pulled_back_potential(spec, g):
    """A_mu(x(g)) dx^mu/dg_k contracted with eta_a^k."""
    point = chart(list(g), spec.epsilon)
    covector = np.array(cartesian_potential(spec)(*point), dtype=complex)
    in_group = covector @ chart_jacobian(g, spec.epsilon)
    return eta_matrix(g) @ in_group


def potential_pullback_residual(spec, points):
    printed = tetrad_potential(spec)
    worst = 0.0
    for g in points:
        worst = max(worst, max_abs(pulled_back_potential(spec, g) - np.array(printed(*g), dtype=complex)))
    return worst


def spin_connection(hat):
    return (
        -0.5 * (hat.bivector(1, 2) + hat.bivector(2, 4)),
        -0.5 * hat.bivector(2, 3),
        0 * IDENTITY4,
        0 * IDENTITY4,
    )


def crossed_hamiltonian(spec):
    """gamma-hat^a (i (eta_a + Gamma_a) - e A_a(g)) in group coordinates."""
    hat = crossed_field_gammas(spec.epsilon)
    _, eta = invariant_fields()
    connection = spin_connection(hat)
    potential = tetrad_potential(spec)
    e = spec.charge
    terms = []
    for a, field in enumerate(eta):
        gamma = hat.gamma[a]
        for term in field.terms:
            terms.append(Term(_times(term.coefficient, 1j * term.matrix[0, 0]), term.multi_index, gamma))
        terms.append(Term(1j, (0, 0, 0, 0), gamma @ connection[a]))
        if e != 0:
            terms.append(Term(lambda *g, a=a: -e * potential(*g)[a], (0, 0, 0, 0), gamma))
    return MatrixDiffOp(4, terms, name="H (moving frame)")


def _times(coefficient, factor):
    if callable(coefficient):
        return lambda *x: factor * coefficient(*x)
    return factor * coefficient


def frame_metric_mismatch(spec, points):
    """|J (eta^T G^{-1} eta) J^T - eta_Minkowski| pushed through the chart."""
    inverse = np.linalg.inv(crossed_frame_metric(spec.epsilon))
    worst = 0.0
    for g in points:
        eta = eta_matrix(g)
        jacobian = chart_jacobian(g, spec.epsilon)
        pushed = jacobian @ (eta.T @ inverse @ eta) @ jacobian.T
        worst = max(worst, max_abs(pushed - MINKOWSKI))
    return worst


def moving_frame_mismatch(spec, points, seed=None):
    """|H_G (psi o chart) - (H psi) o chart| for seeded Cartesian fields."""
    seed = settings.DEFAULT_SEED if seed is None else seed
    moving, flat = crossed_hamiltonian(spec), cartesian_hamiltonian(spec)
    epsilon = spec.epsilon
    worst = 0.0
    for offset, g in enumerate(points):
        psi = random_test_spinor(seed + offset)
        pulled = SolutionField(lambda *h: psi(*chart(list(h), epsilon)), 4)
        image = moving.apply(pulled, g)
        expected = flat.apply(psi, [complex(c).real for c in chart(list(g), epsilon)])
        worst = max(worst, max_abs(image - expected) / max(max_abs(expected), 1e-300))
    return worst


def _hatted(epsilon):
    hat = crossed_field_gammas(epsilon)
    return hat, hat.bivector(2, 3), hat.bivector(1, 2) + hat.bivector(2, 4)


def crossed_reduced_op(spec, q1, q2):
    """The reduced Dirac operator in (u, v) = (q1 - q1', exp(q2' - q2))."""
    hat, _, _ = _hatted(spec.epsilon)
    g1, g2, g3, g4 = hat.gamma
    e, alpha, epsilon, phi = spec.charge, spec.alpha, spec.epsilon, spec.phi
    scale = math.exp(-q2)
    constant = -e * alpha * g1 + 0.5j * g2 @ (g1 @ g4 + (1 / epsilon**2 + 2) * IDENTITY4)
    return MatrixDiffOp(
        2,
        [
            Term(-1j, (1, 0), g4),
            Term(lambda u, v: 1j * v, (0, 1), g2),
            Term(lambda u, v: -scale * (q1 - u) / v, (0, 0), g1),
            Term(lambda u, v: -scale / v, (0, 0), g3),
            Term(lambda u, v: -e * (v * phi(epsilon * u) - alpha * u), (0, 0), g2),
            Term(1, (0, 0), constant),
        ],
        name="H (reduced)",
    )


def crossed_Y(spec, q1, q2):
    """-d_v + (B + (i/v) e^{-q2} (u - q1)^2 + 2 i e alpha q1 (1 - v) - 1) / (2v)."""
    _, b23, b_mixed = _hatted(spec.epsilon)
    scale = math.exp(-q2)
    eaq = spec.charge * spec.alpha * q1
    return MatrixDiffOp(
        2,
        [
            Term(-1, (0, 1), IDENTITY4),
            Term(lambda u, v: 0.5 / v, (0, 0), b23),
            Term(lambda u, v: 0.5 * (u - q1) / v, (0, 0), b_mixed),
            Term(
                lambda u, v: (0.5 / v) * ((1j / v) * scale * (u - q1) * (u - q1) + 2j * eaq * (1 - v) - 1),
                (0, 0),
                IDENTITY4,
            ),
        ],
        name="Y",
    )


def crossed_profile(spec, kappa, q1, q2, start=(1.0, 0.5, 0.25, 0.125), tol=None, printed=False):
    """Phi(u) on the u range of the box; the printed M(u) is used uncorrected when `printed`."""
    low, high = spec.box[0]
    correction = None if printed else reduced_matrix_correction(spec, kappa, q1, q2)
    system = crossed_system(
        spec.alpha, spec.epsilon, kappa, q1, q2, spec.mass, spec.charge, spec.phi, correction=correction
    )
    return integrate(system, low - 0.1, high + 0.1, start, tol=tol)


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def matrix_exponential(rows, terms=EXP_TERMS):
    """exp of a 4x4 matrix whose entries may be jets; plain matrices go through expm."""
    if not any(isinstance(entry, JetValue) for row in rows for entry in row):
        return expm(np.array(rows, dtype=complex)).tolist()
    n = len(rows)
    result = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    term = [row[:] for row in result]
    for k in range(1, terms + 1):
        term = [[entry / k for entry in row] for row in _matmul(term, rows)]
        result = [[x + y for x, y in zip(r, s)] for r, s in zip(result, term)]
    return result


def ansatz_matrix(spec, kappa, q1, q2):
    """Rule (u, v) -> rows of R(u, v) = v^{-1/2} exp(((B + 2 i e alpha q1) / 2) log v)
    exp(-i(kappa + e alpha q1) v - i e^{-q2} (u - q1)^2 / (2v)), with psi = R Phi(u)."""
    _, b23, b_mixed = _hatted(spec.epsilon)
    scale = math.exp(-q2)
    eaq = spec.charge * spec.alpha * q1

    def rule(u, v):
        if value_of(v).real <= 0:
            raise ValidationError("The reduced crossed solution needs v > 0.")
        shift = u - q1
        lv = log(v)
        exponent = combine_matrices(
            [(0.5 * lv, b23), (0.5 * shift * lv, b_mixed), (1j * eaq * lv, IDENTITY4)]
        )
        rotation = matrix_exponential(exponent)
        phase = power(v, -0.5) * exp(-1j * (kappa + eaq) * v - 0.5j * scale * shift * shift / v)
        return [[phase * entry for entry in row] for row in rotation]

    return rule


def _ansatz_columns(spec, kappa, q1, q2):
    ansatz = ansatz_matrix(spec, kappa, q1, q2)
    return [SolutionField(lambda u, v, k=k: [row[k] for row in ansatz(u, v)], 2) for k in range(4)]


def derived_crossed_matrix(spec, kappa, q1, q2, point):
    """M at `point` read off (H_red - m)(R Phi) = -i g4 R Phi' + N Phi, i.e. g4 R^{-1} g4^{-1} N."""
    g4 = crossed_field_gammas(spec.epsilon).gamma[3]
    columns = _ansatz_columns(spec, kappa, q1, q2)
    ansatz = np.column_stack([c.values(point) for c in columns])
    op = crossed_reduced_op(spec, q1, q2).shifted(spec.mass)
    image = np.column_stack([op.apply(c, point) for c in columns])
    return g4 @ np.linalg.solve(ansatz, np.linalg.solve(g4, image))


def _printed_matrix(spec, kappa, q1, q2, u, correction=None):
    rows = crossed_matrix(
        u, spec.alpha, spec.epsilon, kappa, q1, q2, spec.mass, spec.charge, spec.phi, correction=correction
    )
    return np.array(rows, dtype=complex)


def reduced_matrix_correction(spec, kappa, q1, q2):
    """Derived minus printed M, taken at the centre of the (u, v) box."""
    point = [0.5 * (low + high) for low, high in spec.box]
    return derived_crossed_matrix(spec, kappa, q1, q2, point) - _printed_matrix(spec, kappa, q1, q2, point[0])


def reduced_matrix_mismatch(spec, kappa, q1, q2, points, corrected=True):
    """Largest |derived M(u, v) - M(u)| over `points`, with or without the correction."""
    correction = reduced_matrix_correction(spec, kappa, q1, q2) if corrected else None
    worst = 0.0
    for point in points:
        derived = derived_crossed_matrix(spec, kappa, q1, q2, point)
        worst = max(worst, max_abs(derived - _printed_matrix(spec, kappa, q1, q2, point[0], correction)))
    logger.debug("reduced crossed matrix, corrected=%s: %.3e", corrected, worst)
    return worst


def crossed_solution(spec, kappa, q1, q2, profile):
    """psi_kappa(u, v) = R(u, v) Phi(u)."""
    ansatz = ansatz_matrix(spec, kappa, q1, q2)
    components = [profile.component(k) for k in range(4)]

    def rule(u, v):
        rows = ansatz(u, v)
        phi = [c(u) for c in components]
        return [sum(rows[i][j] * phi[j] for j in range(4)) for i in range(4)]

    labels = {"kappa": kappa, "q1": q1, "q2": q2, "system": profile.system}
    return SolutionField(rule, 2, name=f"crossed kappa={kappa:g}", provenance="NI", labels=labels)


def group_solution(spec, kappa, q1, q2, profile):
    """The solution in group coordinates:
    exp(-i [g3 e^{-q2} + g1 (q1 - g4) e^{g2 - q2}] - 2 (q2 - g2)) psi_kappa(g4, e^{-g2})."""
    reduced = crossed_solution(spec, kappa, q1, q2, profile)
    scale = math.exp(-q2)

    def rule(g1, g2, g3, g4):
        phase = exp(-1j * (g3 * scale + g1 * (q1 - g4) * scale * exp(g2)) - 2 * (q2 - g2))
        return [phase * c for c in reduced(g4, exp(-g2))]

    return SolutionField(rule, 4, name=f"crossed kappa={kappa:g} in g", provenance="NI", labels=reduced.labels)


def group_constraints(q1, q2):
    """(xi_a, -l_a) for the left-invariant fields whose lambda-operators multiply:
    l1 = i q1 e^{-q2}, l3 = i e^{-q2}."""
    xi, _ = invariant_fields()
    scale = math.exp(-q2)
    return [
        (xi[0].extended(4, (0, 1, 2, 3), dim=4), -1j * q1 * scale),
        (xi[2].extended(4, (0, 1, 2, 3), dim=4), -1j * scale),
    ]


def group_points(count, seed=None):
    rng = gen_rng(settings.DEFAULT_SEED if seed is None else seed)
    return gen_random_points(rng, GROUP_BOX, count, margin=0.0)


def cartesian_points(count, seed=None):
    rng = gen_rng(settings.DEFAULT_SEED if seed is None else seed)
    return gen_random_points(rng, CARTESIAN_BOX, count, margin=0.0)
