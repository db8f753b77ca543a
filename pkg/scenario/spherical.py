"""Dirac equation with a central potential, in the rotating spinor frame."""
import logging
import math

import numpy as np
from django.conf import settings
from scipy.linalg import null_space
from scipy.special import gammaln

from diracni.exceptions import DiracNIError
from diracni.utils import doubled, gen_rng, max_abs
from gamma.matrices import IDENTITY4, PAULI, standard_gammas
from jets.jet import cos, exp, power, sin, sqrt
from liesym.quadrature import cylinder_grid, until_converged
from liesym.representations import so3_lambda_rep, so3_matrices
from ode.solver import JoinedProfile, integrate
from ode.systems import LinearODESystem, kappa_of, radial_system
from operators.diffop import MatrixDiffOp, Term, product_apply
from special.spherical import local_frame_spinor, spherical_spinor, validate_spinor_labels

from .specs import SolutionField

logger = logging.getLogger(__name__)

# X1 (= d/dphi) is intertwined with l3 (= d/dq); the cyclic relabeling keeps the bracket table
PAIRING = (2, 0, 1)
REFERENCE_ANGLES = (math.pi / 2, 0.0)


def _cot(theta):
    return cos(theta) / sin(theta)


def spherical_hamiltonian(spec):
    gammas = standard_gammas()
    a1, a2, a3 = gammas.alpha
    v = spec.potential
    terms = [
        Term(-1j, (1, 0, 0), a1),
        Term(lambda r, t, p: -1j / r, (0, 0, 0), a1),
        Term(lambda r, t, p: -1j / r, (0, 1, 0), a2),
        Term(lambda r, t, p: -0.5j * _cot(t) / r, (0, 0, 0), a2),
        Term(lambda r, t, p: -1j / (r * sin(t)), (0, 0, 1), a3),
        Term(spec.mass, (0, 0, 0), gammas.beta),
        Term(lambda r, t, p: v(r), (0, 0, 0), IDENTITY4),
    ]
    return MatrixDiffOp(3, terms, name="H")


def rotation_generators():
    s1 = standard_gammas().sigma[0]
    x1 = MatrixDiffOp(3, [Term(1, (0, 0, 1), IDENTITY4)], name="X1")
    x2 = MatrixDiffOp(
        3,
        [
            Term(lambda r, t, p: -_cot(t) * sin(p), (0, 0, 1), IDENTITY4),
            Term(lambda r, t, p: cos(p), (0, 1, 0), IDENTITY4),
            Term(lambda r, t, p: 0.5j * sin(p) / sin(t), (0, 0, 0), s1),
        ],
        name="X2",
    )
    x3 = MatrixDiffOp(
        3,
        [
            Term(lambda r, t, p: -_cot(t) * cos(p), (0, 0, 1), IDENTITY4),
            Term(lambda r, t, p: -sin(p), (0, 1, 0), IDENTITY4),
            Term(lambda r, t, p: 0.5j * cos(p) / sin(t), (0, 0, 0), s1),
        ],
        name="X3",
    )
    return x1, x2, x3


def spin_operator():
    gammas = standard_gammas()
    beta, (_, s2, s3) = gammas.beta, gammas.sigma
    return MatrixDiffOp(
        3,
        [
            Term(lambda r, t, p: -1 / sin(t), (0, 0, 1), beta @ s2),
            Term(lambda r, t, p: 0.5 * _cot(t), (0, 0, 0), beta @ s3),
            Term(1, (0, 1, 0), beta @ s3),
        ],
        name="S",
    )


def casimir_apply(field, point):
    """J^2 psi = -(X1^2 + X2^2 + X3^2) psi."""
    return -sum(product_apply([x, x], field, point) for x in rotation_generators())


def radial_profile(spec, j, zeta, start=(1.0, 0.5), tol=None):
    """A solution of the radial system over the sampling range of r."""
    low, high = spec.box[0]
    system = radial_system(spec.energy, spec.mass, spec.potential, j, zeta)
    return integrate(system, low - 0.1, high + 0.1, start, tol=tol)


def _assemble(f, g, upper, r):
    """(1/r) (f u, -i g sigma^1 u)."""
    return [f * upper[0] / r, f * upper[1] / r, -1j * g * upper[1] / r, -1j * g * upper[0] / r]


def sov_basis_spherical(j, m, zeta, profile):
    validate_spinor_labels(j, m, zeta)
    f, g = profile.component(0), profile.component(1)

    def rule(r, theta, phi):
        return _assemble(f(r), g(r), local_frame_spinor(j, m, zeta, theta, phi), r)

    labels = {"j": j, "M": m, "zeta": zeta, "kappa": kappa_of(j, zeta), "system": profile.system}
    return SolutionField(rule, 3, name=f"SoV j={j} M={m} zeta={zeta}", provenance="SoV", labels=labels)


def projections(j):
    return [k / 2 for k in range(-doubled(j), doubled(j) + 1, 2)]


def multiplet_matrices(j, zeta, samples=6, seed=0):
    """Matrices of X1, X2, X3 on the angular multiplet u_N, N = -j..j, by least squares
    over sample angles."""
    ms = projections(j)
    rng = gen_rng(seed)
    points = np.column_stack(
        [np.ones(samples), rng.uniform(0.3, math.pi - 0.3, samples), rng.uniform(0, 2 * math.pi, samples)]
    )
    fields = [
        SolutionField(
            lambda r, t, p, n=n: _assemble(1.0, 1.0, local_frame_spinor(j, n, zeta, t, p), 1.0), 3
        )
        for n in ms
    ]
    values = np.column_stack([np.concatenate([fl.values(p) for p in points]) for fl in fields])
    out = []
    for op in rotation_generators():
        images = np.column_stack([np.concatenate([op.apply(fl, p) for p in points]) for fl in fields])
        matrix, *_ = np.linalg.lstsq(values, images, rcond=None)
        out.append(matrix)
    return ms, out


def intertwiner(j, zeta):
    """C with C X^T = -L C for every paired (X_a, l_a), normalized at the reference point."""
    validate_spinor_labels(j, j, zeta)
    ms, xs = multiplet_matrices(j, zeta)
    _, ls = so3_matrices(j)
    n = len(ms)
    unit = np.eye(n)
    system = np.vstack([np.kron(x, unit) + np.kron(unit, ls[PAIRING[a]]) for a, x in enumerate(xs)])
    kernel = null_space(system, rcond=1e-9)
    logger.debug("j=%g zeta=%d: intertwiner space of dimension %d", j, zeta, kernel.shape[1])
    if kernel.shape[1] != 1:
        raise DiracNIError(f"Expected a unique intertwiner, found {kernel.shape[1]}.")
    c = kernel[:, 0].reshape((n, n), order="F")
    reference = _d_function(j, zeta, c, *REFERENCE_ANGLES, 0.0)
    pivot = reference[int(np.argmax(np.abs(reference)))]
    return c / pivot


def _d_function(j, zeta, c, theta, phi, q):
    ms = projections(j)
    spinors = [local_frame_spinor(j, n, zeta, theta, phi) for n in ms]
    out = [0.0, 0.0]
    for row, m in enumerate(ms):
        phase = exp(1j * m * q)
        for col in range(len(ms)):
            if c[row, col] == 0:
                continue
            for k in range(2):
                out[k] = out[k] + c[row, col] * phase * spinors[col][k]
    return out


def d_function(j, zeta, theta, phi, q):
    """The angular factor D^j_{q zeta} of the NI basis, in the rotating frame."""
    return _d_function(j, zeta, intertwiner(j, zeta), theta, phi, q)


def ni_basis_spherical(j, zeta, q, profile, coefficients=None):
    """NI solution at fixed q; with q=None the field takes q as a fourth variable."""
    c = intertwiner(j, zeta) if coefficients is None else coefficients
    f, g = profile.component(0), profile.component(1)

    def at(r, theta, phi, qq):
        return _assemble(f(r), g(r), _d_function(j, zeta, c, theta, phi, qq), r)

    labels = {"j": j, "zeta": zeta, "q": q, "kappa": kappa_of(j, zeta), "system": profile.system}
    if q is None:
        return SolutionField(at, 4, name=f"NI j={j} zeta={zeta}", provenance="NI", labels=labels)
    return SolutionField(
        lambda r, t, p: at(r, t, p, q), 3, name=f"NI j={j} zeta={zeta} q={q}", provenance="NI", labels=labels
    )


def ni_constraint_operators(j):
    """X_a + l_a on functions of (r, theta, phi, q), paired as in the intertwiner."""
    lops = so3_lambda_rep(j).ops
    out = []
    for a, x in enumerate(rotation_generators()):
        lifted_x = x.extended(4, (0, 1, 2))
        lifted_l = lops[PAIRING[a]].extended(4, (3,), dim=4)
        out.append((lifted_x + lifted_l).named(f"{x.name} + {lops[PAIRING[a]].name}"))
    return out


def printed_d_function(j, zeta, theta, phi, q):
    """The closed-form angular factor as printed (upper pair of the NI spinor)."""
    prefactor = math.exp(j * math.log(2) + 2 * gammaln(j + 1) - gammaln(2 * j + 1))
    base = -1j * cos(theta) * sin(q) + sin(theta) * (cos(phi) - 1j * cos(q) * sin(phi))
    radicand = (
        cos(theta) * sin(q)
        + 1j * cos(phi) * (cos(q) + sin(theta))
        + sin(phi)
        + cos(q) * sin(theta) * sin(phi)
    )
    ratio = (cos(q) * cos(theta) + 1j * sin(q) * (cos(phi) + 1j * sin(theta) * sin(phi))) / (
        1 + cos(q) * sin(theta) + cos(theta) * sin(q) * sin(phi)
    )
    common = prefactor * power(base, j - 0.5) * sqrt(radicand)
    return [common * (ratio - 1j * zeta), common * (1 - 1j * zeta * ratio)]


def printed_ni_field(j, zeta):
    """(D_{q zeta}, -zeta D_{q,-zeta}) over (r, theta, phi, q) with unit radial factors."""

    def rule(r, theta, phi, q):
        upper = printed_d_function(j, zeta, theta, phi, q)
        lower = printed_d_function(j, -zeta, theta, phi, q)
        return [upper[0] / r, upper[1] / r, -zeta * lower[0] / r, -zeta * lower[1] / r]

    return SolutionField(rule, 4, name=f"printed NI j={j} zeta={zeta}", provenance="NI")


def printed_d_residual(j, zeta, points):
    """Relative residual of the printed closed form in X_a psi = -l_a psi, for the
    direct pairing (X_a with l_a) and the cyclic one; the smaller is returned."""
    field = printed_ni_field(j, zeta)
    lops = so3_lambda_rep(j).ops
    best = math.inf
    for pairing in ((0, 1, 2), PAIRING):
        worst = 0.0
        for point in points:
            scale = max_abs(field.values(point))
            for a, x in enumerate(rotation_generators()):
                op = x.extended(4, (0, 1, 2)) + lops[pairing[a]].extended(4, (3,), dim=4)
                worst = max(worst, max_abs(op.apply(field, point)) / scale)
        best = min(best, worst)
    return best


def _frame_rotation(theta, phi):
    """U = exp(-i phi s3/2) exp(-i theta s2/2) W."""
    w = 0.5 * (np.eye(2) + 1j * PAULI[0] + 1j * PAULI[1] + 1j * PAULI[2])
    rz = np.diag([np.exp(-0.5j * phi), np.exp(0.5j * phi)])
    c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
    ry = np.array([[c, -s], [s, c]], dtype=complex)
    return rz @ ry @ w


def bridge_weights(j, m, cutoff=None, nodes=None):
    """int_Q e^{i (M' + M) q} d mu(q) for every M' = -j..j."""
    cutoff = settings.QUADRATURE_CUTOFF if cutoff is None else cutoff
    rep = so3_lambda_rep(j)
    ms = projections(j)

    def compute(n):
        grid = cylinder_grid(cutoff, n)
        (q,) = grid.coords
        weighted = grid.weights * rep.density(q)
        return np.array([np.sum(weighted * np.exp(1j * (mp + m) * q)) for mp in ms])

    return until_converged(compute, nodes, label=f"omega bridge j={j} M={m}")


def _phase_matrices(j):
    """Matrices P_a of the l paired with X1, X2, X3 on the phases e^{iMq}."""
    _, ls = so3_matrices(j)
    return [ls[PAIRING[a]] for a in range(3)]


def reference_constraints(j, zeta):
    """Conditions on the phase coefficients d (rows M, columns spinor index, flattened) of
    D^j_{q zeta} = sum_M e^{iMq} d_M at the reference angles: sin(phi) X2 + cos(phi) X3 = -cot(theta) X1
    + (i/2) s1 / sin(theta) has no angular derivative there, and S psi = i kappa psi."""
    p1, p2, p3 = _phase_matrices(j)
    n = len(p1)
    s1, s2, s3 = PAULI
    return np.vstack(
        [
            np.kron(p3, np.eye(2)) + 0.5j * np.kron(np.eye(n), s1),
            np.kron(p1, s2) - np.kron(p2, s3) - 1j * kappa_of(j, zeta) * np.eye(2 * n),
        ]
    )


def reference_coefficients(j, zeta):
    """The coefficients d at the reference angles, normalized at their largest entry, or None
    when the constraints only admit zero; with the smallest singular value of the constraints."""
    constraints = reference_constraints(j, zeta)
    smallest = float(np.linalg.svd(constraints, compute_uv=False)[-1])
    kernel = null_space(constraints, rcond=1e-9)
    logger.debug("j=%g zeta=%d: reference space of dimension %d", j, zeta, kernel.shape[1])
    if kernel.shape[1] == 0:
        return None, smallest
    if kernel.shape[1] > 1:
        raise DiracNIError(f"Expected a unique D-function, found {kernel.shape[1]}.")
    d = kernel[:, 0]
    return d / d[int(np.argmax(np.abs(d)))], smallest


def integrated_d_table(j, zeta, thetas, phis, tol=None):
    """d(theta, phi) on a grid, integrated from the reference angles without the spinor
    multiplet: d_phi d = -P1 d along the equator, then d_theta d = -(cos(phi) P2 - sin(phi) P3) d
    along each meridian. Keys are (theta, phi); values have shape (2j+1, 2)."""
    start, _ = reference_coefficients(j, zeta)
    if start is None:
        raise DiracNIError(f"j={j:g} zeta={zeta:+d}: the reference constraints only admit zero.")
    theta0, phi0 = REFERENCE_ANGLES
    low, high = min(thetas), max(thetas)
    if not low < theta0 < high:
        raise ValueError("The theta grid must straddle the equator.")
    p1, p2, p3 = _phase_matrices(j)
    n = len(p1)
    unit = np.eye(2)
    along = -np.kron(p1, unit)
    equator = integrate(LinearODESystem(2 * n, lambda t: along, name="D equator"), phi0, 2 * math.pi, start, tol=tol)
    table = {}
    for phi in phis:
        generator = -np.kron(math.cos(phi) * p2 - math.sin(phi) * p3, unit)
        meridian = LinearODESystem(2 * n, lambda t, a=generator: a, name="D meridian")
        origin = equator.values(phi)
        north = integrate(meridian, theta0, low, origin, tol=tol)
        south = integrate(meridian, theta0, high, origin, tol=tol)
        profile = JoinedProfile(north, south, theta0)
        for theta in thetas:
            table[(theta, phi)] = profile.values(theta).reshape(n, 2)
    return table


def omega_bridge(j, m, theta, phi, d, weights=None):
    """Fourier transform of D^j_{q zeta} against e^{iMq}, mapped back to the fixed frame;
    `d` holds the phase coefficients of D at (theta, phi)."""
    if abs(m) > j:
        logger.debug("M=%g lies outside [-j, j]", m)
    weights = bridge_weights(j, m) if weights is None else weights
    return _frame_rotation(theta, phi) @ (weights @ d)


def bridge_grid(size):
    margin = max(settings.SINGULAR_MARGIN, 0.1)
    return np.linspace(margin, math.pi - margin, size), np.linspace(0, 2 * math.pi, size, endpoint=False)


def bridge_match(j, m, zeta, size=20, cutoff=None, nodes=None, table=None):
    """Projective distance between the bridge and the spherical spinor over a size x size
    angular grid, with one complex factor fitted where the spinor peaks, and that factor.
    D comes from `integrated_d_table` unless a table on the same grid is passed.
    For |M| > j there is no spinor to match and the largest bridge magnitude is returned."""
    thetas, phis = bridge_grid(size)
    if table is None:
        table = integrated_d_table(j, zeta, thetas, phis)
    weights = bridge_weights(j, m, cutoff, nodes)
    inside = abs(m) <= j
    bridge, target = [], []
    for theta in thetas:
        for phi in phis:
            bridge.append(omega_bridge(j, m, theta, phi, table[(theta, phi)], weights))
            if inside:
                target.append(np.array(spherical_spinor(j, m, zeta, theta, phi), dtype=complex))
    bridge = np.array(bridge)
    if not inside:
        return max_abs(bridge), 0.0
    target = np.array(target)
    peak = int(np.argmax(np.sum(np.abs(target) ** 2, axis=1)))
    k = int(np.argmax(np.abs(target[peak])))
    factor = bridge[peak, k] / target[peak, k]
    return max_abs(bridge - factor * target) / max_abs(factor * target), abs(factor)


def angular_momentum_residual(field, j, points):
    """max |J^2 psi - j(j+1) psi| / max |psi| over the points."""
    worst, scale = 0.0, 0.0
    for point in points:
        value = field.values(point)
        worst = max(worst, max_abs(casimir_apply(field, point) - j * (j + 1) * value))
        scale = max(scale, max_abs(value))
    if scale == 0.0:
        return math.inf
    return worst / scale
