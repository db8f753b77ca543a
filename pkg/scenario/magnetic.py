"""Dirac equation in a constant magnetic field along z with an electric potential V(z)."""
import logging
import math

import numpy as np
from django.core.exceptions import ValidationError

from diracni.utils import max_abs
from gamma.matrices import IDENTITY4, standard_gammas
from jets.jet import exp, power, value_of
from liesym.representations import e2c_lambda_rep
from ode.solver import integrate
from ode.systems import magnetic_system
from operators.diffop import MatrixDiffOp, Term
from special.parabolic import parabolic_cylinder_D

from .specs import SolutionField

logger = logging.getLogger(__name__)

BRANCH_MARGIN = 1e-8


def magnetic_hamiltonian(spec, longitudinal=True):
    """-i a1 d_x - a2 (i d_y + eH x) - i a3 d_z - eV(z) + beta m; without the z terms,
    mass and potential when `longitudinal` is false."""
    gammas = standard_gammas()
    a1, a2, a3 = gammas.alpha
    eh = spec.eH
    terms = [
        Term(-1j, (1, 0, 0), a1),
        Term(-1j, (0, 1, 0), a2),
        Term(lambda x, y, z: -eh * x, (0, 0, 0), a2),
    ]
    if longitudinal:
        v = spec.potential
        terms += [
            Term(-1j, (0, 0, 1), a3),
            Term(lambda x, y, z: -v(z), (0, 0, 0), IDENTITY4),
            Term(spec.mass, (0, 0, 0), gammas.beta),
        ]
    return MatrixDiffOp(3, terms, name="H")


def magnetic_generators(spec):
    """X0 .. X3, closing the central extension of e(2) by X0."""
    e, eh = spec.charge, spec.eH
    sigma3 = standard_gammas().sigma[2]
    x0 = MatrixDiffOp.multiplication(3, 1j * e, name="X0")
    x1 = MatrixDiffOp(
        3,
        [Term(1, (1, 0, 0), IDENTITY4), Term(lambda x, y, z: -1j * eh * y, (0, 0, 0), IDENTITY4)],
        name="X1",
    )
    x2 = MatrixDiffOp.partial(3, 1, name="X2")
    x3 = MatrixDiffOp(
        3,
        [
            Term(lambda x, y, z: y, (1, 0, 0), IDENTITY4),
            Term(lambda x, y, z: -x, (0, 1, 0), IDENTITY4),
            Term(-0.5j, (0, 0, 0), sigma3),
            Term(lambda x, y, z: 0.5j * eh * (x * x - y * y), (0, 0, 0), IDENTITY4),
        ],
        name="X3",
    )
    return x0, x1, x2, x3


def magnetic_spin_operator(spec):
    """beta (S2 d_x - S1 (d_y - i eH x))."""
    gammas = standard_gammas()
    s1, s2, _ = gammas.sigma
    beta, eh = gammas.beta, spec.eH
    return MatrixDiffOp(
        3,
        [
            Term(1, (1, 0, 0), beta @ s2),
            Term(-1, (0, 1, 0), beta @ s1),
            Term(lambda x, y, z: 1j * eh * x, (0, 0, 0), beta @ s1),
        ],
        name="S",
    )


def axial_profile(spec, n, zeta, start=(1.0, 0.5), tol=None):
    low, high = spec.box[2]
    system = magnetic_system(spec.energy, spec.mass, spec.eH, n, zeta, spec.potential)
    return integrate(system, low - 0.1, high + 0.1, start, tol=tol)


def landau_coefficient(n, zeta, printed=False):
    """Weight of D_k in the first and third components; the printed sign is -i zeta sqrt(2)/n."""
    sign = -1 if printed else 1
    return sign * 1j * zeta * math.sqrt(2) / n


def sov_basis_magnetic(spec, n, p, zeta, profile, printed=False):
    if not n >= 1:
        raise ValidationError("The separated magnetic basis needs n >= 1.")
    if zeta not in (1, -1):
        raise ValidationError("zeta must be +1 or -1.")
    eh = spec.eH
    k = -0.5 * n * n
    c1 = landau_coefficient(n, zeta, printed)
    f, g = profile.component(0), profile.component(1)
    scale = math.sqrt(2 / eh)

    def rule(x, y, z):
        xi = scale * (eh * x - p)
        phase = exp(1j * p * y)
        upper, lower = parabolic_cylinder_D(k, xi), parabolic_cylinder_D(k - 1, xi)
        fz, gz = f(z), g(z)
        return [
            c1 * upper * fz * phase,
            lower * fz * phase,
            c1 * upper * gz * phase,
            -lower * gz * phase,
        ]

    labels = {"n": n, "p": p, "zeta": zeta, "k": k, "system": profile.system}
    name = f"SoV n={n} p={p:g} zeta={zeta}"
    return SolutionField(rule, 3, name=name, provenance="SoV", labels=labels)


def branch_argument(q, x, y):
    """w = q + (i/2)(x + iy); exp(q') = w^{-1/2}."""
    return q + 0.5j * (x + 1j * y)


def ni_d_function(eh, q, zeta, x, y):
    w = branch_argument(q, x, y)
    if abs(value_of(w)) < BRANCH_MARGIN:
        raise ValidationError(f"q={complex(value_of(q)):g} hits the branch point at this (x, y).")
    envelope = exp(eh * (0.25 * (x + 1j * y) * (x + 1j * y) - 1j * q * (x - 1j * y) + 0.5 * y * y))
    return [envelope * power(w, -0.5), envelope * 2 * math.sqrt(eh) * zeta * power(w, 0.5)]


def ni_basis_magnetic(spec, q, zeta, profile):
    """(D_{q,zeta} f, D_{q,-zeta} g); with q=None, q is a fourth (complex) variable."""
    if zeta not in (1, -1):
        raise ValidationError("zeta must be +1 or -1.")
    if profile.system.params.get("n") != 1:
        raise ValidationError("The noncommutative magnetic basis uses n = 1 profiles.")
    eh = spec.eH
    f, g = profile.component(0), profile.component(1)

    def at(x, y, z, qq):
        upper = ni_d_function(eh, qq, zeta, x, y)
        lower = ni_d_function(eh, qq, -zeta, x, y)
        fz, gz = f(z), g(z)
        return [upper[0] * fz, upper[1] * fz, lower[0] * gz, lower[1] * gz]

    labels = {"q": q, "zeta": zeta, "system": profile.system}
    if q is None:
        return SolutionField(at, 4, name=f"NI zeta={zeta}", provenance="NI", labels=labels)
    return SolutionField(
        lambda x, y, z: at(x, y, z, q), 3, name=f"NI q={q} zeta={zeta}", provenance="NI", labels=labels
    )


def ni_constraint_operators(spec, measure_sign=-1):
    """X_a + l_a on functions of (x, y, z, q)."""
    lops = e2c_lambda_rep(spec.charge, spec.field_strength, measure_sign).ops
    out = []
    for x, l in zip(magnetic_generators(spec), lops):
        lifted = x.extended(4, (0, 1, 2)) + l.extended(4, (3,), dim=4)
        out.append(lifted.named(f"{x.name} + {l.name}"))
    return out


def printed_reduced_operators(spec):
    """The constant-coefficient transverse part of the reduced Hamiltonian and the
    reduced spin operator, as printed."""
    gammas = standard_gammas()
    a1, a2, _ = gammas.alpha
    s1, s2, _ = gammas.sigma
    eh = spec.eH
    h_perp = (0.25 - eh) * a1 + 1j * (0.25 + eh) * a2
    s_reduced = gammas.beta @ (eh * (s1 - 1j * s2) + 0.25 * (s1 + 1j * s2))
    return h_perp, s_reduced


def _ansatz_columns(eh, q):
    """The four columns of exp(...)(cosh q' + S3 sinh q'), i.e. psi for Phi = e_k."""
    columns = []
    for k in range(4):

        def rule(x, y, z, k=k):
            w = branch_argument(q, x, y)
            envelope = exp(eh * (0.25 * (x + 1j * y) * (x + 1j * y) - 1j * q * (x - 1j * y) + 0.5 * y * y))
            # S3 = diag(1, -1, 1, -1): cosh q' +- sinh q' = exp(+-q')
            factor = power(w, -0.5) if k % 2 == 0 else power(w, 0.5)
            return [envelope * factor if i == k else 0.0 * x for i in range(4)]

        columns.append(SolutionField(rule, 3))
    return columns


def derived_reduced_operators(spec, q, point):
    """P^{-1} H_perp P and P^{-1} S P at `point` for the ansatz matrix P."""
    columns = _ansatz_columns(spec.eH, q)
    p = np.column_stack([c.values(point) for c in columns])
    h_perp = magnetic_hamiltonian(spec, longitudinal=False)
    spin = magnetic_spin_operator(spec)
    h_image = np.column_stack([h_perp.apply(c, point) for c in columns])
    s_image = np.column_stack([spin.apply(c, point) for c in columns])
    inverse = np.linalg.inv(p)
    return inverse @ h_image, inverse @ s_image


def reduced_operator_mismatch(spec, q, points):
    """Largest distance between the derived and printed reduced operators."""
    h_printed, s_printed = printed_reduced_operators(spec)
    h_worst, s_worst = 0.0, 0.0
    for point in points:
        h_derived, s_derived = derived_reduced_operators(spec, q, point)
        h_worst = max(h_worst, max_abs(h_derived - h_printed))
        s_worst = max(s_worst, max_abs(s_derived - s_printed))
    logger.debug("reduced operators, printed vs derived: H %.3e, S %.3e", h_worst, s_worst)
    return h_worst, s_worst
