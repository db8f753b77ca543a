"""Lambda-representations: first-order operators in auxiliary variables q on Q."""
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from scipy.special import gammaln

from diracni.exceptions import QuadratureNotConverged
from diracni.utils import doubled, gen_rng, is_half_integer, max_abs
from jets.jet import cos, exp, sin
from liesym.algebras import CROSSED, ROTATIONS, central_extension
from liesym.quadrature import (
    cylinder_grid,
    grid_action,
    inner,
    plane_grid,
    until_converged,
)
from operators.checks import CheckResult, check_structure_constants
from operators.diffop import MatrixDiffOp, Term

logger = logging.getLogger(__name__)

ONE = np.eye(1, dtype=complex)
# relative change of the skew defect, under a larger cutoff, that counts as settled
MEASURE_SETTLED = 1e-6


@dataclass(frozen=True, eq=False)
class LambdaRep:
    name: str
    ops: tuple
    structure: object
    density: Callable
    domain: str
    params: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.ops)

    @property
    def nvars(self):
        return self.ops[0].nvars


def _op(terms, name, nvars=1):
    return MatrixDiffOp(nvars, terms, dim=1, name=name)


def so3_normalization(j):
    """(2j+1)! / (2^j (j!)^2), through gamma functions for half-integral j."""
    return float(np.exp(gammaln(2 * j + 2) - j * np.log(2) - 2 * gammaln(j + 1)))


def so3_lambda_rep(j):
    if j < 0 or not is_half_integer(j):
        raise ValidationError("j must be a non-negative integer or half-integer.")
    l1 = _op(
        [Term(lambda q: -1j * sin(q), (1,), ONE), Term(lambda q: 1j * j * cos(q), (0,), ONE)],
        "l1",
    )
    l2 = _op(
        [Term(lambda q: -1j * cos(q), (1,), ONE), Term(lambda q: -1j * j * sin(q), (0,), ONE)],
        "l2",
    )
    l3 = _op([Term(1, (1,), ONE)], "l3")
    normalization = so3_normalization(j)

    def density(q):
        # 1 + cos(q - qbar) = 1 + cosh(2 Im q)
        return normalization * (1 + np.cosh(2 * np.imag(q))) ** (-(j + 1))

    return LambdaRep(
        name="so3",
        ops=(l1, l2, l3),
        structure=ROTATIONS,
        density=density,
        domain="cylinder",
        params={"j": j},
    )


def e2c_lambda_rep(e, field_strength, measure_sign=-1):
    """Representation of the centrally extended e(2); `measure_sign` multiplies 2eH|q|^2."""
    eh = e * field_strength
    if not eh > 0:
        raise ValidationError("eH must be positive.")
    l0 = _op([Term(-1j * e, (0,), ONE)], "l0")
    l1 = _op([Term(-0.5j, (1,), ONE), Term(lambda q: 1j * eh * q, (0,), ONE)], "l1")
    l2 = _op([Term(0.5, (1,), ONE), Term(lambda q: eh * q, (0,), ONE)], "l2")
    l3 = _op([Term(lambda q: -1j * q, (1,), ONE)], "l3")

    def density(q):
        return np.exp(measure_sign * 2 * eh * np.abs(q) ** 2)

    return LambdaRep(
        name="e2c",
        ops=(l0, l1, l2, l3),
        structure=central_extension(field_strength),
        density=density,
        domain="plane",
        params={"e": e, "H": field_strength, "measure_sign": measure_sign},
    )


def crossed_lambda_rep():
    l1 = _op([Term(lambda q1, q2: 1j * q1 * exp(-q2), (0, 0), ONE)], "l1", nvars=2)
    l2 = _op([Term(1, (0, 1), ONE)], "l2", nvars=2)
    l3 = _op([Term(lambda q1, q2: 1j * exp(-q2), (0, 0), ONE)], "l3", nvars=2)
    l4 = _op([Term(1, (1, 0), ONE)], "l4", nvars=2)
    return LambdaRep(
        name="crossed",
        ops=(l1, l2, l3, l4),
        structure=CROSSED,
        density=lambda q1, q2: np.ones_like(q1),
        domain="real plane",
    )


def sample_points(rep, count, seed=None):
    rng = gen_rng(settings.DEFAULT_SEED if seed is None else seed)
    if rep.domain == "cylinder":
        return [[complex(x, y)] for x, y in zip(rng.uniform(0, 2 * np.pi, count), rng.uniform(-1, 1, count))]
    if rep.domain == "plane":
        return [[complex(x, y)] for x, y in rng.uniform(-1, 1, (count, 2))]
    return [list(p) for p in rng.uniform(-1, 1, (count, 2))]


def check_brackets(rep, trials=10, seed=None, tol=1e-10):
    """Bracket table of the l_a under both sign conventions; the closing one is reported."""
    points = sample_points(rep, trials, seed)
    same = check_structure_constants(
        rep.ops, rep.structure, trials=trials, seed=seed, points=points, tol=tol,
        name=f"{rep.name}: lambda brackets",
    )
    opposite = check_structure_constants(
        rep.ops, rep.structure.negated(), trials=trials, seed=seed, points=points, tol=tol,
        name=f"{rep.name}: lambda brackets (opposite sign)",
    )
    convention = "same" if same.residual <= opposite.residual else "opposite"
    result = same if convention == "same" else opposite
    result.name = f"{rep.name}: lambda brackets"
    result.details["convention"] = convention
    result.note = f"l_a close the table with the {convention} sign as X_a"
    return result


def _so3_functions(rep, grid):
    """Phases e^{iMq}, M = -j..j, on the grid."""
    j = rep.params["j"]
    (q,) = grid.coords
    out = []
    for twice_m in range(-doubled(j), doubled(j) + 1, 2):
        m = twice_m / 2
        value = np.exp(1j * m * q)
        out.append({(0,): value, (1,): 1j * m * value})
    return out


def _polynomials(rep, grid, degree=3):
    (q,) = grid.coords
    out = []
    for n in range(degree + 1):
        out.append({(0,): q**n, (1,): n * q ** (n - 1) if n else np.zeros_like(q)})
    return out


def _gaussians(rep, grid, count=4, seed=0):
    q1, q2 = grid.coords
    out = []
    for a, b in gen_rng(seed).uniform(-1, 1, (count, 2)):
        value = np.exp(-0.5 * (q1 - a) ** 2 - 0.5 * (q2 - b) ** 2)
        out.append({(0, 0): value, (1, 0): -(q1 - a) * value, (0, 1): -(q2 - b) * value})
    return out


def _grid_for(rep, cutoff, nodes):
    if rep.domain == "cylinder":
        return cylinder_grid(cutoff, nodes), _so3_functions
    if rep.domain == "plane":
        width = cutoff / np.sqrt(2 * rep.params["e"] * rep.params["H"])
        return plane_grid(width, nodes), _polynomials
    return plane_grid(cutoff, nodes, complex_plane=False), _gaussians


def adjoint_defects(rep, cutoff=None, nodes=None):
    """Per operator, the largest skew and Hermitian defects
    |<l f, g> + s <f, l g>| over orthonormalized test functions."""
    cutoff = settings.QUADRATURE_CUTOFF if cutoff is None else cutoff

    def compute(n):
        grid, functions = _grid_for(rep, cutoff, n)
        density = rep.density(*grid.coords)
        tests = functions(rep, grid)
        zero = (0,) * rep.nvars
        gram = np.array([[inner(grid, density, f[zero], g[zero]) for g in tests] for f in tests])
        # orthonormalize through the inverse Cholesky factor of the Gram matrix
        factor = np.linalg.inv(np.linalg.cholesky(gram))
        rows = []
        for op in rep.ops:
            images = [grid_action(op, grid.coords, f) for f in tests]
            forward = np.array([[inner(grid, density, a, g[zero]) for g in tests] for a in images])
            backward = np.array([[inner(grid, density, f[zero], b) for b in images] for f in tests])
            forward = factor @ forward @ factor.conj().T
            backward = factor @ backward @ factor.conj().T
            rows.append([max_abs(forward + backward), max_abs(forward - backward)])
        return np.array(rows)

    return until_converged(compute, nodes, label=f"{rep.name} adjoint defects")


def check_adjointness(rep, cutoff=None, nodes=None, tol=1e-6):
    """Skew-Hermiticity of every l_a (equivalently Hermiticity of -i l_a).

    An l_a that is Hermitian instead gets a diagnostic skew check and an asserted Hermitian one.
    """
    defects = adjoint_defects(rep, cutoff, nodes)
    results = []
    for op, (skew, hermitian) in zip(rep.ops, defects, strict=True):
        result = CheckResult(name=f"{rep.name}: {op.name} skew-Hermitian", residual=skew, tol=tol)
        results.append(result)
        if skew > tol and hermitian <= tol:
            result.diagnostic = True
            result.note = f"{op.name} is Hermitian for this measure (defect {hermitian:.1e})"
            results.append(CheckResult(name=f"{rep.name}: {op.name} Hermitian", residual=hermitian, tol=tol))
    return results


def measure_sign_defects(e, field_strength, cutoff=None, nodes=None):
    """Per sign s of exp(2 s eH |q|^2): the total skew-Hermitian defect of the l_a at the cutoff,
    and whether it settles when the cutoff grows by a quarter. None when the quadrature fails."""
    cutoff = settings.QUADRATURE_CUTOFF if cutoff is None else cutoff
    out = {}
    for sign in (1, -1):
        rep = e2c_lambda_rep(e, field_strength, measure_sign=sign)
        try:
            inside = float(np.sum(adjoint_defects(rep, cutoff, nodes)[:, 0]))
            outside = float(np.sum(adjoint_defects(rep, 1.25 * cutoff, nodes)[:, 0]))
        except (QuadratureNotConverged, np.linalg.LinAlgError) as exc:
            logger.debug("measure sign %+d: %s", sign, exc)
            out[sign] = None
            continue
        settled = abs(outside - inside) <= MEASURE_SETTLED * max(inside, 1.0)
        logger.debug("measure sign %+d: skew defect %.3e, settled %s", sign, inside, settled)
        out[sign] = (inside, settled)
    return out


def select_measure_sign(e, field_strength, cutoff=None, nodes=None):
    """The sign s in exp(2 s eH |q|^2) with the smallest settled skew-Hermitian defect,
    the defects of both signs and a note when the printed sign is rejected."""
    defects = measure_sign_defects(e, field_strength, cutoff, nodes)
    settled = {sign: entry[0] for sign, entry in defects.items() if entry is not None and entry[1]}
    if not settled:
        raise QuadratureNotConverged("No measure sign gives a settled skew-Hermitian defect.")
    chosen = min(settled, key=lambda sign: (settled[sign], -sign))
    if chosen > 0:
        return chosen, defects, None
    note = "density exp(+2eH|q|^2) diverges; exp(-2eH|q|^2) used"
    logger.warning(note)
    return chosen, defects, note


def so3_measure_total(j, cutoff=None, nodes=None):
    """Integral of the density over the truncated cylinder and the relative tail
    between cutoff and twice the cutoff."""
    cutoff = settings.QUADRATURE_CUTOFF if cutoff is None else cutoff
    rep = so3_lambda_rep(j)

    def total(width):
        def compute(n):
            grid = cylinder_grid(width, n)
            return np.sum(grid.weights * rep.density(grid.coords[0])).real

        return until_converged(compute, nodes, label="so3 measure")

    inside, doubled_width = total(cutoff), total(2 * cutoff)
    return inside, abs(doubled_width - inside) / inside


def so3_matrices(j, samples=16):
    """Matrices of l_a on span{e^{iMq}, |M| <= j}, read off by discrete Fourier projection
    of the operators applied on real sample points."""
    rep = so3_lambda_rep(j)
    q = 2 * np.pi * np.arange(samples) / samples
    ms = [k / 2 for k in range(-doubled(j), doubled(j) + 1, 2)]
    matrices = []
    for op in rep.ops:
        matrix = np.zeros((len(ms), len(ms)), dtype=complex)
        for col, m in enumerate(ms):
            value = np.exp(1j * m * q)
            image = grid_action(op, [q], {(0,): value, (1,): 1j * m * value})
            for row, mp in enumerate(ms):
                matrix[row, col] = np.mean(image * np.exp(-1j * mp * q))
        matrices.append(matrix)
    return ms, matrices


def casimir_residual(j):
    """|sum_a (-i l_a)^2 - j(j+1)| on the 2j+1 phases."""
    ms, matrices = so3_matrices(j)
    casimir = sum((-1j * m) @ (-1j * m) for m in matrices)
    return max_abs(casimir - j * (j + 1) * np.eye(len(ms)))
