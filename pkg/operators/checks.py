"""Bracket-table and symmetry checks for families of differential operators."""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from diracni.utils import gen_random_points, gen_rng, max_abs
from jets.fields import random_test_spinor
from operators.diffop import commutator_apply

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    diagnostic: bool = False
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)

    def as_dict(self):
        return {
            "name": self.name,
            "residual": float(self.residual),
            "tol": float(self.tol),
            "pass": self.passed,
            "diagnostic": self.diagnostic,
            "note": self.note,
        }


class StructureConstants:
    """c[a, b, k] with [X_a, X_b] = c_ab^k X_k."""

    def __init__(self, labels, brackets):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        index = {label: i for i, label in enumerate(self.labels)}
        self.c = np.zeros((self.dim, self.dim, self.dim))
        for (a, b), image in brackets.items():
            for k, value in image.items():
                self.c[index[a], index[b], index[k]] += value
                self.c[index[b], index[a], index[k]] -= value

    @classmethod
    def from_array(cls, labels, c):
        constants = cls(labels, {})
        constants.c = np.array(c, dtype=float)
        return constants

    def negated(self):
        return StructureConstants.from_array(self.labels, -self.c)

    def antisymmetry_residual(self):
        return max_abs(self.c + np.transpose(self.c, (1, 0, 2)))

    def jacobi_residual(self):
        # sum over cyclic (a, b, d) of c_ab^l c_ld^k
        first = np.einsum("abl,ldk->abdk", self.c, self.c)
        cyclic = first + np.transpose(first, (1, 2, 0, 3)) + np.transpose(first, (2, 0, 1, 3))
        return max_abs(cyclic)

    def index(self, samples=5, seed=0):
        """ind g = dim g - max rank of B_f(a, b) = f([X_a, X_b]) over generic covectors f."""
        rng = gen_rng(seed)
        rank = 0
        for f in rng.normal(size=(samples, self.dim)):
            form = np.einsum("abk,k->ab", self.c, f)
            rank = max(rank, int(np.linalg.matrix_rank(form, tol=1e-9)))
        return self.dim - rank

    def reduced_dimension(self, samples=5, seed=0):
        """Number of auxiliary variables (dim g - ind g) / 2 carried by a lambda-representation."""
        return (self.dim - self.index(samples, seed)) // 2

    def image(self, a, b):
        return self.c[a, b]


def _trial_fields(seed, trials, nvars, components):
    return [random_test_spinor(seed + t, nvars=nvars, components=components) for t in range(trials)]


def _trial_points(seed, trials, box, points):
    if points is not None:
        if len(points) != trials:
            raise ValueError(f"Got {len(points)} points for {trials} trials.")
        return np.asarray(points)
    return gen_random_points(gen_rng(seed), box, trials)


def check_structure_constants(
    ops, expected, trials=20, seed=None, box=None, points=None, name="structure", tol=None
):
    """Largest |[X_a, X_b] psi - c_ab^k X_k psi| over seeded fields and points."""
    if trials < 1:
        raise ValueError("At least one trial is required.")
    seed = settings.DEFAULT_SEED if seed is None else seed
    tol = settings.ALGEBRA_TOL if tol is None else tol
    nvars, dim = ops[0].nvars, ops[0].dim
    fields = _trial_fields(seed, trials, nvars, dim)
    sites = _trial_points(seed, trials, box, points)
    worst = 0.0
    for psi, point in zip(fields, sites, strict=True):
        values = [op.apply(psi, point) for op in ops]
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                lhs = commutator_apply(ops[a], ops[b], psi, point)
                rhs = sum(expected.c[a, b, k] * values[k] for k in range(len(ops)))
                worst = max(worst, max_abs(lhs - rhs))
    logger.debug("%s: bracket residual %.3e over %d trials", name, worst, trials)
    return CheckResult(name=name, residual=worst, tol=tol)


def check_symmetry(h, s, trials=20, seed=None, box=None, points=None, name="symmetry", tol=None):
    """Largest |[h, s] psi| over seeded fields and points."""
    if trials < 1:
        raise ValueError("At least one trial is required.")
    seed = settings.DEFAULT_SEED if seed is None else seed
    tol = settings.ALGEBRA_TOL if tol is None else tol
    fields = _trial_fields(seed, trials, h.nvars, h.dim)
    sites = _trial_points(seed, trials, box, points)
    worst = 0.0
    for psi, point in zip(fields, sites, strict=True):
        worst = max(worst, max_abs(commutator_apply(h, s, psi, point)))
    logger.debug("%s: commutator residual %.3e over %d trials", name, worst, trials)
    return CheckResult(name=name, residual=worst, tol=tol)


def eigen_residual(op, field, eigenvalue, points):
    """max |op psi - eigenvalue psi| / max |psi| over the points."""
    worst, scale = 0.0, 0.0
    for point in points:
        value = field.values(point)
        image = op.apply(field, point)
        worst = max(worst, max_abs(image - eigenvalue * value))
        scale = max(scale, max_abs(value))
    if scale == 0.0:
        return float("inf")
    return worst / scale
