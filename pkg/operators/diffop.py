"""Matrix-valued linear differential operators acting on jet fields."""
import logging
import numbers
from dataclasses import dataclass
from typing import Any

import numpy as np

from diracni.exceptions import JetOrderError
from jets.fields import as_jet, coordinate_jets, stack, unstack
from jets.jet import MAX_ORDER, JetValue

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Term:
    """coefficient(x) * matrix * d^multi_index, with `coefficient` a number or a
    rule on coordinates that accepts jets."""

    coefficient: Any
    multi_index: tuple
    matrix: np.ndarray

    @property
    def degree(self):
        return sum(self.multi_index)

    @property
    def is_constant(self):
        return isinstance(self.coefficient, numbers.Number)

    def evaluate_coefficient(self, coords):
        if self.is_constant:
            return self.coefficient
        return self.coefficient(*coords)


class MatrixDiffOp:
    def __init__(self, nvars, terms, dim=4, name=""):
        self.nvars = nvars
        self.dim = dim
        self.name = name
        for term in terms:
            if len(term.multi_index) != nvars:
                raise ValueError(f"Multi-index {term.multi_index} does not match {nvars} variables.")
            if term.matrix.shape != (dim, dim):
                raise ValueError(f"Term matrix must be {dim}x{dim}.")
        self.terms = tuple(self._canonical(terms))

    @staticmethod
    def _canonical(terms):
        merged = {}
        rest = []
        for term in terms:
            if term.is_constant:
                key = term.multi_index
                previous = merged.get(key, 0)
                merged[key] = previous + term.coefficient * np.asarray(term.matrix, dtype=complex)
            else:
                rest.append(term)
        constant = [
            Term(1, multi_index, matrix)
            for multi_index, matrix in sorted(merged.items())
            if np.any(matrix != 0)
        ]
        return constant + rest

    @property
    def order(self):
        return max((term.degree for term in self.terms), default=0)

    def _unit(self, var):
        unit = [0] * self.nvars
        if var is not None:
            unit[var] = 1
        return tuple(unit)

    def _identity(self):
        return np.eye(self.dim, dtype=complex)

    @classmethod
    def multiplication(cls, nvars, coefficient=1, matrix=None, dim=4, name=""):
        matrix = np.eye(dim, dtype=complex) if matrix is None else np.asarray(matrix)
        return cls(nvars, [Term(coefficient, (0,) * nvars, matrix)], dim=dim, name=name)

    @classmethod
    def partial(cls, nvars, var, coefficient=1, matrix=None, dim=4, name=""):
        matrix = np.eye(dim, dtype=complex) if matrix is None else np.asarray(matrix)
        unit = [0] * nvars
        unit[var] = 1
        return cls(nvars, [Term(coefficient, tuple(unit), matrix)], dim=dim, name=name)

    @classmethod
    def zero(cls, nvars, dim=4):
        return cls(nvars, [], dim=dim)

    def _check_compatible(self, other):
        if (self.nvars, self.dim) != (other.nvars, other.dim):
            raise ValueError("Operators act on different spaces.")

    def __add__(self, other):
        if not isinstance(other, MatrixDiffOp):
            return NotImplemented
        self._check_compatible(other)
        return MatrixDiffOp(self.nvars, self.terms + other.terms, dim=self.dim)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        if not isinstance(other, MatrixDiffOp):
            return NotImplemented
        return self + (-other)

    def __rmul__(self, scalar):
        if isinstance(scalar, numbers.Number):
            return self.scaled(scalar)
        return NotImplemented

    def scaled(self, scalar):
        return MatrixDiffOp(
            self.nvars,
            [_scale_term(term, scalar) for term in self.terms],
            dim=self.dim,
            name=self.name,
        )

    def left_multiply(self, matrix):
        """The operator M * self for a constant matrix M."""
        matrix = np.asarray(matrix, dtype=complex)
        return MatrixDiffOp(
            self.nvars,
            [Term(t.coefficient, t.multi_index, matrix @ t.matrix) for t in self.terms],
            dim=self.dim,
            name=self.name,
        )

    def shifted(self, scalar):
        """self - scalar * I."""
        return self - MatrixDiffOp.multiplication(self.nvars, scalar, dim=self.dim)

    def extended(self, nvars, positions, dim=None):
        """The same operator on `nvars` variables, variable i of self sitting at
        positions[i]; scalar operators are promoted to `dim` x `dim` blocks."""
        dim = self.dim if dim is None else dim
        if self.dim != dim and self.dim != 1:
            raise ValueError("Only scalar operators can be promoted.")
        terms = []
        for term in self.terms:
            multi_index = [0] * nvars
            for var, count in enumerate(term.multi_index):
                multi_index[positions[var]] = count
            matrix = term.matrix if self.dim == dim else term.matrix[0, 0] * np.eye(dim, dtype=complex)
            coefficient = term.coefficient
            if not term.is_constant:
                coefficient = _restricted(term.coefficient, positions)
            terms.append(Term(coefficient, tuple(multi_index), matrix))
        return MatrixDiffOp(nvars, terms, dim=dim, name=self.name)

    def named(self, name):
        op = MatrixDiffOp(self.nvars, self.terms, dim=self.dim, name=name)
        return op

    def apply_jets(self, coords, psi):
        """Apply to jets of the operand, returning jets of order reduced by self.order."""
        if not psi:
            raise ValueError("Empty operand.")
        space = psi[0].space
        target = space.order - self.order
        if target < 0:
            raise JetOrderError(
                f"Operand jets of order {space.order} cannot feed an operator of order {self.order}."
            )
        coeffs = stack([as_jet(c, space) for c in psi])
        low_coords = [c.truncate(target) if isinstance(c, JetValue) else c for c in coords]
        low_space = low_coords[0].space if isinstance(low_coords[0], JetValue) else None
        result = np.zeros((self.dim, low_space.size), dtype=complex)
        for term in self.terms:
            derived, derived_space = coeffs, space
            for var, count in enumerate(term.multi_index):
                for _ in range(count):
                    derived = derived_space.derivative(derived, var)
                    derived_space = derived_space.lower()
            derived = derived_space.truncate(derived, target)
            image = term.matrix @ derived
            coefficient = term.evaluate_coefficient(low_coords)
            if isinstance(coefficient, JetValue):
                result += low_space.multiply(coefficient.truncate(target).coeffs, image)
            else:
                result += coefficient * image
        return unstack(low_space, result)

    def apply(self, field, point):
        coords = coordinate_jets(point, self.order)
        psi = field.jets(point, self.order)
        return np.array([jet.value for jet in self.apply_jets(coords, psi)])

    def __repr__(self):
        label = self.name or "MatrixDiffOp"
        return f"<{label}: order {self.order}, {len(self.terms)} terms>"


def _scale_term(term, scalar):
    if term.is_constant:
        return Term(term.coefficient * scalar, term.multi_index, term.matrix)
    rule = term.coefficient
    return Term(lambda *x: scalar * rule(*x), term.multi_index, term.matrix)


def apply(op, field, point):
    return op.apply(field, point)


def commutator_apply(a, b, field, point):
    """[a, b] psi at point, by applying each operator to the jet of the other's image."""
    order = a.order + b.order
    if order > MAX_ORDER:
        raise JetOrderError(f"Commutator needs jets of order {order}.")
    coords = coordinate_jets(point, order)
    psi = field.jets(point, order)
    ab = a.apply_jets(coords, b.apply_jets(coords, psi))
    ba = b.apply_jets(coords, a.apply_jets(coords, psi))
    return np.array([x.value - y.value for x, y in zip(ab, ba)])


def product_apply(ops, field, point):
    """(ops[0] ops[1] ... ops[-1]) psi at point."""
    order = sum(op.order for op in ops)
    if order > MAX_ORDER:
        raise JetOrderError(f"Product needs jets of order {order}.")
    coords = coordinate_jets(point, order)
    image = field.jets(point, order)
    for op in reversed(ops):
        image = op.apply_jets(coords, image)
    return np.array([jet.value for jet in image])


def _restricted(rule, positions):
    return lambda *x: rule(*[x[p] for p in positions])
