import numpy as np

from diracni.exceptions import JetOrderError
from diracni.tests import TestBase
from gamma.matrices import standard_gammas
from jets.fields import SpinorJetField, coordinate_jets, random_test_spinor
from jets.jet import exp
from operators.checks import StructureConstants, check_structure_constants, check_symmetry
from operators.diffop import MatrixDiffOp, Term, commutator_apply

ANGULAR = StructureConstants(
    ["Ax", "Ay", "Az"],
    {("Ax", "Ay"): {"Az": -1}, ("Ay", "Az"): {"Ax": -1}, ("Az", "Ax"): {"Ay": -1}},
)
BOX = [(-1.0, 1.0)] * 3


def angular_ops(dim=1):
    one = np.eye(dim)
    # x_b d_c - x_c d_b for the three cyclic (b, c)
    ops = []
    for b, c in [(1, 2), (2, 0), (0, 1)]:
        ops.append(
            MatrixDiffOp(
                3,
                [
                    Term(lambda *x, b=b: x[b], tuple(int(i == c) for i in range(3)), one),
                    Term(lambda *x, c=c: -x[c], tuple(int(i == b) for i in range(3)), one),
                ],
                dim=dim,
            )
        )
    return ops


class ApplyTest(TestBase):
    def test_identity(self):
        psi = random_test_spinor(0, nvars=3)
        op = MatrixDiffOp.multiplication(3)
        point = [0.1, 0.2, 0.3]
        self.assertAllClose(op.apply(psi, point), psi.values(point))

    def test_phi_derivative_of_phase(self):
        spinor = np.array([1.0, 2.0j, -0.5, 0.3])
        field = SpinorJetField(
            rule=lambda theta, phi: [c * exp(1.5j * phi) for c in spinor], nvars=2
        )
        op = MatrixDiffOp.partial(2, 1)
        point = [0.7, 0.4]
        self.assertAllClose(op.apply(field, point), 1.5j * field.values(point))

    def test_linearity(self):
        first, second = random_test_spinor(1), random_test_spinor(2)
        gs = standard_gammas()
        op = MatrixDiffOp(
            4,
            [
                Term(lambda t, x, y, z: x * t, (1, 0, 0, 0), gs.g(2)),
                Term(2.0, (0, 0, 0, 1), gs.g(1)),
            ],
        )
        alpha, beta = 0.3 - 0.2j, -1.1 + 0.5j
        combined = SpinorJetField(
            rule=lambda *x: [alpha * a + beta * b for a, b in zip(first(*x), second(*x))],
            nvars=4,
        )
        point = [0.2, -0.4, 0.5, 0.1]
        self.assertAllClose(
            op.apply(combined, point),
            alpha * op.apply(first, point) + beta * op.apply(second, point),
            atol=1e-12,
        )

    def test_constant_terms_merge(self):
        gs = standard_gammas()
        op = MatrixDiffOp(
            4, [Term(1.0, (1, 0, 0, 0), gs.g(1)), Term(2.0, (1, 0, 0, 0), gs.g(1))]
        )
        self.assertEqual(len(op.terms), 1)
        self.assertAllClose(op.terms[0].matrix, 3 * gs.g(1))

    def test_insufficient_order(self):
        op = MatrixDiffOp.partial(3, 0)
        psi = random_test_spinor(0, nvars=3).jets([0.1, 0.2, 0.3], 0)
        with self.assertRaises(JetOrderError):
            op.apply_jets(coordinate_jets([0.1, 0.2, 0.3], 0), psi)

    def test_operator_arithmetic(self):
        dx = MatrixDiffOp.partial(3, 0)
        field = random_test_spinor(4, nvars=3)
        point = [0.3, 0.2, 0.1]
        self.assertAllClose((dx - dx).apply(field, point), np.zeros(4))
        self.assertAllClose((2 * dx).apply(field, point), 2 * dx.apply(field, point))
        self.assertAllClose(
            dx.shifted(1.5).apply(field, point),
            dx.apply(field, point) - 1.5 * field.values(point),
        )


class CommutatorTest(TestBase):
    def test_self_commutator_vanishes(self):
        op = angular_ops(4)[0]
        psi = random_test_spinor(0, nvars=3)
        self.assertAllClose(commutator_apply(op, op, psi, [0.2, 0.3, 0.4]), np.zeros(4))

    def test_antisymmetry(self):
        a, b, _ = angular_ops(4)
        psi = random_test_spinor(5, nvars=3)
        point = [0.4, -0.1, 0.3]
        self.assertAllClose(
            commutator_apply(a, b, psi, point), -commutator_apply(b, a, psi, point), atol=1e-12
        )

    def test_angular_momentum_table(self):
        result = check_structure_constants(angular_ops(), ANGULAR, trials=20, seed=0, box=BOX)
        self.assertSmall(result.residual, 1e-9)
        self.assertTrue(result.passed)

    def test_wrong_table_is_detected(self):
        result = check_structure_constants(
            angular_ops(), ANGULAR.negated(), trials=5, seed=0, box=BOX
        )
        self.assertGreater(result.residual, 1e-3)
        self.assertFalse(result.passed)

    def test_points_must_match_trials(self):
        points = [[0.1, 0.2, 0.3]] * 3
        with self.assertRaises(ValueError):
            check_symmetry(MatrixDiffOp.partial(3, 0), MatrixDiffOp.partial(3, 1), trials=5, points=points)
        with self.assertRaises(ValueError):
            check_structure_constants(angular_ops(), ANGULAR, trials=5, points=points)
        result = check_symmetry(MatrixDiffOp.partial(3, 0), MatrixDiffOp.partial(3, 1), trials=3, points=points)
        self.assertSmall(result.residual, 1e-12)

    def test_commuting_translations(self):
        result = check_symmetry(
            MatrixDiffOp.partial(3, 0), MatrixDiffOp.partial(3, 1), trials=5, seed=0, box=BOX
        )
        self.assertSmall(result.residual, 1e-12)


class StructureConstantsTest(TestBase):
    def test_antisymmetry_and_jacobi(self):
        self.assertEqual(ANGULAR.antisymmetry_residual(), 0.0)
        self.assertSmall(ANGULAR.jacobi_residual(), 1e-12)

    def test_index_of_rotations(self):
        self.assertEqual(ANGULAR.index(), 1)
        self.assertEqual(ANGULAR.reduced_dimension(), 1)

    def test_index_of_central_extension(self):
        extended = StructureConstants(
            ["X0", "X1", "X2", "X3"],
            {("X1", "X3"): {"X2": -1}, ("X2", "X3"): {"X1": 1}, ("X1", "X2"): {"X0": 0.7}},
        )
        self.assertSmall(extended.jacobi_residual(), 1e-12)
        self.assertEqual(extended.index(), 2)
        self.assertEqual(extended.reduced_dimension(), 1)

    def test_index_of_solvable_algebra(self):
        solvable = StructureConstants(
            ["X1", "X2", "X3", "X4"],
            {("X1", "X2"): {"X1": 1}, ("X1", "X4"): {"X3": 1}, ("X2", "X3"): {"X3": -1}},
        )
        self.assertEqual(solvable.index(), 0)
        self.assertEqual(solvable.reduced_dimension(), 2)
