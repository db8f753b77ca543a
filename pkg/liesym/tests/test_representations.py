import numpy as np
from django.core.exceptions import ValidationError

from diracni.tests import TestBase
from jets.fields import SpinorJetField
from jets.jet import exp
from liesym.representations import (
    adjoint_defects,
    casimir_residual,
    check_adjointness,
    check_brackets,
    crossed_lambda_rep,
    e2c_lambda_rep,
    measure_sign_defects,
    select_measure_sign,
    so3_lambda_rep,
    so3_matrices,
    so3_measure_total,
)
from operators.diffop import commutator_apply


class So3RepresentationTest(TestBase):
    def test_brackets(self):
        for j in (0.5, 1, 1.5, 2):
            result = check_brackets(so3_lambda_rep(j), trials=10, seed=0)
            self.assertSmall(result.residual, 1e-10)
            self.assertEqual(result.details["convention"], "same")

    def test_commutator_on_gaussian(self):
        l1, l2, l3 = so3_lambda_rep(1.5).ops
        field = SpinorJetField(rule=lambda q: [exp(-q * q)], nvars=1)
        point = [0.4 + 0.3j]
        self.assertAllClose(
            commutator_apply(l1, l2, field, point), l3.apply(field, point), atol=1e-10
        )

    def test_density_at_real_q(self):
        rep = so3_lambda_rep(1)
        self.assertAlmostEqual(rep.density(np.array(0.7 + 0j)), 0.75)

    def test_casimir(self):
        for j in (0.5, 1.5, 2.5):
            self.assertSmall(casimir_residual(j), 1e-12)

    def test_matrices(self):
        ms, (l1, _, l3) = so3_matrices(1.5)
        self.assertAllClose(np.diag(l3), [1j * m for m in ms], atol=1e-12)
        # l1 raises M by one with coefficient -i(M - j)/2
        self.assertAlmostEqual(l1[1, 0], -0.5j * (ms[0] - 1.5))

    def test_measure_is_integrable(self):
        for j in (1, 1.5, 2):
            total, tail = so3_measure_total(j, cutoff=8, nodes=100)
            self.assertGreater(total, 0)
            self.assertSmall(tail, 1e-10)
        _, tail = so3_measure_total(0.5, cutoff=8, nodes=100)
        self.assertSmall(tail, 1e-9)

    def test_hermiticity(self):
        for j in (0.5, 1.5):
            for result in check_adjointness(so3_lambda_rep(j), cutoff=12, nodes=100):
                self.assertSmall(result.residual, 1e-6)

    def test_negative_j(self):
        with self.assertRaises(ValidationError):
            so3_lambda_rep(-1)
        with self.assertRaises(ValidationError):
            so3_lambda_rep(0.3)


class CentralExtensionRepresentationTest(TestBase):
    def test_brackets(self):
        rep = e2c_lambda_rep(1.0, 0.8)
        result = check_brackets(rep, trials=10, seed=1)
        self.assertSmall(result.residual, 1e-10)

    def test_central_bracket_on_gaussian(self):
        rep = e2c_lambda_rep(1.0, 0.8)
        l0, l1, l2, l3 = rep.ops
        field = SpinorJetField(rule=lambda q: [exp(-0.5 * q * q)], nvars=1)
        point = [0.2 - 0.1j]
        self.assertAllClose(
            commutator_apply(l1, l2, field, point), 0.8 * l0.apply(field, point), atol=1e-10
        )
        self.assertAllClose(
            commutator_apply(l1, l3, field, point), -l2.apply(field, point), atol=1e-10
        )

    def test_multiplication_by_charge(self):
        l0 = e2c_lambda_rep(2.0, 0.5).ops[0]
        field = SpinorJetField(rule=lambda q: [exp(q)], nvars=1)
        self.assertAllClose(l0.apply(field, [0.3]), [-2j * np.exp(0.3)])

    def test_measure_sign(self):
        sign, defects, note = select_measure_sign(1.0, 1.0, nodes=64)
        self.assertEqual(sign, -1)
        self.assertIn("diverges", note)
        self.assertEqual(set(defects), {1, -1})
        self.assertTrue(defects[-1][1])
        self.assertTrue(defects[1] is None or not defects[1][1])

    def test_measure_sign_defects_are_skew_defects(self):
        defects = measure_sign_defects(1.0, 1.0, nodes=64)
        skew = adjoint_defects(e2c_lambda_rep(1.0, 1.0, measure_sign=-1), nodes=64)[:, 0]
        self.assertAlmostEqual(defects[-1][0], float(np.sum(skew)), places=8)

    def test_adjointness(self):
        results = {r.name: r for r in check_adjointness(e2c_lambda_rep(1.0, 1.0), nodes=64)}
        self.assertTrue(results["e2c: l0 skew-Hermitian"].passed)
        self.assertTrue(results["e2c: l3 skew-Hermitian"].passed)
        self.assertTrue(results["e2c: l1 skew-Hermitian"].diagnostic)
        self.assertTrue(results["e2c: l2 skew-Hermitian"].diagnostic)
        self.assertTrue(results["e2c: l1 Hermitian"].passed)
        self.assertTrue(results["e2c: l2 Hermitian"].passed)
        self.assertNotIn("e2c: l0 Hermitian", results)

    def test_rejects_non_positive_field(self):
        with self.assertRaises(ValidationError):
            e2c_lambda_rep(1.0, -1.0)


class CrossedRepresentationTest(TestBase):
    def test_brackets(self):
        result = check_brackets(crossed_lambda_rep(), trials=10, seed=2)
        self.assertSmall(result.residual, 1e-10)
        self.assertEqual(result.details["convention"], "same")

    def test_l3_is_multiplication(self):
        l3 = crossed_lambda_rep().ops[2]
        field = SpinorJetField(rule=lambda q1, q2: [q1 + 2.0], nvars=2)
        self.assertAllClose(l3.apply(field, [0.5, 0.3]), [1j * np.exp(-0.3) * 2.5])

    def test_skew_hermitian(self):
        for result in check_adjointness(crossed_lambda_rep(), nodes=100):
            self.assertSmall(result.residual, 1e-6)
