import math

from django.core.exceptions import ValidationError

from diracni.tests import TestBase
from diracni.utils import max_abs
from liesym.algebras import central_extension
from ode.potentials import linear_potential
from operators.checks import check_structure_constants, check_symmetry, eigen_residual
from scenario.magnetic import (
    axial_profile,
    magnetic_generators,
    magnetic_hamiltonian,
    magnetic_spin_operator,
    ni_basis_magnetic,
    ni_constraint_operators,
    ni_d_function,
    reduced_operator_mismatch,
    sov_basis_magnetic,
)
from scenario.specs import ScenarioSpec

Q = 1.0 + 0.5j


class MagneticOperatorTest(TestBase):
    def setUp(self):
        super().setUp()
        self.spec = ScenarioSpec(
            "magnetic", energy=1.5, field_strength=1.3, charge=0.8, potential=linear_potential(0.2, 0.1)
        )

    def test_generators_close_central_extension(self):
        result = check_structure_constants(
            magnetic_generators(self.spec), central_extension(1.3), trials=5, box=self.spec.box
        )
        self.assertSmall(result.residual, 1e-9)

    def test_symmetries(self):
        h, s = magnetic_hamiltonian(self.spec), magnetic_spin_operator(self.spec)
        for op in magnetic_generators(self.spec):
            self.assertSmall(check_symmetry(h, op, trials=4, box=self.spec.box).residual, 1e-8)
            self.assertSmall(check_symmetry(s, op, trials=4, box=self.spec.box).residual, 1e-8)
        self.assertSmall(check_symmetry(h, s, trials=4, box=self.spec.box).residual, 1e-8)

    def test_non_positive_field_rejected(self):
        with self.assertRaises(ValidationError):
            ScenarioSpec("magnetic", field_strength=-1.0)


class SeparatedBasisTest(TestBase):
    def setUp(self):
        super().setUp()
        self.spec = ScenarioSpec("magnetic", energy=1.5, potential=linear_potential(0.2, 0.1))
        self.points = self.spec.random_points(6, seed=5)

    def test_eigenrelations(self):
        for n, p, zeta in ((1, 0.0, 1), (2, 0.3, -1)):
            profile = axial_profile(self.spec, n, zeta)
            field = sov_basis_magnetic(self.spec, n, p, zeta, profile)
            x2 = magnetic_generators(self.spec)[2]
            spin = magnetic_spin_operator(self.spec)
            self.assertSmall(eigen_residual(x2, field, 1j * p, self.points), 1e-8)
            self.assertSmall(eigen_residual(spin, field, zeta * n * math.sqrt(self.spec.eH), self.points), 1e-7)
            h = magnetic_hamiltonian(self.spec)
            self.assertSmall(eigen_residual(h, field, self.spec.energy, self.points), 1e-6)

    def test_printed_sign_breaks_spin_eigenrelation(self):
        profile = axial_profile(self.spec, 1, 1)
        field = sov_basis_magnetic(self.spec, 1, 0.0, 1, profile, printed=True)
        spin = magnetic_spin_operator(self.spec)
        self.assertGreater(eigen_residual(spin, field, math.sqrt(self.spec.eH), self.points), 1e-3)

    def test_requires_positive_n(self):
        profile = axial_profile(self.spec, 0, 1)
        with self.assertRaises(ValidationError):
            sov_basis_magnetic(self.spec, 0, 0.0, 1, profile)


class NoncommutativeBasisTest(TestBase):
    def setUp(self):
        super().setUp()
        self.spec = ScenarioSpec("magnetic", energy=1.5, potential=linear_potential(0.2, 0.1))
        self.points = self.spec.random_points(6, seed=9)

    def test_eigenrelations(self):
        for zeta in (1, -1):
            profile = axial_profile(self.spec, 1, zeta)
            field = ni_basis_magnetic(self.spec, Q, zeta, profile)
            spin = magnetic_spin_operator(self.spec)
            self.assertSmall(eigen_residual(spin, field, zeta * math.sqrt(self.spec.eH), self.points), 1e-7)
            h = magnetic_hamiltonian(self.spec)
            self.assertSmall(eigen_residual(h, field, self.spec.energy, self.points), 1e-6)

    def test_lambda_constraints(self):
        profile = axial_profile(self.spec, 1, 1)
        field = ni_basis_magnetic(self.spec, None, 1, profile)
        for op in ni_constraint_operators(self.spec):
            for x, y, z in self.points:
                point = [x, y, z, Q]
                relative = max_abs(op.apply(field, point)) / max_abs(field.values(point))
                self.assertSmall(relative, 1e-8, msg=op.name)

    def test_requires_unit_n_profiles(self):
        profile = axial_profile(self.spec, 2, 1)
        with self.assertRaises(ValidationError):
            ni_basis_magnetic(self.spec, Q, 1, profile)

    def test_branch_point_rejected(self):
        x, y = 0.2, 0.4
        with self.assertRaises(ValidationError):
            ni_d_function(1.0, -0.5j * (x + 1j * y), 1, x, y)

    def test_reduced_operators_match_printed_form(self):
        h_mismatch, s_mismatch = reduced_operator_mismatch(self.spec, Q, self.points)
        self.assertSmall(h_mismatch, 1e-10)
        self.assertSmall(s_mismatch, 1e-10)
