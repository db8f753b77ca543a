import math

import numpy as np
from django.core.exceptions import ValidationError

from diracni.tests import TestBase
from gamma.matrices import crossed_field_gammas
from jets.fields import coordinate_jets
from ode.potentials import coulomb_potential, linear_potential, parse_potential
from ode.solver import integrate
from ode.systems import LinearODESystem, crossed_matrix, crossed_system, magnetic_system, radial_system


def rotation_system():
    return LinearODESystem(1, lambda t: [[1j]], name="rotation")


class IntegrateTest(TestBase):
    def test_phase_rotation(self):
        profile = integrate(rotation_system(), 0.0, math.pi, [1.0], tol=1e-12)
        self.assertAlmostEqual(profile.values(math.pi)[0], -1.0, places=10)

    def test_tighter_tolerance_is_more_accurate(self):
        system = rotation_system()
        exact = np.exp(10j)
        errors = [abs(integrate(system, 0.0, 10.0, [1.0], tol=tol).values(10.0)[0] - exact) for tol in (1e-6, 1e-9)]
        self.assertLess(errors[1], errors[0] / 10)

    def test_free_radial_solution_at_rest_energy(self):
        # kappa = -1, E = m = 1: g = r, f = 2 r^2 / 3
        system = radial_system(1.0, 1.0, j=0.5, zeta=-1)
        profile = integrate(system, 1.0, 3.0, [2 / 3, 1.0], tol=1e-12)
        self.assertAllClose(profile.values(3.0), [6.0, 3.0], atol=1e-9)

    def test_profile_jets_satisfy_the_system(self):
        system = radial_system(0.7, 1.0, coulomb_potential(0.3), j=1.5, zeta=1)
        profile = integrate(system, 0.5, 4.0, [1.0, 0.2], tol=1e-10)
        for t in (0.7, 1.9, 3.3):
            taylor = profile.taylor(t, 3)
            self.assertAllClose(taylor[1], system.matrix(t) @ taylor[0], atol=1e-12)
            (jet,) = coordinate_jets([t], 2)
            f = profile.component(0)(jet)
            self.assertAlmostEqual(f.partial([1]), taylor[1][0], places=12)

    def test_integration_error_tracks_the_true_error(self):
        system = rotation_system()
        loose = integrate(system, 0.0, 10.0, [1.0], tol=1e-6)
        true_error = max(abs(loose.values(t)[0] - np.exp(1j * t)) for t in (5.0, 10.0))
        estimate = loose.integration_error([5.0, 10.0])
        self.assertGreater(true_error, 0.0)
        self.assertLess(abs(estimate - true_error) / true_error, 0.5)
        tight = integrate(system, 0.0, 10.0, [1.0], tol=1e-11)
        self.assertLess(tight.integration_error([5.0, 10.0]), estimate / 100)

    def test_evaluation_outside_interval(self):
        profile = integrate(rotation_system(), 0.0, 1.0, [1.0], tol=1e-8)
        with self.assertRaises(ValidationError):
            profile.values(2.0)

    def test_invalid_tolerance(self):
        with self.assertRaises(ValidationError):
            integrate(rotation_system(), 0.0, 1.0, [1.0], tol=0.0)


class RadialSystemTest(TestBase):
    def test_coefficients_at_unit_radius(self):
        system = radial_system(1.0, 1.0, j=0.5, zeta=-1)
        self.assertAllClose(system.matrix(1.0), [[-1, 2], [0, 1]])

    def test_zeta_flip_mirrors_centrifugal_terms(self):
        plus = radial_system(0.5, 1.0, j=1.5, zeta=1).matrix(2.0)
        minus = radial_system(0.5, 1.0, j=1.5, zeta=-1).matrix(2.0)
        self.assertAllClose(np.diag(plus), -np.diag(minus))
        self.assertAllClose(plus - np.diag(np.diag(plus)), minus - np.diag(np.diag(minus)))

    def test_coulomb_pole(self):
        system = radial_system(0.5, 1.0, coulomb_potential(0.5), j=0.5, zeta=1)
        self.assertTrue(np.all(np.isfinite(system.matrix(1e-3))))
        self.assertGreater(abs(system.matrix(1e-3)[0, 1]), 400)


class MagneticSystemTest(TestBase):
    def test_lowest_level_has_no_spin_term(self):
        matrix = magnetic_system(0.4, 1.0, eH=2.0, n=0, zeta=1).matrix(0.3)
        self.assertAllClose(np.diag(matrix), [0, 0])

    def test_energy_reflection(self):
        # (E, zeta, f, g) -> (-E, -zeta, g, -f) with V = 0
        swap = np.array([[0, 1], [-1, 0]])
        a = magnetic_system(0.3, 1.0, eH=1.5, n=2, zeta=1).matrix(0.0)
        b = magnetic_system(-0.3, 1.0, eH=1.5, n=2, zeta=-1).matrix(0.0)
        self.assertAllClose(swap @ a @ np.linalg.inv(swap), b)

    def test_plane_wave(self):
        eH, n, k = 0.2, 1, 0.8
        energy = math.sqrt(1 + k * k - n * n * eH)
        system = magnetic_system(energy, 1.0, eH=eH, n=n, zeta=1)
        values, vectors = np.linalg.eig(system.matrix(0.0))
        index = int(np.argmin(abs(values - 1j * k)))
        self.assertAlmostEqual(values[index], 1j * k, places=12)
        profile = integrate(system, 0.0, 2.0, vectors[:, index], tol=1e-12)
        self.assertAllClose(profile.values(2.0), np.exp(2j * k) * vectors[:, index], atol=1e-9)

    def test_field_must_be_positive(self):
        with self.assertRaises(ValidationError):
            magnetic_system(0.3, eH=-1.0)


class CrossedSystemTest(TestBase):
    params = dict(alpha=0.3, epsilon=1.2, kappa=0.5, q1=0.4, q2=-0.2, mass=1.0, charge=1.0)

    def test_shift_terms_vanish_at_q1(self):
        phi = linear_potential(0.5, 0.1)
        g3 = crossed_field_gammas(1.2).gamma[2]
        a = np.array(crossed_matrix(0.4, phi=phi, **self.params), dtype=complex)
        b = np.array(crossed_matrix(0.4, phi=phi, **dict(self.params, q2=0.9)), dtype=complex)
        self.assertAllClose(a - b, -(math.exp(0.2) - math.exp(-0.9)) * g3, atol=1e-13)

    def test_charge_enters_only_through_the_fields(self):
        base = dict(self.params, alpha=0.0)
        one = crossed_system(**base).matrix(0.7)
        two = crossed_system(**dict(base, charge=2.5)).matrix(0.7)
        self.assertAllClose(one, two)

    def test_reconstructs_printed_equation(self):
        system = crossed_system(**self.params, phi=linear_potential(0.5, 0.1))
        profile = integrate(system, 0.0, 1.0, [1, 0, 0.5, 0.2j], tol=1e-11)
        g4 = crossed_field_gammas(1.2).gamma[3]
        for u in (0.2, 0.6):
            taylor = profile.taylor(u, 1)
            m = np.array(crossed_matrix(u, phi=linear_potential(0.5, 0.1), **self.params), dtype=complex)
            self.assertAllClose(-1j * g4 @ taylor[1] + m @ taylor[0], np.zeros(4), atol=1e-12)

    def test_epsilon_must_be_positive(self):
        with self.assertRaises(ValidationError):
            crossed_system(**dict(self.params, epsilon=0.0))


class PotentialParsingTest(TestBase):
    def test_forms(self):
        self.assertEqual(parse_potential("const:0.5")(3.0), 0.5)
        self.assertEqual(parse_potential("linear:2,1")(3.0), 7.0)

    def test_invalid(self):
        for text in ("const:a", "linear:1", "cubic:1"):
            with self.assertRaises(ValidationError):
                parse_potential(text)
