import math

import numpy as np
from django.core.exceptions import ValidationError

from diracni.exceptions import JetOrderError, SingularPoint, UnsupportedPrimitive
from diracni.tests import TestBase
from jets.fields import coordinate_jets, jet_lift, random_test_spinor
from jets.jet import JetSpace, JetValue, cos, exp, log, power, sin, sqrt


class JetSpaceTest(TestBase):
    def test_monomial_count(self):
        self.assertEqual(JetSpace.get(4, 3).size, 35)
        self.assertEqual(JetSpace.get(3, 2).size, 10)
        self.assertEqual(JetSpace.get(2, 0).size, 1)

    def test_constant_first(self):
        space = JetSpace.get(3, 2)
        self.assertEqual(space.monomials[0], (0, 0, 0))

    def test_order_limit(self):
        with self.assertRaises(JetOrderError):
            JetSpace.get(2, 4)

    def test_spaces_are_cached(self):
        self.assertIs(JetSpace.get(2, 2), JetSpace.get(2, 2))


class JetLiftTest(TestBase):
    def test_sine_at_zero(self):
        jet = jet_lift(sin, [0.0], 1)
        self.assertAlmostEqual(jet.value, 0.0)
        self.assertAlmostEqual(jet.partial([1]), 1.0)

    def test_mixed_partial_of_product(self):
        jet = jet_lift(lambda x, y: x * y, [0.3, -0.7], 2)
        self.assertAlmostEqual(jet.partial([1, 1]), 1.0)
        self.assertAlmostEqual(jet.partial([2, 0]), 0.0)

    def test_second_derivative_against_finite_differences(self):
        jet = jet_lift(lambda x: exp(x * x), [1.0], 2)
        step = 1e-4
        f = lambda x: math.exp(x * x)  # noqa: E731
        central = (f(1 + step) - 2 * f(1) + f(1 - step)) / step**2
        self.assertAlmostEqual(jet.partial([2]).real, central, delta=1e-6 * abs(central))
        self.assertAlmostEqual(jet.partial([2]).real, 6 * math.e, places=10)

    def test_constant_has_no_slope(self):
        jet = jet_lift(lambda x, y: 2.5, [1.0, 2.0], 3)
        self.assertAllClose(jet.coeffs[1:], np.zeros(jet.space.size - 1))

    def test_third_order_univariate(self):
        for f, third in [
            (sin, lambda x: -math.cos(x)),
            (cos, lambda x: math.sin(x)),
            (exp, math.exp),
            (log, lambda x: 2 / x**3),
            (sqrt, lambda x: 3 / 8 * x**-2.5),
        ]:
            x0 = 0.8
            jet = jet_lift(f, [x0], 3)
            self.assertAlmostEqual(jet.partial([3]).real, third(x0), places=12)

    def test_negative_integer_power(self):
        jet = jet_lift(lambda x: power(x, -2), [2.0], 2)
        self.assertAlmostEqual(jet.partial([1]).real, -2 / 8)
        self.assertAlmostEqual(jet.partial([2]).real, 6 / 16)

    def test_division(self):
        jet = jet_lift(lambda x, y: x / y, [1.0, 2.0], 2)
        self.assertAlmostEqual(jet.partial([0, 1]).real, -0.25)
        self.assertAlmostEqual(jet.partial([1, 1]).real, -0.25)

    def test_complex_principal_log(self):
        jet = jet_lift(lambda x: log(x + 1j), [0.0], 1)
        self.assertAlmostEqual(jet.value, complex(0, math.pi / 2))
        self.assertAlmostEqual(jet.partial([1]), 1 / 1j)

    def test_singular_points(self):
        with self.assertRaises(SingularPoint):
            jet_lift(log, [0.0], 1)
        with self.assertRaises(SingularPoint):
            jet_lift(sqrt, [0.0], 1)
        with self.assertRaises(SingularPoint):
            jet_lift(lambda x: 1 / x, [0.0], 1)

    def test_unsupported_primitive(self):
        with self.assertRaises(UnsupportedPrimitive):
            jet_lift(lambda x: math.sin(x), [0.5], 1)

    def test_invalid_order(self):
        with self.assertRaises(ValidationError):
            jet_lift(sin, [0.0], 0)

    def test_derivative_lowers_order(self):
        jet = jet_lift(lambda x, y: sin(x) * exp(y), [0.4, 0.1], 3)
        dx = jet.derivative(0)
        self.assertEqual(dx.order, 2)
        self.assertAlmostEqual(dx.value, math.cos(0.4) * math.exp(0.1))
        self.assertAlmostEqual(dx.partial([1, 1]), -math.sin(0.4) * math.exp(0.1))

    def test_mixed_orders_truncate(self):
        x, y = coordinate_jets([0.2, 0.3], 2)
        low = coordinate_jets([0.2, 0.3], 1)[0]
        self.assertEqual((x * y + low).order, 1)


class ChainRuleTest(TestBase):
    def test_composition_matches_nested_lift(self):
        for _ in range(50):
            a, b, c = self.rng.uniform(-1, 1, 3)
            x0 = self.rng.uniform(-1, 1, 2)
            inner = lambda x, y: a * x * x + b * sin(y) + c  # noqa: E731
            direct = jet_lift(lambda x, y: exp(cos(inner(x, y))), x0, 3)
            inner_jet = jet_lift(inner, x0, 3)
            composed = exp(cos(inner_jet))
            self.assertAllClose(direct.coeffs, composed.coeffs, atol=1e-13)

    def test_first_derivative_chain_rule(self):
        jet = jet_lift(lambda x: sin(x * x), [0.7], 1)
        self.assertAlmostEqual(jet.partial([1]).real, 2 * 0.7 * math.cos(0.49))


class RandomSpinorTest(TestBase):
    def test_deterministic_in_seed(self):
        point = [0.1, -0.2, 0.3, 0.4]
        first = random_test_spinor(0).values(point)
        second = random_test_spinor(0).values(point)
        self.assertTrue(np.array_equal(first, second))

    def test_seeds_differ(self):
        point = [0.1, -0.2, 0.3, 0.4]
        self.assertFalse(
            np.allclose(random_test_spinor(0).values(point), random_test_spinor(1).values(point))
        )

    def test_finite_on_unit_ball(self):
        field = random_test_spinor(3)
        for point in self.rng.normal(size=(20, 4)):
            point = point / max(1.0, np.linalg.norm(point))
            self.assertTrue(np.all(np.isfinite(field.values(point))))

    def test_clairaut_symmetry(self):
        field = random_test_spinor(1)
        for point in self.rng.uniform(-1, 1, size=(10, 4)):
            jets = field.jets(point, 2)
            for component in jets:
                for mu in range(4):
                    for nu in range(4):
                        first = component.derivative(mu).derivative(nu).value
                        second = component.derivative(nu).derivative(mu).value
                        self.assertAlmostEqual(first, second, delta=1e-12)

    def test_jets_match_values(self):
        field = random_test_spinor(2, nvars=3)
        point = [0.3, 0.1, -0.5]
        values = [jet.value for jet in field.jets(point, 1)]
        self.assertAllClose(values, field.values(point))
