import numpy as np
from django.test import SimpleTestCase

from diracni.utils import gen_rng


class TestBase(SimpleTestCase):
    seed = 0

    def setUp(self):
        super().setUp()
        self.rng = gen_rng(self.seed)

    def assertAllClose(self, actual, expected, atol=1e-12, rtol=0.0, msg=None):
        actual = np.asarray(actual)
        expected = np.asarray(expected)
        if not np.allclose(actual, expected, atol=atol, rtol=rtol):
            diff = np.max(np.abs(actual - expected)) if actual.size else 0.0
            self.fail(msg or f"arrays differ by {diff:.3e} (atol={atol}, rtol={rtol})")

    def assertSmall(self, value, tol, msg=None):
        if not value <= tol:
            self.fail(msg or f"{value:.3e} is not below {tol:.1e}")
