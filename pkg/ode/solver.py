"""Adaptive integration of linear systems with jet-capable solution profiles."""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from scipy.integrate import solve_ivp

from diracni.exceptions import SingularPoint, StepUnderflow
from jets.jet import JetValue

logger = logging.getLogger(__name__)

METHOD = "DOP853"
# tolerance ratio and floor of the rerun that measures integration error
RERUN_FACTOR = 1e-2
RERUN_FLOOR = 1e-13
RERUN_POINTS = 9


def _check_finite(system, t):
    if not np.all(np.isfinite(system.matrix(t))):
        raise SingularPoint(f"Coefficients of the {system.name} system are not finite at t={t:g}.")


def integrate(system, t0, t1, y0, tol=None, t_eval=None):
    """Integrate `system` from t0 to t1 with an embedded 8(5,3) Runge-Kutta pair."""
    if tol is None:
        tol = settings.ODE_TOL
    if not tol > 0:
        raise ValidationError("tol must be positive.")
    _check_finite(system, t0)
    _check_finite(system, t1)
    y0 = np.asarray(y0, dtype=complex)
    sol = solve_ivp(
        system.rhs,
        (t0, t1),
        y0,
        method=METHOD,
        t_eval=t_eval,
        dense_output=True,
        rtol=tol,
        atol=tol * max(float(np.max(np.abs(y0))), 1e-300) * 1e-3,
    )
    if not sol.success:
        raise StepUnderflow(f"Integration of the {system.name} system failed: {sol.message}")
    logger.debug("%s system: %d steps from %g to %g", system.name, sol.t.size, t0, t1)
    return Profile(system, sol.sol, t0, t1, samples=(sol.t, sol.y), tol=tol)


@dataclass(frozen=True, eq=False)
class Profile:
    """A solution of y' = A(t) y on [t0, t1]. Derivatives come from the Taylor
    recursion of the equation itself, so jets of a profile satisfy the system exactly."""

    system: object
    dense: object
    t0: float
    t1: float
    samples: tuple = ()
    scale: complex = 1.0
    tol: float = None

    def values(self, t):
        low, high = sorted((self.t0, self.t1))
        if not low - 1e-12 <= t <= high + 1e-12:
            raise ValidationError(f"t={t:g} lies outside the integrated interval [{low:g}, {high:g}].")
        return self.scale * np.asarray(self.dense(t), dtype=complex)

    def taylor(self, t0, order):
        """Normalized Taylor coefficients, shape (order + 1, dimension)."""
        matrices = self.system.taylor_matrices(t0, order)
        out = np.zeros((order + 1, self.system.dimension), dtype=complex)
        out[0] = self.values(t0)
        for k in range(order):
            out[k + 1] = sum(matrices[i] @ out[k - i] for i in range(k + 1)) / (k + 1)
        return out

    def component(self, index):
        """Jet-capable scalar rule t -> y_index(t)."""

        def rule(t):
            if isinstance(t, JetValue):
                base = t.value
                if abs(base.imag) > 0:
                    raise ValidationError("Profiles are evaluated at real points only.")
                return t.compose(self.taylor(base.real, t.order)[:, index])
            return self.values(float(np.real(t)))[index]

        return rule

    def rescaled(self, factor):
        return Profile(self.system, self.dense, self.t0, self.t1, self.samples, self.scale * factor, self.tol)

    def integration_error(self, points=None):
        """Largest relative deviation at `points` from a rerun at a tighter tolerance."""
        if points is None:
            points = np.linspace(self.t0, self.t1, RERUN_POINTS)
        tol = settings.ODE_TOL if self.tol is None else self.tol
        start = np.asarray(self.dense(self.t0), dtype=complex)
        tight = integrate(self.system, self.t0, self.t1, start, tol=max(tol * RERUN_FACTOR, RERUN_FLOOR))
        mine = np.array([self.dense(t) for t in points])
        reference = np.array([tight.dense(t) for t in points])
        return float(np.max(np.abs(mine - reference)) / max(float(np.max(np.abs(reference))), 1e-300))

    def sampled(self, points):
        return np.array([self.values(t) for t in points])


@dataclass(frozen=True, eq=False)
class JoinedProfile:
    """Two profiles of the same system glued at `junction`; the inner covers t <= junction."""

    inner: Profile
    outer: Profile
    junction: float

    @property
    def system(self):
        return self.inner.system

    def _pick(self, t):
        return self.inner if t <= self.junction else self.outer

    def values(self, t):
        return self._pick(t).values(t)

    def taylor(self, t0, order):
        return self._pick(t0).taylor(t0, order)

    def component(self, index):
        def rule(t):
            base = t.value.real if isinstance(t, JetValue) else float(np.real(t))
            return self._pick(base).component(index)(t)

        return rule

    def integration_error(self, points):
        inner = [t for t in points if t <= self.junction]
        outer = [t for t in points if t > self.junction]
        return max(
            self.inner.integration_error(inner) if inner else 0.0,
            self.outer.integration_error(outer) if outer else 0.0,
        )

    def sampled(self, points):
        return np.array([self.values(t) for t in points])

    def rescaled(self, factor):
        return JoinedProfile(self.inner.rescaled(factor), self.outer.rescaled(factor), self.junction)
