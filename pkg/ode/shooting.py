"""Dirac-Coulomb bound states by shooting on the radial system."""
import logging
import math
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError
from scipy.integrate import simpson
from scipy.optimize import brentq

from diracni.exceptions import CriticalCharge, NoBoundState, NodeCountMismatch

from .potentials import coulomb_potential
from .solver import JoinedProfile, integrate
from .systems import radial_system

logger = logging.getLogger(__name__)

R_MIN = 1e-6
TAIL = 30.0
SCAN_POINTS = 48
LOWEST_ENERGY = 1e-3
PROFILE_POINTS = 400
# samples below this fraction of the peak are ignored when counting nodes
NODE_FLOOR = 1e-8
# smallest relative tolerance brentq accepts
BRENT_RTOL = 4 * np.finfo(float).eps


def dirac_coulomb_energy(zalpha, kappa, n_r):
    """E/m = [1 + (Z alpha)^2 / (n_r + sqrt(kappa^2 - (Z alpha)^2))^2]^(-1/2)."""
    gamma = math.sqrt(kappa * kappa - zalpha * zalpha)
    return (1 + (zalpha / (n_r + gamma)) ** 2) ** -0.5


def radial_labels(kappa):
    """(j, zeta) of the radial system for the Dirac quantum number kappa.

    kappa < 0 pairs j with l = j - 1/2, which the radial system labels zeta = +1.
    """
    return abs(kappa) - 0.5, -1 if kappa > 0 else 1


@dataclass(frozen=True, eq=False)
class BoundState:
    energy: float
    kappa: int
    n_r: int
    node_count: int
    radii: np.ndarray
    profile: np.ndarray
    match_residual: float
    match_radius: float
    solution: JoinedProfile = None

    def as_row(self):
        return {"n_r": self.n_r, "kappa": self.kappa, "E": self.energy}


class CoulombShooter:
    def __init__(self, zalpha, kappa, n_r, tol=None, match_radius=None):
        _validate(zalpha, kappa, n_r)
        self.zalpha = zalpha
        self.kappa = kappa
        self.n_r = n_r
        self.tol = settings.ODE_TOL if tol is None else tol
        self.principal = n_r + abs(kappa)
        self.j, self.zeta = radial_labels(kappa)
        self.potential = coulomb_potential(zalpha)
        if match_radius is None:
            match_radius = self.principal**2 / zalpha
        self.match_radius = match_radius
        self.gamma = math.sqrt(kappa * kappa - zalpha * zalpha)

    def system(self, energy):
        return radial_system(energy, 1.0, self.potential, self.j, self.zeta)

    def decay_rate(self, energy):
        return math.sqrt(1 - energy * energy)

    def outer_radius(self, energy):
        return self.match_radius + TAIL / self.decay_rate(energy)

    def outward(self, energy):
        system = self.system(energy)
        kappa = system.params["kappa"]
        start = [1.0, (self.gamma - kappa) / self.zalpha]
        return integrate(system, R_MIN, self.match_radius, start, tol=self.tol)

    def inward(self, energy):
        start = [1.0, -self.decay_rate(energy) / (energy + 1)]
        return integrate(self.system(energy), self.outer_radius(energy), self.match_radius, start, tol=self.tol)

    def mismatch(self, energy):
        """Normalized Wronskian of the two solutions at the matching radius."""
        a = self.outward(energy).values(self.match_radius).real
        b = self.inward(energy).values(self.match_radius).real
        return float((a[0] * b[1] - a[1] * b[0]) / (np.linalg.norm(a) * np.linalg.norm(b)))

    def energy_window(self):
        binding = 1 - (1 + (self.zalpha / (self.principal + 0.5)) ** 2) ** -0.5
        return LOWEST_ENERGY, 1 - binding

    def brackets(self):
        low, high = self.energy_window()
        energies = 1 - np.geomspace(1 - low, 1 - high, SCAN_POINTS)
        values = [self.mismatch(e) for e in energies]
        found = []
        for i in range(SCAN_POINTS - 1):
            if values[i] == 0:
                found.append((energies[i], energies[i]))
            elif values[i] * values[i + 1] < 0:
                found.append((energies[i], energies[i + 1]))
        logger.debug("kappa=%d: %d sign changes below E=%.8f", self.kappa, len(found), high)
        return found

    @property
    def level(self):
        """Nodes of the large component f; kappa > 0 has one fewer than n_r."""
        return self.n_r if self.kappa < 0 else self.n_r - 1

    def solve(self):
        level = self.level
        found = self.brackets()
        if len(found) <= level:
            raise NoBoundState(
                f"No bound state with n_r={self.n_r}, kappa={self.kappa} for Z alpha={self.zalpha:g}."
            )
        if len(found) != level + 1:
            logger.warning("Found %d levels where %d were expected.", len(found), level + 1)
        low, high = found[level]
        energy = low if low == high else brentq(self.mismatch, low, high, xtol=1e-15, rtol=BRENT_RTOL)
        state = self._bound_state(energy)
        if state.node_count != level:
            raise NodeCountMismatch(
                f"The level found for n_r={self.n_r}, kappa={self.kappa} has {state.node_count} nodes, not {level}."
            )
        return state

    def _bound_state(self, energy):
        inner = self.outward(energy)
        outer = self.inward(energy)
        a = inner.values(self.match_radius)
        b = outer.values(self.match_radius)
        joined = JoinedProfile(inner, outer.rescaled(np.vdot(b, a) / np.vdot(b, b)), self.match_radius)
        radii = np.geomspace(R_MIN, self.outer_radius(energy), PROFILE_POINTS)
        samples = joined.sampled(radii).real
        norm = math.sqrt(simpson(np.sum(samples**2, axis=1), x=radii))
        return BoundState(
            energy=energy,
            kappa=self.kappa,
            n_r=self.n_r,
            node_count=count_nodes(samples[:, 0]),
            radii=radii,
            profile=samples / norm,
            match_residual=abs(self.mismatch(energy)),
            match_radius=self.match_radius,
            solution=joined.rescaled(1 / norm),
        )


def count_nodes(values):
    values = np.asarray(values)
    kept = values[np.abs(values) > NODE_FLOOR * np.max(np.abs(values))]
    return int(np.sum(np.sign(kept[1:]) != np.sign(kept[:-1])))


def _validate(zalpha, kappa, n_r):
    if int(kappa) != kappa or kappa == 0:
        raise ValidationError("kappa must be a nonzero integer.")
    if int(n_r) != n_r or n_r < 0:
        raise ValidationError("n_r must be a non-negative integer.")
    if zalpha < 0:
        raise ValidationError("Z alpha must be non-negative.")
    if zalpha == 0:
        raise NoBoundState("The free radial equation has no bound states.")
    if zalpha >= abs(kappa):
        raise CriticalCharge(f"Z alpha={zalpha:g} reaches the critical value |kappa|={abs(kappa)}.")
    if kappa > 0 and n_r == 0:
        raise NoBoundState(f"kappa={kappa} has no nodeless bound state.")


def shoot_bound_state(zalpha, kappa, n_r, tol=None, match_radius=None):
    state = CoulombShooter(zalpha, kappa, n_r, tol=tol, match_radius=match_radius).solve()
    logger.info("n_r=%d kappa=%d: E=%.12f", n_r, kappa, state.energy)
    return state
