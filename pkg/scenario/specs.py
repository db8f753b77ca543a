import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from diracni.utils import gen_grid_points, gen_random_points, gen_rng
from jets.fields import SpinorJetField
from ode.potentials import zero_potential

KINDS = ("spherical", "magnetic", "crossed")


@dataclass(frozen=True, eq=False)
class ScenarioSpec:
    """Physical parameters of one field configuration.

    `potential` is the rule for eV (of r or z); `phi` is the crossed-field profile phi(y).
    """

    kind: str
    mass: float = 1.0
    charge: float = 1.0
    energy: float = 0.5
    potential: Callable = zero_potential
    field_strength: float = 1.0
    alpha: float = 0.0
    epsilon: float = 1.0
    phi: Callable = zero_potential

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"Unknown scenario '{self.kind}'.")
        if not self.mass > 0:
            raise ValidationError("mass must be positive.")
        if self.kind == "magnetic" and not self.eH > 0:
            raise ValidationError("eH must be positive.")
        if self.kind == "crossed" and not self.epsilon > 0:
            raise ValidationError("epsilon must be positive.")

    @property
    def eH(self):
        return self.charge * self.field_strength

    @property
    def box(self):
        """Sampling box of the scenario coordinates, away from coordinate singularities."""
        if self.kind == "spherical":
            return [(0.5, 3.0), (0.0, math.pi), (0.0, 2 * math.pi)]
        if self.kind == "magnetic":
            return [(-1.0, 1.0), (-1.0, 1.0), (0.0, 2.0)]
        return [(-1.0, 1.0), (0.5, 2.0)]

    def random_points(self, count, seed=None):
        rng = gen_rng(settings.DEFAULT_SEED if seed is None else seed)
        return gen_random_points(rng, self.box, count, margin=max(settings.SINGULAR_MARGIN, 0.1))

    def grid_points(self, size=None):
        size = settings.GRID_SIZE if size is None else size
        return gen_grid_points(self.box, size, margin=max(settings.SINGULAR_MARGIN, 0.1))


@dataclass(frozen=True, eq=False)
class SolutionField(SpinorJetField):
    """A constructed solution; `provenance` is SoV or NI."""

    provenance: str = "SoV"
    labels: dict = field(default_factory=dict)

    def norm_on(self, points):
        return float(np.sqrt(sum(np.sum(np.abs(self.values(p)) ** 2) for p in points)))
