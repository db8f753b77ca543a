from dataclasses import dataclass
from typing import Callable

import numpy as np
from django.core.exceptions import ValidationError

from diracni.exceptions import UnsupportedPrimitive
from diracni.utils import gen_rng
from jets.jet import JetSpace, JetValue, cos, exp, sin


def coordinate_jets(point, order):
    space = JetSpace.get(len(point), order)
    return [JetValue.variable(space, i, x) for i, x in enumerate(point)]


def as_jet(value, space):
    if isinstance(value, JetValue):
        return value
    return JetValue.constant(space, value)


def jet_lift(f, point, order):
    """Taylor data of the scalar field `f` at `point` up to `order`."""
    if order not in (1, 2, 3):
        raise ValidationError("Jet order must be 1, 2 or 3.")
    coords = coordinate_jets(point, order)
    try:
        result = f(*coords)
    except TypeError as exc:
        raise UnsupportedPrimitive(str(exc)) from exc
    return as_jet(result, coords[0].space)


@dataclass(frozen=True, eq=False)
class SpinorJetField:
    """A 4-component field given by a rule on coordinate jets (or plain numbers)."""

    rule: Callable
    nvars: int
    name: str = ""

    def __call__(self, *coords):
        return self.rule(*coords)

    def jets(self, point, order):
        coords = coordinate_jets(point, order)
        try:
            components = self.rule(*coords)
        except TypeError as exc:
            raise UnsupportedPrimitive(str(exc)) from exc
        return [as_jet(c, coords[0].space) for c in components]

    def values(self, point):
        return np.array([complex(c) for c in self.rule(*point)])


def stack(components):
    """Coefficient matrix of shape (len(components), monomials)."""
    return np.stack([c.coeffs for c in components])


def unstack(space, coeffs):
    return [JetValue(space, row) for row in coeffs]


def _random_complex(rng, size=None):
    return rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size)


def random_test_spinor(seed, nvars=4, components=4):
    """A smooth generic field mixing trigonometric, Gaussian and quadratic terms."""
    rng = gen_rng(seed)
    terms = []
    for _ in range(components):
        terms.append(
            {
                "sin": (_random_complex(rng), rng.uniform(-1, 1, nvars), rng.uniform(-1, 1)),
                "cos": (_random_complex(rng), rng.uniform(-1, 1, nvars), rng.uniform(-1, 1)),
                "gauss": _random_complex(rng),
                "linear": _random_complex(rng, nvars),
                "quadratic": _random_complex(rng, (nvars, nvars)),
                "constant": _random_complex(rng),
            }
        )

    def rule(*x):
        radius2 = sum(xi * xi for xi in x)
        out = []
        for c in terms:
            amp, k, shift = c["sin"]
            value = amp * sin(sum(ki * xi for ki, xi in zip(k, x)) + shift)
            amp, k, shift = c["cos"]
            value = value + amp * cos(sum(ki * xi for ki, xi in zip(k, x)) + shift)
            value = value + c["gauss"] * exp(-radius2)
            value = value + c["constant"]
            for i in range(nvars):
                value = value + c["linear"][i] * x[i]
                for j in range(i, nvars):
                    value = value + c["quadratic"][i, j] * x[i] * x[j]
            out.append(value)
        return out

    return SpinorJetField(rule=rule, nvars=nvars, name=f"random-{seed}")
