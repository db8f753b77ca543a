import numpy as np
from django.conf import settings


def gen_rng(seed=None):
    if seed is None:
        seed = settings.DEFAULT_SEED
    return np.random.default_rng(seed)


def gen_random_points(rng, box, count, margin=None):
    """Draw `count` points uniformly from `box` shrunk by `margin` on every side.

    `box` is a sequence of (low, high) pairs, one per coordinate.
    """
    if margin is None:
        margin = settings.SINGULAR_MARGIN
    lows = np.array([low + margin for low, _ in box])
    highs = np.array([high - margin for _, high in box])
    return lows + (highs - lows) * rng.random((count, len(box)))


def gen_grid_points(box, size, margin=None):
    if margin is None:
        margin = settings.SINGULAR_MARGIN
    axes = [np.linspace(low + margin, high - margin, size) for low, high in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def max_abs(values):
    values = np.asarray(values)
    if values.size == 0:
        return 0.0
    return float(np.max(np.abs(values)))


def relative_residual(residual, reference):
    scale = max_abs(reference)
    if scale == 0.0:
        return max_abs(residual)
    return max_abs(residual) / scale


def is_half_integer(value):
    return abs(2 * value - round(2 * value)) < 1e-12


def doubled(value):
    """Store half-integer quantum numbers as doubled integers."""
    if not is_half_integer(value):
        raise ValueError(f"{value} is not an integer or half-integer")
    return int(round(2 * value))
