"""Tensor-product quadrature on the auxiliary spaces Q."""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from numpy.polynomial.legendre import leggauss

from diracni.exceptions import QuadratureNotConverged
from diracni.utils import max_abs

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 4


@dataclass
class Grid:
    coords: list
    weights: np.ndarray


def _legendre(low, high, nodes):
    x, w = leggauss(nodes)
    half = 0.5 * (high - low)
    return low + half * (x + 1), half * w


def cylinder_grid(cutoff, nodes):
    """q = x + iy with x periodic on [0, 2 pi) and |y| <= cutoff; |dq ^ dqbar| = 2 dx dy."""
    x = 2 * np.pi * np.arange(nodes) / nodes
    wx = np.full(nodes, 2 * np.pi / nodes)
    y, wy = _legendre(-cutoff, cutoff, nodes)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    weights = 2 * np.outer(wx, wy)
    return Grid(coords=[(xx + 1j * yy).ravel()], weights=weights.ravel())


def plane_grid(half_width, nodes, complex_plane=True):
    x, w = _legendre(-half_width, half_width, nodes)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    weights = np.outer(w, w).ravel()
    if complex_plane:
        return Grid(coords=[(xx + 1j * yy).ravel()], weights=2 * weights)
    return Grid(coords=[xx.ravel(), yy.ravel()], weights=weights)


def grid_action(op, coords, derivatives):
    """Apply a scalar differential operator given the partial derivatives of the operand
    on the grid, keyed by multi-index."""
    out = 0
    for term in op.terms:
        coefficient = term.evaluate_coefficient(coords)
        out = out + term.matrix[0, 0] * coefficient * derivatives[term.multi_index]
    return out * np.ones_like(derivatives[(0,) * op.nvars])


def inner(grid, density, u, v):
    return np.sum(grid.weights * density * np.conj(u) * v)


def until_converged(compute, nodes=None, rtol=1e-8, label="quadrature"):
    """Double the node count until `compute(nodes)` stops changing."""
    nodes = settings.QUADRATURE_NODES if nodes is None else nodes
    previous = compute(nodes)
    for _ in range(MAX_DOUBLINGS):
        nodes *= 2
        current = compute(nodes)
        change = max_abs(np.asarray(current) - np.asarray(previous))
        scale = max(1.0, max_abs(previous))
        logger.debug("%s: %d nodes, change %.3e", label, nodes, change)
        if change <= rtol * scale:
            return current
        previous = current
    raise QuadratureNotConverged(f"{label} did not converge with {nodes} nodes.", tail=change)
