"""4x4 complex matrices and the gamma conventions (index 1 is time-like)."""
import functools
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from django.core.exceptions import ValidationError

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
IDENTITY2 = np.eye(2, dtype=complex)
IDENTITY4 = np.eye(4, dtype=complex)
ZERO4 = np.zeros((4, 4), dtype=complex)

# eta^{mu nu}, indices 1..4 mapped to 0..3
MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])


def frozen(matrix):
    matrix = np.array(matrix, dtype=complex)
    matrix.setflags(write=False)
    return matrix


def block(a, b, c, d):
    return frozen(np.block([[a, b], [c, d]]))


def anticommutator(a, b):
    return a @ b + b @ a


def commutator(a, b):
    return a @ b - b @ a


def dagger(a):
    return np.conj(a).T


def bivectors_of(gammas):
    return {
        (mu, nu): frozen(0.5 * commutator(gammas[mu - 1], gammas[nu - 1]))
        for mu, nu in combinations(range(1, len(gammas) + 1), 2)
    }


@dataclass(frozen=True, eq=False)
class GammaSet:
    gamma: tuple
    bivectors: dict
    sigma: tuple = ()
    beta: np.ndarray = None
    alpha: tuple = ()
    metric: np.ndarray = None

    def g(self, mu):
        return self.gamma[mu - 1]

    def bivector(self, mu, nu):
        if mu == nu:
            return frozen(ZERO4)
        if mu < nu:
            return self.bivectors[(mu, nu)]
        return frozen(-self.bivectors[(nu, mu)])

    def clifford_residual(self):
        """Largest deviation from {g^a, g^b} = 2 metric^{ab} I over all pairs."""
        worst = 0.0
        for a in range(4):
            for b in range(a, 4):
                expected = 2 * self.metric[a, b] * IDENTITY4
                diff = anticommutator(self.gamma[a], self.gamma[b]) - expected
                worst = max(worst, float(np.max(np.abs(diff))))
        return worst


@functools.lru_cache(maxsize=None)
def standard_gammas():
    gamma = [block(IDENTITY2, 0 * IDENTITY2, 0 * IDENTITY2, -IDENTITY2)]
    gamma += [block(0 * IDENTITY2, s, -s, 0 * IDENTITY2) for s in PAULI]
    sigma = tuple(block(s, 0 * IDENTITY2, 0 * IDENTITY2, s) for s in PAULI)
    beta = gamma[0]
    alpha = tuple(frozen(beta @ gamma[k]) for k in range(1, 4))
    return GammaSet(
        gamma=tuple(gamma),
        bivectors=bivectors_of(gamma),
        sigma=sigma,
        beta=beta,
        alpha=alpha,
        metric=MINKOWSKI,
    )


def crossed_frame_metric(epsilon):
    """Tetrad metric G_ab of the crossed-field moving frame."""
    return np.array(
        [
            [-1.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, -(1.0 + epsilon**2)],
        ]
    )


def crossed_field_gammas(epsilon):
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive.")
    std = standard_gammas()
    g1, g2, g3, g4 = std.gamma
    hatted = (
        frozen(g3 / epsilon - g4),
        frozen(-0.5 * (g1 - g2)),
        frozen(-(g1 + g2)),
        frozen(g3 / epsilon),
    )
    return GammaSet(
        gamma=hatted,
        bivectors=bivectors_of(hatted),
        metric=np.linalg.inv(crossed_frame_metric(epsilon)),
    )
