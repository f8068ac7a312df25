"""Smallest eigenpair of a cost matrix and the clock state it defines.

Minimizing the quadratic form a^T F a over unit vectors is an eigenvalue
problem: the optimal amplitude vector is the eigenvector of the smallest
eigenvalue of F. Symmetric LAPACK drivers do the factorization work; this
module picks a banded or dense path from the recorded bandwidth, enforces
the residual contract, and fixes the sign convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .cost import CostFunction, CostMatrix, cost_matrix
from .states import ClockState

RESIDUAL_RTOL = 1e-10
SIGN_TOL = 1e-10

__all__ = [
    "SolverConvergenceError",
    "SignConventionError",
    "EigenPair",
    "smallest_eigenpair",
    "optimal_state",
]


class SolverConvergenceError(RuntimeError):
    """Eigensolver failed to converge or missed the residual contract."""


class SignConventionError(RuntimeError):
    """Eigenvector has genuinely mixed signs after the global sign fix."""


@dataclass(frozen=True, eq=False)
class EigenPair:
    """Smallest eigenvalue with a unit, sign-fixed eigenvector.

    residual_norm is ||F v - lambda v||_2, guaranteed to be at most
    1e-10 times the infinity norm of F.
    """

    eigenvalue: float
    eigenvector: np.ndarray
    residual_norm: float

    def __post_init__(self):
        vec = np.array(self.eigenvector, dtype=float)
        vec.flags.writeable = False
        object.__setattr__(self, "eigenvector", vec)


def _solve_smallest(matrix: np.ndarray, bandwidth: int):
    dim = matrix.shape[0]
    if dim == 1:
        return float(matrix[0, 0]), np.ones(1)
    try:
        if bandwidth <= 1:
            diag = np.diagonal(matrix).copy()
            off = np.diagonal(matrix, offset=1).copy()
            values, vectors = scipy.linalg.eigh_tridiagonal(
                diag, off, select="i", select_range=(0, 0)
            )
        elif bandwidth + 1 <= dim // 3:
            # upper banded storage: band[b + i - j, j] = A[i, j]
            band = np.zeros((bandwidth + 1, dim))
            for k in range(bandwidth + 1):
                band[bandwidth - k, k:] = np.diagonal(matrix, offset=k)
            values, vectors = scipy.linalg.eig_banded(
                band, select="i", select_range=(0, 0)
            )
        else:
            values, vectors = scipy.linalg.eigh(matrix, subset_by_index=[0, 0])
    except scipy.linalg.LinAlgError as exc:
        raise SolverConvergenceError(f"eigensolver did not converge: {exc}") from exc
    return float(values[0]), vectors[:, 0]


def smallest_eigenpair(matrix: CostMatrix) -> EigenPair:
    """Smallest eigenvalue and unit eigenvector of a symmetric cost matrix.

    Deterministic for identical input. The returned vector is normalized
    and flipped so its largest-magnitude entry is positive. Non-convergence
    raises ``SolverConvergenceError`` instead of returning a wrong answer.
    """
    eigenvalue, vector = _solve_smallest(matrix.entries, matrix.bandwidth)
    vector = vector / np.linalg.norm(vector)
    if vector[np.argmax(np.abs(vector))] < 0.0:
        vector = -vector
    residual = float(np.linalg.norm(matrix.entries @ vector - eigenvalue * vector))
    scale = float(np.linalg.norm(matrix.entries, np.inf)) or 1.0
    if residual > RESIDUAL_RTOL * scale:
        raise SolverConvergenceError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_RTOL:.0e} * ||F||_inf"
        )
    return EigenPair(eigenvalue, vector, residual)


def optimal_state(f: CostFunction, n_ions: int) -> ClockState:
    """Clock state minimizing the mean cost for the given cost function.

    The achieved minimal mean cost equals the smallest eigenvalue, which
    callers can recover via ``smallest_eigenpair(cost_matrix(f, n_ions))``
    or ``mean_cost_bound`` on the returned state. For the built-in costs
    the minimizing eigenvector is entrywise positive, so after the sign
    fix any negative entries beyond roundoff indicate a convention
    violation and are surfaced rather than clamped.
    """
    pair = smallest_eigenpair(cost_matrix(f, n_ions))
    amplitudes = pair.eigenvector
    if float(amplitudes.min()) < -SIGN_TOL:
        raise SignConventionError(
            "minimal eigenvector has mixed signs beyond tolerance; it does not "
            "define a valid amplitude vector under the nonnegativity convention"
        )
    amplitudes = np.maximum(amplitudes, 0.0)
    amplitudes = amplitudes / np.linalg.norm(amplitudes)
    return ClockState(n_ions, amplitudes)
