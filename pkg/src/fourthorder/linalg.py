"""Validation helpers for density matrices."""
from __future__ import annotations

import numpy as np

from .errors import InvariantViolation

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def is_square(matrix: np.ndarray) -> bool:
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1]


def is_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    if not is_square(matrix):
        return False
    return bool(np.max(np.abs(matrix - matrix.conj().T), initial=0.0) <= tol)


def min_eigenvalue(matrix: np.ndarray) -> float:
    herm = 0.5 * (matrix + matrix.conj().T)
    return float(np.linalg.eigvalsh(herm)[0])


def is_psd(matrix: np.ndarray, tol: float = PSD_TOL) -> bool:
    """Check positive semidefiniteness of a Hermitian matrix.

    Parameters
    ----------
    matrix : np.ndarray
        matrix to check
    tol : float
        tolerance on small negative eigenvalues.
    """
    if not is_hermitian(matrix):
        return False
    return min_eigenvalue(matrix) >= -tol


def validate_density_matrix(matrix: np.ndarray, what: str = "density matrix") -> None:
    """Raise :class:`InvariantViolation` unless ``matrix`` is a valid state."""
    if not is_square(matrix):
        raise InvariantViolation(f"{what}: not square, shape {matrix.shape}")
    herm_err = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    if herm_err > HERMITIAN_TOL:
        raise InvariantViolation(f"{what}: not Hermitian (max deviation {herm_err:.3e})")
    tr = complex(np.trace(matrix))
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvariantViolation(f"{what}: trace {tr.real:.15g}{tr.imag:+.3g}j != 1")
    lam = min_eigenvalue(matrix)
    if lam < -PSD_TOL:
        raise InvariantViolation(f"{what}: negative eigenvalue {lam:.3e}")
