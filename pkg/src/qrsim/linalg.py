"""Dense complex operator algebra for small qubit-resonator Hilbert spaces.

Everything here works on plain ``numpy.ndarray`` of ``complex128``; matrices
are row-major and never exceed dimension 36 (the vectorized Liouvillian for a
two-level system times a three-level resonator), so dense routines are used
throughout.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import ContractViolationError, InvalidDimensionError, SingularMatrixError

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


def pauli(which: str) -> np.ndarray:
    """Return a 2x2 Pauli or ladder matrix: 'x', 'y', 'z', 'plus', 'minus'.

    The ladder convention is sigma_pm = (sigma_x +- i sigma_y)/2, so
    ``pauli('plus')`` maps the lower basis vector onto the upper one.
    """
    try:
        return _PAULI[which].copy()
    except KeyError:
        raise InvalidDimensionError(f"unknown Pauli label {which!r}") from None


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def fock_annihilation(dim: int) -> np.ndarray:
    """Truncated photon annihilation operator, a[n-1, n] = sqrt(n)."""
    if dim < 2:
        raise InvalidDimensionError(f"Fock space needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise InvalidDimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def add_scaled(a: np.ndarray, c: complex, b: np.ndarray) -> np.ndarray:
    """A + c*B."""
    if a.shape != b.shape:
        raise InvalidDimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return a + c * b


def is_hermitian(a: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def hermitian_eigensystem(a: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (real, ascending) and unitary eigenvector matrix of Hermitian ``a``.

    Raises ContractViolationError when ``a`` deviates from Hermiticity by more
    than ``tol`` elementwise.
    """
    if a.shape[0] != a.shape[1]:
        raise InvalidDimensionError(f"eigensystem needs a square matrix, got {a.shape}")
    if not is_hermitian(a, tol):
        raise ContractViolationError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(a)
    return vals, vecs


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by partially pivoted LU, rejecting near-singular systems.

    A pivot below 1e-14 * ||A||_max signals a (numerically) singular matrix.
    """
    if a.shape[0] != a.shape[1]:
        raise InvalidDimensionError(f"solve needs a square matrix, got {a.shape}")
    norm = np.max(np.abs(a))
    if norm == 0.0:
        raise SingularMatrixError("zero matrix")
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if np.min(pivots) < 1e-14 * norm:
        raise SingularMatrixError(
            f"pivot {np.min(pivots):.3e} below threshold {1e-14 * norm:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
