"""Dense linear-algebra kernels used throughout the package.

Matrices are plain :class:`numpy.ndarray` objects. ``vec`` stacks columns
(column-major), so ``vec(A @ B @ C) == kron(C.T, A) @ vec(B)``.
"""

import warnings

import numpy as np
import scipy.linalg

from .errors import DimensionError, DomainError, SingularMatrixError

DEFAULT_PINV_TOL = 1e-12


def _as_square(M, name="matrix"):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def vec(M):
    """Stack the columns of a square matrix into a vector."""
    M = _as_square(M)
    return M.reshape(-1, order="F")


def unvec(v, n=None):
    """Inverse of :func:`vec`."""
    v = np.asarray(v)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    if n * n != v.size:
        raise DimensionError(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape((n, n), order="F")


def kron(A, B):
    return np.kron(np.asarray(A), np.asarray(B))


def pinv(M, rel_tol=DEFAULT_PINV_TOL):
    """Moore-Penrose pseudoinverse by SVD.

    Singular values below ``rel_tol * sigma_max`` are treated as zero.
    """
    if rel_tol <= 0:
        raise DomainError("rel_tol must be positive")
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionError("pinv expects a 2-D array")
    if not np.any(M):
        return np.zeros(M.T.shape, dtype=M.dtype)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > rel_tol * s[0]
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * s_inv) @ U.conj().T


def pinv_tikhonov(M, delta):
    """Regularized inverse ``M^H (M M^H + delta I)^-1``.

    Tends to :func:`pinv` as ``delta -> 0``; kept as a cross-check only.
    """
    M = np.asarray(M)
    m, n = M.shape
    Mh = M.conj().T
    # the Gram matrix is formed on the smaller side, where it has full rank
    if m <= n:
        return np.linalg.solve(M @ Mh + delta * np.eye(m), M).conj().T
    return np.linalg.solve(Mh @ M + delta * np.eye(n), Mh)


def trace_norm(M):
    """Sum of singular values."""
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(M, compute_uv=False)))


def symplectic_form(n_modes):
    """Block-diagonal symplectic form with blocks ``[[0, 1], [-1, 0]]``."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise DomainError(f"n_modes must be a positive integer, got {n_modes!r}")
    block = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(int(n_modes)), block)


def is_hermitian(M, tol=1e-12):
    M = np.asarray(M)
    scale = max(1.0, float(np.linalg.norm(M)))
    return bool(np.max(np.abs(M - M.conj().T), initial=0.0) <= tol * scale)


def hermitian_deviation(M):
    """Relative deviation ``max|M - M^H| / max|M|``."""
    M = np.asarray(M)
    scale = max(float(np.max(np.abs(M), initial=0.0)), np.finfo(float).tiny)
    return float(np.max(np.abs(M - M.conj().T), initial=0.0)) / scale


def condition_number(M):
    return float(np.linalg.cond(M))


def solve_linear(M, b):
    """Solve ``M x = b`` with a pivoted LU factorization.

    Raises :class:`SingularMatrixError` when a pivot falls below
    ``1e-14 * ||M||``.
    """
    M = _as_square(M)
    b = np.asarray(b)
    if b.shape[0] != M.shape[0]:
        raise DimensionError(f"rhs length {b.shape[0]} does not match matrix size {M.shape[0]}")
    norm = np.linalg.norm(M, ord=np.inf)
    if norm == 0:
        raise SingularMatrixError("zero matrix", np.inf)
    with warnings.catch_warnings():
        # singularity is reported through the pivot check below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(M, check_finite=True)
    if np.min(np.abs(np.diag(lu))) < 1e-14 * norm:
        raise SingularMatrixError("numerically singular matrix", condition_number(M))
    return scipy.linalg.lu_solve((lu, piv), b)


def inv(M):
    M = _as_square(M)
    return solve_linear(M, np.eye(M.shape[0], dtype=np.result_type(M, float)))
