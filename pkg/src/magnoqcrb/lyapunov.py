"""Steady-state covariance from ``A V + V A^T = -D`` and its sensitivities."""

from dataclasses import InitVar, dataclass

import numpy as np

from .errors import DimensionError, NumericalError, PhysicalityError, StabilityError
from .linalg import condition_number, solve_linear, symplectic_form, unvec, vec

RESIDUAL_TOL = 1e-8
ASYMMETRY_TOL = 1e-8
PHYSICALITY_TOL = 1e-8


@dataclass(frozen=True)
class GaussianState:
    """Covariance ``V`` (vacuum = I/2) and displacement ``R_mean``.

    Construction checks symmetry, positivity and the uncertainty relation
    ``V + i Omega / 2 >= 0`` up to ``1e-8 ||V||``; pass ``check=False`` to
    build a diagnostic state that skips the physicality checks.
    """

    V: np.ndarray
    R_mean: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check):
        V = np.asarray(self.V, dtype=float)
        R = np.asarray(self.R_mean, dtype=float)
        if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
            raise DimensionError(f"covariance must be 2n x 2n, got {V.shape}")
        if R.shape != (V.shape[0],):
            raise DimensionError(f"displacement length {R.shape} does not match covariance {V.shape}")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "R_mean", R)
        norm = np.linalg.norm(V)
        if np.max(np.abs(V - V.T), initial=0.0) > 1e-10 * max(norm, 1e-300):
            raise NumericalError("covariance matrix is not symmetric")
        if check:
            margin = self.physicality_margin
            if margin < -PHYSICALITY_TOL * norm:
                raise PhysicalityError(
                    f"covariance violates the uncertainty relation: min eig(V + i Omega/2) = {margin:.3e}")
            if np.linalg.eigvalsh(V)[0] < -PHYSICALITY_TOL * norm:
                raise PhysicalityError("covariance matrix is not positive semidefinite")

    @property
    def n_modes(self):
        return self.V.shape[0] // 2

    @property
    def omega(self):
        return symplectic_form(self.n_modes)

    @property
    def physicality_margin(self):
        """Smallest eigenvalue of ``V + i Omega / 2``."""
        return float(np.linalg.eigvalsh(self.V + 0.5j * self.omega)[0])


def kronecker_sum(A):
    n = A.shape[0]
    eye = np.eye(n)
    return np.kron(eye, A) + np.kron(A, eye)


def _solve_sylvester_vec(A, rhs):
    # (I (x) A + A (x) I) vec(X) = vec(rhs)  <=>  A X + X A^T = rhs
    K = kronecker_sum(A)
    X = unvec(solve_linear(K, vec(rhs)), A.shape[0])
    return X


def _symmetrize(X, what):
    scale = max(np.linalg.norm(X), 1e-300)
    if np.max(np.abs(X - X.T), initial=0.0) > ASYMMETRY_TOL * scale:
        raise NumericalError(f"{what} solution is asymmetric beyond tolerance before symmetrization")
    return 0.5 * (X + X.T)


def _check_residual(A, X, rhs, what):
    res = np.linalg.norm(A @ X + X @ A.T - rhs)
    bound = RESIDUAL_TOL * (np.linalg.norm(A) * np.linalg.norm(X) + np.linalg.norm(rhs))
    if res > bound:
        raise NumericalError(f"{what} residual {res:.3e} exceeds {bound:.3e} "
                             f"(condition {condition_number(kronecker_sum(A)):.3e})")


def solve_lyapunov(A, D, *, assume_stable=False):
    """Solve ``A V + V A^T = -D`` through the 36x36 (generally n^2) Kronecker sum."""
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or D.shape != A.shape:
        raise DimensionError(f"incompatible shapes A{A.shape}, D{D.shape}")
    if not assume_stable:
        abscissa = float(np.max(np.linalg.eigvals(A).real))
        if abscissa >= 0:
            raise StabilityError(f"drift matrix is not Hurwitz (spectral abscissa {abscissa:.3e})")
    V = _symmetrize(_solve_sylvester_vec(A, -D), "Lyapunov")
    _check_residual(A, V, -D, "Lyapunov")
    return V


def lyapunov_sensitivity(A, V, dA, dD=None):
    """Derivative of the Lyapunov solution for a perturbation ``(dA, dD)``.

    Solves ``A dV + dV A^T = -(dA V + V dA^T + dD)``.
    """
    A = np.asarray(A, dtype=float)
    dA = np.asarray(dA, dtype=float)
    rhs = dA @ V + V @ dA.T
    if dD is not None:
        rhs = rhs + np.asarray(dD, dtype=float)
    if not np.any(rhs):
        return np.zeros_like(V)
    dV = _symmetrize(_solve_sylvester_vec(A, -rhs), "sensitivity")
    _check_residual(A, dV, -rhs, "sensitivity")
    return dV
