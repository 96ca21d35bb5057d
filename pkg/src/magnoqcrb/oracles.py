"""Independent reference computations in a truncated Fock basis.

These never touch the Gaussian formalism, so they serve as oracles for the
covariance-matrix formulas in :mod:`magnoqcrb.fisher`.
"""

import numpy as np
from scipy.linalg import expm

DEFAULT_CUTOFF = 60
_PAD = 40


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def thermal_state(n_bar, dim):
    n = np.arange(dim)
    if n_bar == 0:
        p = (n == 0).astype(float)
    else:
        p = (n_bar / (n_bar + 1.0)) ** n / (n_bar + 1.0)
    return np.diag(p)


def thermal_state_derivative(n_bar, dim):
    n = np.arange(dim, dtype=float)
    p = (n_bar / (n_bar + 1.0)) ** n / (n_bar + 1.0)
    return np.diag(p * (n / n_bar - (n + 1.0) / (n_bar + 1.0)))


def displaced_thermal(n_bar, alpha, cutoff=DEFAULT_CUTOFF):
    """``rho`` and ``(d rho / d n_bar, d rho / d alpha)`` for real ``alpha``.

    Work is done in a padded space and projected, which keeps the
    displacement operator accurate in the retained block.
    """
    big = cutoff + _PAD
    a = annihilation(big)
    gen = a.conj().T - a
    D = expm(alpha * gen)
    rho = D @ thermal_state(n_bar, big) @ D.conj().T
    d_nbar = D @ thermal_state_derivative(n_bar, big) @ D.conj().T
    d_alpha = gen @ rho - rho @ gen
    keep = slice(0, cutoff)
    return rho[keep, keep], (d_nbar[keep, keep], d_alpha[keep, keep])


def sld_qfim(rho, drhos, eig_tol=1e-14):
    """``F_kl = 2 sum_ij Re(<i|d_k rho|j><j|d_l rho|i>) / (l_i + l_j)``."""
    lam, U = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    mats = [U.conj().T @ d @ U for d in drhos]
    denom = lam[:, None] + lam[None, :]
    weight = np.where(denom > eig_tol, 2.0 / np.where(denom > eig_tol, denom, 1.0), 0.0)
    n = len(mats)
    F = np.empty((n, n))
    for k in range(n):
        for l in range(n):
            F[k, l] = np.sum(weight * (mats[k] * mats[l].T).real)
    return F


def fock_qfim(n_bar, alpha, cutoff=DEFAULT_CUTOFF):
    rho, drhos = displaced_thermal(n_bar, alpha, cutoff)
    return sld_qfim(rho, drhos)


def converged_fock_qfim(n_bar, alpha, cutoff=DEFAULT_CUTOFF, rtol=1e-7):
    """Fock QFIM at ``cutoff`` after checking it is unchanged at twice the cutoff."""
    F = fock_qfim(n_bar, alpha, cutoff)
    F2 = fock_qfim(n_bar, alpha, 2 * cutoff)
    if np.max(np.abs(F - F2)) > rtol * np.max(np.abs(F2)):
        raise RuntimeError(f"Fock truncation at {cutoff} not converged")
    return F


def gaussian_moments(n_bar, alpha):
    """Moments of the same state in the vacuum = I/2 convention, with derivatives."""
    V = (n_bar + 0.5) * np.eye(2)
    R = np.array([np.sqrt(2.0) * alpha, 0.0])
    dV = [np.eye(2), np.zeros((2, 2))]
    dR = [np.zeros(2), np.array([np.sqrt(2.0), 0.0])]
    return V, R, dV, dR


def central_difference(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)
