"""Scalar Cramér-Rao bounds built from Fisher information matrices."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnidentifiableError
from .linalg import trace_norm

SINGULAR_DET_TOL = 1e-14


def _check_repetitions(W):
    if int(W) != W or W < 1:
        raise DomainError(f"repetitions must be a positive integer, got {W!r}")
    return int(W)


def _safe_inverse(F, what):
    F = np.atleast_2d(np.asarray(F))
    if F.ndim != 2 or F.shape[0] != F.shape[1] or F.shape[0] == 0:
        raise DomainError(f"{what} must be a non-empty square matrix, got shape {F.shape}")
    if not np.all(np.isfinite(F)):
        raise DomainError(f"{what} has non-finite entries")
    n = F.shape[0]
    scale = np.linalg.norm(F, 2)
    det = abs(np.linalg.det(F))
    if scale == 0 or det < SINGULAR_DET_TOL * scale ** n:
        # eigvector of the smallest eigenvalue modulus is the unresolved combination
        w, U = np.linalg.eigh(0.5 * (F + F.conj().T))
        null = U[:, np.argmin(np.abs(w))]
        null = null * np.exp(-1j * np.angle(null[np.argmax(np.abs(null))]))
        raise UnidentifiableError(f"{what} is singular; parameters are not jointly identifiable",
                                  np.real_if_close(null))
    return np.linalg.inv(F)


def bound_sld(F_sld, W=1):
    W = _check_repetitions(W)
    return float(np.trace(_safe_inverse(F_sld, "SLD QFIM")).real) / W


def bound_rld(F_rld, W=1):
    W = _check_repetitions(W)
    Finv = _safe_inverse(np.asarray(F_rld, dtype=complex), "RLD QFIM")
    return float(np.trace(Finv.real) + trace_norm(Finv.imag)) / W


def bound_mi(c_sld, c_rld):
    return min(c_sld, c_rld)


def bound_classical(F_cfi, W=1):
    W = _check_repetitions(W)
    return float(np.trace(_safe_inverse(F_cfi, "heterodyne CFIM")).real) / W


def per_param_floors(F_sld, F_rld, W=1):
    """Variance floors for each parameter, as ``(sld_floors, rld_floors)``."""
    W = _check_repetitions(W)
    S = np.diag(_safe_inverse(F_sld, "SLD QFIM")).real / W
    Rinv = np.diag(_safe_inverse(np.asarray(F_rld, dtype=complex), "RLD QFIM"))
    R = (Rinv.real + np.abs(Rinv.imag)) / W
    return S, R


@dataclass(frozen=True)
class BoundsReport:
    c_sld: float
    c_rld: float
    c_mi: float
    c_cfi: float
    ratio_r_over_s: float
    floors_sld: np.ndarray
    floors_rld: np.ndarray
    W: int

    @property
    def rld_selected(self):
        return self.ratio_r_over_s < 1.0

    def as_dict(self):
        return {"c_sld": self.c_sld, "c_rld": self.c_rld, "c_mi": self.c_mi,
                "c_cfi": self.c_cfi, "ratio": self.ratio_r_over_s}


def compute_bounds(fisher, W=1):
    """All scalar bounds for a :class:`~magnoqcrb.fisher.FisherSet`."""
    c_sld = bound_sld(fisher.F_sld, W)
    c_rld = bound_rld(fisher.F_rld, W)
    floors_s, floors_r = per_param_floors(fisher.F_sld, fisher.F_rld, W)
    return BoundsReport(
        c_sld=c_sld,
        c_rld=c_rld,
        c_mi=bound_mi(c_sld, c_rld),
        c_cfi=bound_classical(fisher.F_cfi, W),
        ratio_r_over_s=c_rld / c_sld,
        floors_sld=floors_s,
        floors_rld=floors_r,
        W=int(W),
    )
