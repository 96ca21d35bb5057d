"""Quantum and classical Fisher information for Gaussian states.

Covariances use the vacuum = I/2 convention. The SLD kernel is
``4 V^T (x) V - Omega (x) Omega`` with the real symplectic form
``Omega = [[0, 1], [-1, 0]]``; with that form the minus sign is the one that
reproduces the thermal-state value ``1 / (n (n + 1))``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError, NumericalError
from .linalg import DEFAULT_PINV_TOL, hermitian_deviation, inv, kron, pinv, unvec, vec
from .lyapunov import GaussianState, lyapunov_sensitivity, solve_lyapunov
from .model import displacement_vector, linearize, steady_state

HERMITIAN_TOL = 1e-10
SLD, RLD = "SLD", "RLD"


def _check_inputs(state, dV, dR):
    if len(dV) != len(dR):
        raise DimensionError(f"got {len(dV)} covariance derivatives but {len(dR)} displacement derivatives")
    n = state.V.shape[0]
    dV = [np.asarray(x, dtype=float) for x in dV]
    dR = [np.asarray(x, dtype=float) for x in dR]
    for x in dV:
        if x.shape != (n, n):
            raise DimensionError(f"covariance derivative has shape {x.shape}, expected {(n, n)}")
    for x in dR:
        if x.shape != (n,):
            raise DimensionError(f"displacement derivative has shape {x.shape}, expected {(n,)}")
    return dV, dR


def _hermitian_pinv(M, rel_tol):
    # the kernels are Hermitian by construction; strip roundoff before and after
    P = pinv(0.5 * (M + M.conj().T), rel_tol)
    return 0.5 * (P + P.conj().T)


def _hermitize(F, what):
    dev = hermitian_deviation(F)
    if dev > HERMITIAN_TOL:
        raise NumericalError(f"{what} deviates from hermiticity by {dev:.3e}")
    return 0.5 * (F + F.conj().T)


def sld_kernel(V, omega):
    return 4.0 * kron(V.T, V) - kron(omega, omega)


def rld_kernel(V, omega):
    Z = 2.0 * V + 1j * omega
    return kron(Z.conj().T, Z)


def qfim_sld(state, dV, dR, *, pinv_tol=DEFAULT_PINV_TOL):
    """SLD quantum Fisher information matrix (real symmetric)."""
    dV, dR = _check_inputs(state, dV, dR)
    n = len(dV)
    if n == 0:
        return np.zeros((0, 0))
    V, omega = state.V, state.omega
    Minv = _hermitian_pinv(sld_kernel(V, omega), pinv_tol)
    Vinv = inv(V)
    vecs = np.column_stack([vec(x) for x in dV])
    moments = np.column_stack(dR)
    F = 2.0 * vecs.T @ Minv @ vecs + moments.T @ Vinv @ moments
    return _hermitize(np.real_if_close(F, tol=1e6).real, "SLD QFIM")


def qfim_rld(state, dV, dR, *, pinv_tol=DEFAULT_PINV_TOL):
    """RLD quantum Fisher information matrix (complex Hermitian).

    ``(2V + i Omega)`` is singular for pure states; the pseudoinverse is used
    throughout so such states are handled without error.
    """
    dV, dR = _check_inputs(state, dV, dR)
    n = len(dV)
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    V, omega = state.V, state.omega
    Z = 2.0 * V + 1j * omega
    Minv = _hermitian_pinv(rld_kernel(V, omega), pinv_tol)
    Zinv = _hermitian_pinv(Z, pinv_tol)
    vecs = np.column_stack([vec(x) for x in dV]).astype(complex)
    moments = np.column_stack(dR)
    F = 2.0 * vecs.conj().T @ Minv @ vecs + 2.0 * moments.T @ Zinv @ moments
    return _hermitize(F, "RLD QFIM")


def cfim_heterodyne(state, dV, dR, *, vacuum_penalty=1.0):
    """Classical Fisher information of heterodyne detection.

    The outcome covariance is ``V + vacuum_penalty * I``; 1.0 is the default,
    0.5 is the value consistent with the vacuum = I/2 convention.
    """
    if vacuum_penalty not in (1.0, 0.5):
        raise DomainError(f"vacuum_penalty must be 1.0 or 0.5, got {vacuum_penalty!r}")
    dV, dR = _check_inputs(state, dV, dR)
    n = len(dV)
    W = state.V + vacuum_penalty * np.eye(state.V.shape[0])
    Winv = inv(W)
    F = np.empty((n, n))
    for k in range(n):
        Ak = Winv @ dV[k]
        for l in range(n):
            F[k, l] = 0.5 * np.trace(Ak @ Winv @ dV[l]) + dR[k] @ Winv @ dR[l]
    return _hermitize(F, "heterodyne CFIM")


@dataclass(frozen=True)
class LogDerivativeCoefficients:
    """``L = l0 + l1 . R + R^T l2 R`` for one parameter."""

    l0: complex
    l1: np.ndarray
    l2: np.ndarray
    kind: str


def log_derivative_coefficients(state, dV_k, dR_k, kind=SLD, *, pinv_tol=DEFAULT_PINV_TOL):
    (dV_k,), (dR_k,) = _check_inputs(state, [dV_k], [dR_k])
    V, R, omega = state.V, state.R_mean, state.omega
    if kind == SLD:
        l2 = unvec(_hermitian_pinv(sld_kernel(V, omega), pinv_tol) @ vec(dV_k)).real
        l2 = 0.5 * (l2 + l2.T)
        l1 = inv(V) @ dR_k - 2.0 * l2 @ R
        l0 = -np.trace(V @ l2) - R @ l1 - R @ l2 @ R
        return LogDerivativeCoefficients(float(l0), l1, l2, SLD)
    if kind == RLD:
        Z = 2.0 * V + 1j * omega
        l2 = unvec(_hermitian_pinv(rld_kernel(V, omega), pinv_tol) @ vec(dV_k).astype(complex))
        l1 = 2.0 * _hermitian_pinv(Z, pinv_tol) @ dR_k - 2.0 * l2 @ R
        l0 = -0.5 * np.trace(Z @ l2) - R @ l1 - R @ l2 @ R
        return LogDerivativeCoefficients(complex(l0), l1, l2, RLD)
    raise DomainError(f"kind must be 'SLD' or 'RLD', got {kind!r}")


@dataclass(frozen=True)
class FisherSet:
    F_sld: np.ndarray
    F_rld: np.ndarray
    F_cfi: np.ndarray
    estimands: tuple = field(default=())

    def check(self, psd_tol=1e-9, dominance_tol=1e-8):
        """Raise :class:`NumericalError` if a structural invariant fails."""
        scale = np.linalg.norm(self.F_sld)
        if scale == 0:
            return self
        if np.linalg.eigvalsh(self.F_sld)[0] < -psd_tol * scale:
            raise NumericalError("SLD QFIM is not positive semidefinite")
        if np.linalg.eigvalsh(self.F_sld - self.F_cfi)[0] < -dominance_tol * scale:
            raise NumericalError("heterodyne CFIM exceeds the SLD QFIM")
        return self


def fisher_set(state, dV, dR, *, estimands=(), pinv_tol=DEFAULT_PINV_TOL, vacuum_penalty=1.0):
    return FisherSet(
        F_sld=qfim_sld(state, dV, dR, pinv_tol=pinv_tol),
        F_rld=qfim_rld(state, dV, dR, pinv_tol=pinv_tol),
        F_cfi=cfim_heterodyne(state, dV, dR, vacuum_penalty=vacuum_penalty),
        estimands=tuple(estimands),
    )


# --- parametrized model -----------------------------------------------------

ANALYTIC, CENTRAL_FD = "analytic-lyapunov", "central-fd"
BACKENDS = {ANALYTIC: ANALYTIC, "analytic": ANALYTIC, CENTRAL_FD: CENTRAL_FD}

_UNIT = {
    # constant drift-matrix derivatives of the coupling entries
    "g_ma": ((0, 3, 1.0), (1, 2, -1.0), (2, 1, 1.0), (3, 0, -1.0)),
    "g_md": ((2, 4, -1.0), (5, 3, 1.0)),
}
_DELTA_M = ((2, 3, 1.0), (3, 2, -1.0))


def _pattern(entries, n=6):
    M = np.zeros((n, n))
    for i, j, v in entries:
        M[i, j] = v
    return M


class ParametricGaussianModel:
    """Maps estimand values to the steady Gaussian state and its derivatives.

    ``g_md`` is always handled as an independent coordinate; if ``params``
    is given through a bare ``J_md`` the realized coupling at the operating
    point is adopted as the target.
    """

    def __init__(self, params, estimands=("g_ma", "g_md")):
        if params.g_md is None:
            params = params.replace(g_md=steady_state(params).g_md)
        for name in estimands:
            if not isinstance(getattr(params, name, None), (int, float)) or name == "repetitions":
                raise DomainError(f"{name!r} is not a continuous model parameter")
        self.params = params
        self.estimands = tuple(estimands)

    @property
    def theta(self):
        return np.array([getattr(self.params, name) for name in self.estimands], dtype=float)

    def at(self, theta):
        return self.params.replace(**dict(zip(self.estimands, map(float, theta))))

    def evaluate(self, theta=None, *, check=True):
        params = self.params if theta is None else self.at(theta)
        lin = linearize(params)
        V = solve_lyapunov(lin.A, lin.D)
        return lin, GaussianState(V, lin.R_mean, check=check)

    def _step(self, k, rel_step):
        return rel_step * max(abs(self.theta[k]), 1e-300) if self.theta[k] else rel_step

    def _shifted(self, k, h):
        up, down = self.theta.copy(), self.theta.copy()
        up[k] += h
        down[k] -= h
        return self.at(up), self.at(down)

    def derivatives(self, backend=ANALYTIC, rel_step=1e-6, *, lin=None, state=None):
        """Return ``(dV, dR)``, one entry per estimand.

        ``analytic-lyapunov``: ``dV`` from the sensitivity Lyapunov equation; the
        steady-state dependence (``dR`` and the magnon-detuning shift inside
        ``dA``) by central differences. ``central-fd``: everything by
        central differences of the full pipeline.
        """
        if backend not in BACKENDS:
            raise DomainError(f"unknown derivative backend {backend!r}")
        backend = BACKENDS[backend]
        if lin is None or state is None:
            lin, state = self.evaluate(check=False)
        dV, dR = [], []
        for k, name in enumerate(self.estimands):
            h = self._step(k, rel_step)
            p_up, p_down = self._shifted(k, h)
            if backend == CENTRAL_FD:
                lin_up, lin_dn = linearize(p_up), linearize(p_down)
                st_up = GaussianState(solve_lyapunov(lin_up.A, lin_up.D), lin_up.R_mean, check=False)
                st_dn = GaussianState(solve_lyapunov(lin_dn.A, lin_dn.D), lin_dn.R_mean, check=False)
                dV.append((st_up.V - st_dn.V) / (2 * h))
                dR.append((lin_up.R_mean - lin_dn.R_mean) / (2 * h))
                continue
            ss_up, ss_dn = steady_state(p_up), steady_state(p_down)
            dR.append((displacement_vector(ss_up) - displacement_vector(ss_dn)) / (2 * h))
            if name in _UNIT:
                d_delta = (ss_up.delta_m_eff - ss_dn.delta_m_eff) / (2 * h)
                dA = _pattern(_UNIT[name]) + d_delta * _pattern(_DELTA_M)
                dD = None
            else:
                lin_up, lin_dn = linearize(p_up, ss_up), linearize(p_down, ss_dn)
                dA = (lin_up.A - lin_dn.A) / (2 * h)
                dD = (lin_up.D - lin_dn.D) / (2 * h)
            dV.append(lyapunov_sensitivity(lin.A, state.V, dA, dD))
        return dV, dR

