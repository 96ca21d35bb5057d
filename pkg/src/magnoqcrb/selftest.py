"""Quick oracle checks, run by ``magnoqcrb selftest``."""

import numpy as np

from . import linalg, oracles
from .fisher import ParametricGaussianModel, fisher_set, qfim_rld, qfim_sld
from .lyapunov import GaussianState, solve_lyapunov
from .model import SystemParams


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _vec_kron():
    rng = np.random.default_rng(0)
    A, B, C = (rng.standard_normal((3, 3)) for _ in range(3))
    lhs = linalg.vec(A @ B @ C)
    err = np.linalg.norm(lhs - linalg.kron(C.T, A) @ linalg.vec(B)) / np.linalg.norm(lhs)
    return err <= 1e-12, f"relative error {err:.2e}"


def _penrose():
    rng = np.random.default_rng(1)
    M = rng.standard_normal((5, 3)) @ rng.standard_normal((3, 5))
    P = linalg.pinv(M)
    errs = [np.linalg.norm(M @ P @ M - M) / np.linalg.norm(M),
            np.linalg.norm(P @ M @ P - P) / np.linalg.norm(P),
            np.linalg.norm((M @ P).T - M @ P) / np.linalg.norm(M @ P),
            np.linalg.norm((P @ M).T - P @ M) / np.linalg.norm(P @ M)]
    return max(errs) <= 1e-9, f"worst identity error {max(errs):.2e}"


def _fock():
    worst = 0.0
    for n_bar, alpha in ((1.0, 0.0), (0.5, 1.2), (2.0, 0.7)):
        F = oracles.converged_fock_qfim(n_bar, alpha)
        V, R, dV, dR = oracles.gaussian_moments(n_bar, alpha)
        worst = max(worst, _rel(qfim_sld(GaussianState(V, R), dV, dR), F))
    return worst <= 1e-6, f"worst relative deviation {worst:.2e}"


def _vacuum():
    st = GaussianState(0.5 * np.eye(2), np.zeros(2))
    fs = float(qfim_sld(st, [np.zeros((2, 2))], [np.array([1.0, 0.0])])[0, 0])
    fr = float(qfim_rld(st, [np.zeros((2, 2))], [np.array([1.0, 0.0])])[0, 0].real)
    return abs(fs - 2) <= 1e-10 and abs(fr - 0.5) <= 1e-10, f"F_S = {fs:.12g}, F_R = {fr:.12g}"


def _decoupled_cavity():
    kappa, delta, lam, n = 2.0, 3.0, 1.6875, 0.3
    A = np.array([[-kappa, delta], [-delta, -kappa]])
    V = solve_lyapunov(A, kappa * lam * (2 * n + 1) * np.eye(2))
    err = _rel(V, lam * (2 * n + 1) / 2 * np.eye(2))
    return err <= 1e-10, f"relative error {err:.2e}"


def _backends():
    model = ParametricGaussianModel(SystemParams())
    lin, st = model.evaluate()
    u = 2 * np.pi * 1e6
    full, cov_only = [], []
    for backend in ("analytic-lyapunov", "central-fd"):
        dV, dR = model.derivatives(backend, lin=lin, state=st)
        dV = [u * x for x in dV]
        full.append(fisher_set(st, dV, [u * x for x in dR]))
        # displacement terms dominate; compare the covariance part on its own too
        cov_only.append(fisher_set(st, dV, [np.zeros_like(x) for x in dR]))
    worst = max(_rel(getattr(a[0], k), getattr(a[1], k))
                for a in (full, cov_only) for k in ("F_sld", "F_rld", "F_cfi"))
    return worst <= 1e-4, f"worst relative deviation {worst:.2e}"


CHECKS = (
    ("vec/kron identity", _vec_kron),
    ("pseudoinverse Penrose identities", _penrose),
    ("Fock-space SLD oracle", _fock),
    ("vacuum displacement QFI", _vacuum),
    ("decoupled cavity Lyapunov", _decoupled_cavity),
    ("derivative backend agreement", _backends),
)


def run_selftest():
    """List of ``(name, passed, detail)``."""
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn()
        except Exception as exc:  # report, do not crash the CLI
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
