import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnoqcrb.errors import DimensionError, NumericalError, PhysicalityError, StabilityError
from magnoqcrb.fisher import ParametricGaussianModel
from magnoqcrb.lyapunov import GaussianState, kronecker_sum, lyapunov_sensitivity, solve_lyapunov
from magnoqcrb.model import SystemParams, linearize


def test_scalar_lyapunov():
    kappa, n = 3.0, 0.4
    V = solve_lyapunov(np.array([[-kappa]]), np.array([[kappa * (2 * n + 1)]]))
    assert V[0, 0] == pytest.approx((2 * n + 1) / 2, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 100), st.floats(-100, 100), st.floats(0.0, 3.0), st.floats(0.0, 50.0))
def test_decoupled_cavity_closed_form(kappa, delta, lam, n):
    A = np.array([[-kappa, delta], [-delta, -kappa]])
    D = kappa * lam * (2 * n + 1) * np.eye(2)
    V = solve_lyapunov(A, D)
    expect = lam * (2 * n + 1) / 2 * np.eye(2)
    assert np.max(np.abs(V - expect)) <= 1e-10 * max(np.max(np.abs(expect)), 1e-300) + 1e-300


def test_baseline_residual_and_psd():
    lin = linearize(SystemParams())
    V = solve_lyapunov(lin.A, lin.D)
    res = np.linalg.norm(lin.A @ V + V @ lin.A.T + lin.D)
    assert res <= 1e-8 * (np.linalg.norm(lin.A) * np.linalg.norm(V) + np.linalg.norm(lin.D))
    assert np.array_equal(V, V.T)
    assert np.linalg.eigvalsh(V)[0] > 0
    assert GaussianState(V, lin.R_mean).physicality_margin > 0


def test_unstable_drift_rejected():
    with pytest.raises(StabilityError):
        solve_lyapunov(np.diag([1.0, -1.0]), np.eye(2))


def test_shape_mismatch_rejected():
    with pytest.raises(DimensionError):
        solve_lyapunov(-np.eye(2), np.eye(3))


def test_kronecker_sum_vectorizes_sylvester():
    rng = np.random.default_rng(2)
    A, X = rng.standard_normal((3, 3)), rng.standard_normal((3, 3))
    lhs = kronecker_sum(A) @ X.reshape(-1, order="F")
    assert np.allclose(lhs, (A @ X + X @ A.T).reshape(-1, order="F"))


def test_sensitivity_zero_perturbation():
    lin = linearize(SystemParams())
    V = solve_lyapunov(lin.A, lin.D)
    assert not np.any(lyapunov_sensitivity(lin.A, V, np.zeros((6, 6)), np.zeros((6, 6))))


def test_sensitivity_scalar_quotient_rule():
    kappa, dk = 2.0, 1.0
    a, d = np.array([[-kappa]]), np.array([[kappa]])
    V = solve_lyapunov(a, d)
    dV = lyapunov_sensitivity(a, V, np.array([[-dk]]), np.array([[dk]]))
    # V = d / (-2 a) = 1/2 for any kappa, so dV = 0
    assert dV[0, 0] == pytest.approx(0.0, abs=1e-15)
    dV = lyapunov_sensitivity(a, V, np.array([[-dk]]), None)
    assert dV[0, 0] == pytest.approx(-V[0, 0] / kappa)


def test_sensitivity_matches_finite_difference_for_g_ma():
    p = SystemParams()
    model = ParametricGaussianModel(p, ("g_ma",))
    lin, st0 = model.evaluate()
    (dV,), _ = model.derivatives("analytic-lyapunov", lin=lin, state=st0)
    h = 1e-6 * p.g_ma
    up = solve_lyapunov(*_ad(p.replace(g_ma=p.g_ma + h)))
    dn = solve_lyapunov(*_ad(p.replace(g_ma=p.g_ma - h)))
    fd = (up - dn) / (2 * h)
    assert np.linalg.norm(dV - fd) <= 1e-5 * np.linalg.norm(fd)


def _ad(p):
    lin = linearize(p)
    return lin.A, lin.D


def test_gaussian_state_checks():
    with pytest.raises(PhysicalityError):
        GaussianState(0.3 * np.eye(2), np.zeros(2))
    with pytest.raises(NumericalError):
        GaussianState(np.array([[1.0, 0.2], [0.0, 1.0]]), np.zeros(2))
    with pytest.raises(DimensionError):
        GaussianState(np.eye(3), np.zeros(3))
    s = GaussianState(0.3 * np.eye(2), np.zeros(2), check=False)
    assert s.physicality_margin == pytest.approx(-0.2)
    assert GaussianState(0.5 * np.eye(2), np.zeros(2)).physicality_margin == pytest.approx(0.0, abs=1e-15)
    assert GaussianState(0.5 * np.eye(4), np.zeros(4)).n_modes == 2


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.0, 2 * math.pi))
def test_stable_feedback_points_give_symmetric_psd_covariance(r, theta):
    lin = linearize(SystemParams(feedback_r=r, feedback_theta=theta))
    if not lin.stable:
        return
    V = solve_lyapunov(lin.A, lin.D)
    assert np.array_equal(V, V.T)
    assert np.linalg.eigvalsh(V)[0] >= -1e-8 * np.linalg.norm(V)
