import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from magnoqcrb import linalg
from magnoqcrb.errors import DimensionError, DomainError, SingularMatrixError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def square(n):
    return arrays(np.float64, (n, n), elements=finite)


def test_vec_is_column_major():
    assert list(linalg.vec(np.array([[1, 2], [3, 4]]))) == [1, 3, 2, 4]
    assert list(linalg.vec(np.array([[5]]))) == [5]


def test_vec_rejects_non_square():
    with pytest.raises(DimensionError):
        linalg.vec(np.ones((2, 3)))


def test_unvec_roundtrip():
    M = np.arange(9.0).reshape(3, 3)
    assert np.array_equal(linalg.unvec(linalg.vec(M)), M)
    with pytest.raises(DimensionError):
        linalg.unvec(np.ones(5))


@settings(max_examples=50, deadline=None)
@given(square(3), square(3), square(3))
def test_vec_kron_identity(A, B, C):
    lhs = linalg.vec(A @ B @ C)
    rhs = linalg.kron(C.T, A) @ linalg.vec(B)
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(np.linalg.norm(lhs), 1e-300) + 1e-12


def test_kron_examples():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(linalg.kron(np.diag([2, 3]), np.diag([5, 7])), np.diag([10, 14, 15, 21]))
    om = linalg.symplectic_form(1)
    X = np.random.default_rng(0).standard_normal((2, 2))
    assert np.allclose(linalg.kron(om, om) @ linalg.vec(X), linalg.vec(om @ X @ om.T), atol=1e-14)


def test_pinv_examples():
    assert np.allclose(linalg.pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    M = np.array([[1, 1j], [-1j, 1]])
    assert np.allclose(linalg.pinv(M), 0.25 * M, atol=1e-14)
    R = np.random.default_rng(1).standard_normal((4, 4)) + 4 * np.eye(4)
    assert np.allclose(linalg.pinv(R), np.linalg.inv(R), rtol=1e-10, atol=1e-12)
    assert np.array_equal(linalg.pinv(np.zeros((3, 2))), np.zeros((2, 3)))


def test_pinv_rejects_bad_tolerance():
    with pytest.raises(DomainError):
        linalg.pinv(np.eye(2), 0.0)


def _penrose_errors(M, P):
    def rel(x, y):
        return np.linalg.norm(x - y) / max(np.linalg.norm(y), 1e-300)
    return (rel(M @ P @ M, M), rel(P @ M @ P, P),
            rel((M @ P).conj().T, M @ P), rel((P @ M).conj().T, P @ M))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**32 - 1), st.booleans())
def test_pinv_penrose_identities(m, n, seed, complex_):
    rng = np.random.default_rng(seed)
    k = rng.integers(1, min(m, n) + 1)
    M = rng.standard_normal((m, k)) @ rng.standard_normal((k, n))
    if complex_:
        M = M + 1j * rng.standard_normal((m, k)) @ rng.standard_normal((k, n))
    assert max(_penrose_errors(M, linalg.pinv(M))) <= 1e-9


@pytest.mark.parametrize("M", [
    np.random.default_rng(3).standard_normal((4, 4)),
    np.random.default_rng(4).standard_normal((5, 3)),
    np.random.default_rng(5).standard_normal((3, 5)),
    np.diag([2.0, 0.0]),
    np.array([[1, 1j], [-1j, 1]]),
])
def test_tikhonov_converges_monotonically(M):
    P = linalg.pinv(M)
    devs = [np.linalg.norm(linalg.pinv_tikhonov(M, d) - P) / np.linalg.norm(P) for d in (1e-8, 1e-10, 1e-12)]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 1e-9


def test_trace_norm_examples():
    assert linalg.trace_norm(np.diag([1.0, -2.0])) == pytest.approx(3.0)
    assert linalg.trace_norm(np.zeros((3, 3))) == 0.0
    M = np.random.default_rng(6).standard_normal((3, 3)) + 1j * np.random.default_rng(7).standard_normal((3, 3))
    oracle = np.sum(np.sqrt(np.clip(np.linalg.eigvalsh(M.conj().T @ M), 0, None)))
    assert linalg.trace_norm(M) == pytest.approx(oracle, rel=1e-12)


def _unitary(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_trace_norm_unitary_invariance(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, W = _unitary(rng, n), _unitary(rng, n)
    assert linalg.trace_norm(U @ M @ W) == pytest.approx(linalg.trace_norm(M), rel=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_symplectic_form(n):
    om = linalg.symplectic_form(n)
    assert om.shape == (2 * n, 2 * n)
    assert np.array_equal(om.T, -om)
    assert np.array_equal(om @ om, -np.eye(2 * n))
    assert np.array_equal(om.T @ om, np.eye(2 * n))
    assert np.array_equal(om[:2, :2], [[0, 1], [-1, 0]])


def test_symplectic_form_rejects_zero_modes():
    with pytest.raises(DomainError):
        linalg.symplectic_form(0)


def test_solve_linear_examples():
    b = np.array([3.0, -1.0])
    assert np.array_equal(linalg.solve_linear(np.eye(2), b), b)
    assert np.allclose(linalg.solve_linear(np.diag([2.0, 4.0]), [2.0, 8.0]), [1.0, 2.0])


def test_solve_linear_residual_36():
    rng = np.random.default_rng(8)
    M = rng.standard_normal((36, 36)) + 6 * np.eye(36)
    b = rng.standard_normal(36)
    x = linalg.solve_linear(M, b)
    assert np.linalg.norm(M @ x - b) <= 1e-9 * (np.linalg.norm(M) * np.linalg.norm(x) + np.linalg.norm(b))


def test_solve_linear_singular_reports_condition():
    with pytest.raises(SingularMatrixError) as info:
        linalg.solve_linear(np.array([[1.0, 2.0], [2.0, 4.0]]), [1.0, 1.0])
    assert info.value.condition > 1e14


def test_hermitian_checks():
    H = np.array([[1, 2j], [-2j, 3]])
    assert linalg.is_hermitian(H)
    assert not linalg.is_hermitian(H + np.array([[0, 1e-6], [0, 0]]))
    assert linalg.hermitian_deviation(H) == 0.0
