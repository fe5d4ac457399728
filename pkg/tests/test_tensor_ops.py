import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from v2valloc import tensor_ops as T


def test_kronecker_identity_block():
    assert np.array_equal(T.kronecker(T.identity(2), [[1, 1]]),
                          [[1, 1, 0, 0], [0, 0, 1, 1]])


def test_kronecker_scalar_right_factor():
    assert np.array_equal(T.kronecker([[0, 1], [1, 0]], [[2]]), [[0, 2], [2, 0]])


def test_kronecker_toy_dims():
    Gt = np.triu(np.ones((4, 4)), 1)
    assert T.kronecker(Gt, T.identity(3)).shape == (12, 12)


def test_kronecker_overflow():
    with pytest.raises(T.SizeOverflowError):
        T.kronecker(np.ones((100, 100)), np.ones((100, 100)), max_entries=10**7)


def test_hadamard_examples():
    assert np.array_equal(T.hadamard([1, 0, 1], [1, 1, 0]), [1, 0, 0])
    assert np.array_equal(T.hadamard([2, 3], [4, 5]), [8, 15])
    assert np.array_equal(T.hadamard([3, 1, 4], [0, 0, 0]), [0, 0, 0])
    with pytest.raises(ValueError):
        T.hadamard([1, 2], [1, 2, 3])


def test_quad_form_trace_examples():
    A = np.arange(9.0).reshape(3, 3)
    assert T.quad_form_trace([0, 0, 0], A, A, [1, 2, 3]) == 0.0
    assert T.quad_form_trace([1, 1], np.eye(2), np.eye(2), [1, 1]) == 2.0
    with pytest.raises(ValueError):
        T.quad_form_trace([1, 1, 1], np.eye(2), np.eye(2), [1, 1])


def test_quad_form_trace_random():
    rng = np.random.default_rng(0)
    for _ in range(50):
        A, B = rng.normal(size=(2, 3, 3))
        x, y = rng.normal(size=(2, 3))
        assert T.allclose_rel(T.quad_form_trace(x, A, B, y), float(x @ (A * B) @ y))


def test_kron_compose_examples():
    I2 = T.identity(2)
    assert np.array_equal(T.kron_compose(I2, I2, I2, I2), T.identity(4))
    rng = np.random.default_rng(1)
    X, Y, W, Z = rng.integers(-3, 4, size=(4, 2, 2))
    assert np.array_equal(T.kron_compose(X, Y, W, Z), np.kron(X, W) @ np.kron(Y, Z))
    with pytest.raises(ValueError):
        T.kron_compose(np.ones((2, 3)), np.ones((2, 2)), I2, I2)


def test_rf_type2_coupling_toy():
    # (I_NL kron 1_Kx1)(Gt kron I_L)(I_NL kron 1_1xK) at toy dims
    N, K, L = 4, 3, 3
    Gt = np.triu(np.ones((N, N), dtype=int), 1)
    left = T.kronecker(T.identity(N * L), T.ones(K, 1))
    right = T.kronecker(T.identity(N * L), T.ones(1, K))
    M = left @ T.kronecker(Gt, T.identity(L)) @ right
    assert M.shape == (N * L * K, N * L * K)
    assert np.array_equal(M, T.kronecker(Gt, T.kronecker(T.identity(L), T.ones(K, K))))


def test_kron_matvec_matches_dense():
    rng = np.random.default_rng(2)
    for _ in range(30):
        A = rng.integers(0, 3, size=rng.integers(1, 4, size=2))
        B = rng.integers(0, 3, size=rng.integers(1, 4, size=2))
        x = rng.integers(0, 2, size=A.shape[1] * B.shape[1])
        assert np.array_equal(T.kron_matvec(A, B, x), np.kron(A, B) @ x)
        assert T.kron_quadratic(x, A.T @ A, B.T @ B) >= 0


def test_block_sum():
    assert np.array_equal(T.block_sum([1, 0, 0, 1], 2), [1, 1])
    with pytest.raises(ValueError):
        T.block_sum([1, 2, 3], 2)


small = st.integers(1, 4)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_bilinearity(data):
    r, c, r2, c2 = (data.draw(small) for _ in range(4))
    ints = st.integers(-5, 5)
    A = data.draw(arrays(np.int64, (r, c), elements=ints))
    A2 = data.draw(arrays(np.int64, (r, c), elements=ints))
    B = data.draw(arrays(np.int64, (r2, c2), elements=ints))
    assert np.array_equal(T.kronecker(A + A2, B), T.kronecker(A, B) + T.kronecker(A2, B))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_binary_closure(data):
    r, c, r2, c2 = (data.draw(small) for _ in range(4))
    bits = st.integers(0, 1)
    A = data.draw(arrays(np.uint8, (r, c), elements=bits))
    B = data.draw(arrays(np.uint8, (r2, c2), elements=bits))
    assert T.is_binary(T.kronecker(A, B))
    u = data.draw(arrays(np.uint8, (r,), elements=bits))
    v = data.draw(arrays(np.uint8, (r,), elements=bits))
    assert T.is_binary(T.hadamard(u, v))
