import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qctsim.linalg import (
    haar_random_unitary,
    partial_trace,
    partial_transpose,
    permute_factors,
    psd_inverse_sqrt,
    tensor_product,
)
from qctsim.weyl import PAULI_X, PAULI_Z, clock, shift

from conftest import ATOL, random_density, random_matrix


def brute_partial_trace_first(m, da, db):
    out = np.zeros((db, db), dtype=complex)
    for i in range(db):
        for j in range(db):
            out[i, j] = sum(m[a * db + i, a * db + j] for a in range(da))
    return out


def test_tensor_identity():
    np.testing.assert_array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_blocks():
    m = tensor_product(PAULI_Z, PAULI_X)
    np.testing.assert_array_equal(m[:2, :2], PAULI_X)
    np.testing.assert_array_equal(m[2:, 2:], -PAULI_X)
    np.testing.assert_array_equal(m[:2, 2:], 0)


def test_tensor_qutrit_entry():
    omega = np.exp(2j * np.pi / 3)
    m = tensor_product(clock(3), shift(3))
    assert abs(m[4, 3] - omega) < 1e-15


def test_tensor_associative():
    a, b, c = (random_matrix(2, s) for s in range(3))
    np.testing.assert_allclose(np.kron(np.kron(a, b), c), tensor_product(a, np.kron(b, c)))


def test_partial_trace_product_state():
    rho = random_density(2, 1)
    tau = random_matrix(3, 2)
    out = partial_trace(np.kron(rho, tau), (2, 3), keep=[0])
    np.testing.assert_allclose(out, rho * np.trace(tau), atol=1e-12)


def test_partial_trace_bell(bell):
    for keep in ([0], [1]):
        np.testing.assert_allclose(partial_trace(bell, (2, 2), keep), np.eye(2) / 2, atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_partial_trace_matches_brute_force(seed):
    m = random_matrix(6, seed)
    np.testing.assert_allclose(partial_trace(m, (2, 3), [1]), brute_partial_trace_first(m, 2, 3),
                               atol=1e-12)
    assert abs(np.trace(partial_trace(m, (2, 3), [0])) - np.trace(m)) < 1e-12


def test_partial_trace_complementary_subsets():
    m = random_matrix(12, 3)
    dims = (2, 3, 2)
    a = partial_trace(m, dims, [0, 2])
    b = partial_trace(a, (2, 2), [0])
    assert abs(np.trace(b) - np.trace(m)) < 1e-12
    np.testing.assert_allclose(b, partial_trace(m, dims, [0]), atol=1e-12)


def test_partial_trace_errors():
    with pytest.raises(IndexError):
        partial_trace(np.eye(4), (2, 2), keep=[2])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2, 2), keep=[0, 1])


def test_partial_transpose_involution():
    m = random_matrix(6, 9)
    back = partial_transpose(partial_transpose(m, (2, 3), [1]), (2, 3), [1])
    np.testing.assert_array_equal(back, m)


def test_permute_factors_swaps_kron():
    a, b = random_matrix(2, 0), random_matrix(3, 1)
    np.testing.assert_allclose(permute_factors(np.kron(a, b), (2, 3), [1, 0]), np.kron(b, a))


def test_haar_scalar():
    u = haar_random_unitary(1, seed=4)
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 8, 25])
def test_haar_unitary_and_deterministic(n):
    u = haar_random_unitary(n, seed=n)
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= ATOL
    assert abs(abs(np.linalg.det(u)) - 1) <= ATOL
    assert np.array_equal(u, haar_random_unitary(n, seed=n))
    assert not np.array_equal(u, haar_random_unitary(n, seed=n + 1))


def test_psd_inverse_sqrt_simple():
    np.testing.assert_allclose(psd_inverse_sqrt(np.eye(2)), np.eye(2))
    np.testing.assert_allclose(psd_inverse_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]), atol=1e-15)


def test_psd_inverse_sqrt_singular():
    with pytest.raises(np.linalg.LinAlgError):
        psd_inverse_sqrt(np.diag([1.0, 1e-12]))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_psd_inverse_sqrt_properties(seed, n):
    a = random_matrix(n, seed)
    m = a.conj().T @ a + np.eye(n)
    r = psd_inverse_sqrt(m)
    assert np.linalg.norm(r - r.conj().T) <= ATOL
    assert np.linalg.norm(r @ m @ r - np.eye(n)) <= ATOL
    assert np.linalg.norm(r @ m - m @ r) <= ATOL
