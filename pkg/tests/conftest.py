import numpy as np
import pytest

ATOL = 1e-9


def random_matrix(n, seed, m=None):
    rng = np.random.default_rng(seed)
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_density(n, seed):
    a = random_matrix(n, seed)
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def brute_choi(channel):
    """Choi matrix by definition: sum_ij L(|i><j|) (x) |i><j|."""
    d_in = channel.d_in
    out = 0
    for i in range(d_in):
        for j in range(d_in):
            eij = np.zeros((d_in, d_in), dtype=complex)
            eij[i, j] = 1
            image = sum(k @ eij @ k.conj().T for k in channel.kraus)
            out = out + np.kron(image, eij)
    return out


@pytest.fixture
def bell():
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return np.outer(phi, phi.conj())
