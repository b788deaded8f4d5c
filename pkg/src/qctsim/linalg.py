"""Dense complex linear algebra on multi-qudit spaces.

Operators are plain ``numpy`` arrays; the tensor-factor structure is carried
alongside as an explicit ``dims`` tuple wherever it matters.
"""
from __future__ import annotations

import functools
import string

import numpy as np

from ._validation import ATOL, DimensionError, check_dims, check_square


def tensor_product(*ops):
    """Kronecker product of one or more matrices, left to right.

    >>> tensor_product(np.eye(2), np.eye(2)).shape
    (4, 4)
    """
    if not ops:
        raise ValueError("tensor_product needs at least one operand")
    return functools.reduce(np.kron, (np.asarray(op, dtype=np.complex128) for op in ops))


def _factor_einsum_labels(n):
    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise DimensionError(f"too many tensor factors ({n})")
    return letters[:n], letters[n:2 * n]


def partial_trace(m, dims, keep):
    """Trace out every tensor factor of ``m`` not listed in ``keep``.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Operator on the space ``dims[0] x dims[1] x ...``.
    dims : sequence of int
        Tensor-factor dimensions, product equal to ``n``.
    keep : iterable of int
        Indices of the factors to retain, in any order. The result keeps them
        in their original relative order.

    Returns
    -------
    ndarray
        Operator on the kept factors.
    """
    m = check_square(m)
    dims = check_dims(dims, m.shape[0])
    keep = sorted(set(keep))
    if len(dims) < 2:
        raise DimensionError("partial_trace needs at least two tensor factors")
    if not keep or len(keep) == len(dims):
        raise ValueError("keep must be a nonempty proper subset of the factors")
    if keep[0] < 0 or keep[-1] >= len(dims):
        raise IndexError(f"keep indices {keep} out of range for {len(dims)} factors")

    rows, cols = _factor_einsum_labels(len(dims))
    out_cols = list(cols)
    for i in range(len(dims)):
        if i not in keep:
            out_cols[i] = rows[i]
    in_spec = rows + "".join(out_cols)
    out_spec = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    reduced = np.einsum(f"{in_spec}->{out_spec}", m.reshape(dims + dims))
    side = int(np.prod([dims[i] for i in keep]))
    return reduced.reshape(side, side)


def partial_transpose(m, dims, factors):
    """Transpose the listed tensor factors of ``m``."""
    m = check_square(m)
    dims = check_dims(dims, m.shape[0])
    n = len(dims)
    axes = list(range(2 * n))
    for i in factors:
        if not 0 <= i < n:
            raise IndexError(f"factor index {i} out of range for {n} factors")
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def permute_factors(m, dims, order):
    """Reorder the tensor factors of a square operator.

    ``order[k]`` is the index of the input factor placed in output slot ``k``.
    """
    m = check_square(m)
    dims = check_dims(dims, m.shape[0])
    order = list(order)
    if sorted(order) != list(range(len(dims))):
        raise ValueError(f"order {order} is not a permutation of {len(dims)} factors")
    n = len(dims)
    axes = order + [n + i for i in order]
    return m.reshape(dims + dims).transpose(axes).reshape(m.shape)


def haar_random_unitary(n, seed):
    """Haar-distributed ``n x n`` unitary, deterministic for a given seed.

    Draws a standard complex Gaussian matrix, takes its QR factorisation and
    rescales the columns of Q by the phases of diag(R) so the result is
    invariant under the QR sign ambiguity.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def psd_inverse_sqrt(m, atol=ATOL):
    """Return ``R = m^{-1/2}`` for a Hermitian positive definite ``m``.

    Raises
    ------
    numpy.linalg.LinAlgError
        If the smallest eigenvalue is below ``atol``. Eigenvalues are never
        clamped; a near-singular input signals a degenerate upstream sample.
    """
    m = check_square(m)
    if np.linalg.norm(m - m.conj().T) > atol * max(1.0, np.linalg.norm(m)):
        raise ValueError("psd_inverse_sqrt requires a Hermitian matrix")
    herm = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    if w.min() < atol:
        raise np.linalg.LinAlgError(
            f"matrix is singular within tolerance (smallest eigenvalue {w.min():.3e})"
        )
    return (v / np.sqrt(w)) @ v.conj().T


def is_unitary(u, atol=ATOL):
    u = check_square(u)
    return bool(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) <= atol)


def global_phase_overlap(a, b):
    """``|tr(a^dag b)| / n``; equals 1 iff two unitaries agree up to a global phase."""
    a = check_square(a, "a")
    b = check_square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(abs(np.trace(a.conj().T @ b)) / a.shape[0])


def phase_aligned_residual(a, b):
    """Frobenius distance between ``a`` and ``b`` after removing the best global phase."""
    a = check_square(a, "a")
    b = check_square(b, "b")
    inner = np.trace(a.conj().T @ b)
    phase = inner / abs(inner) if abs(inner) > 0 else 1.0
    return float(np.linalg.norm(a * phase - b))
