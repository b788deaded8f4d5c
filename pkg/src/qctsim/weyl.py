"""Generalized Pauli (Weyl-Heisenberg) operators and the frame twirl."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._validation import DimensionError, check_dimension, check_square

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

#: Qubit frame in the order (1, sigma_x, sigma_y, sigma_z).
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


def clock(d):
    """Clock operator ``Z = sum_k w^k |k><k|`` with ``w = exp(2 pi i / d)``."""
    d = check_dimension(d)
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def shift(d):
    """Shift operator ``X = sum_k |k+1 mod d><k|``."""
    d = check_dimension(d)
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


@dataclass(frozen=True)
class WeylFrame:
    """The ``d**2`` operators ``Z^m X^n`` for a ``d``-level system.

    For ``d == 2`` the frame elements used by :meth:`elements` are the Pauli
    matrices in the order (1, sigma_x, sigma_y, sigma_z), with sigma_y stored
    directly instead of as the phased product ``Z X``. For ``d >= 3`` the
    elements are ``Z^m X^n`` in lexicographic ``(m, n)`` order.
    """

    d: int
    z: np.ndarray = field(init=False, repr=False, compare=False)
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        d = check_dimension(self.d)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "z", clock(d))
        object.__setattr__(self, "x", shift(d))
        self.z.setflags(write=False)
        self.x.setflags(write=False)

    @property
    def omega(self):
        return np.exp(2j * np.pi / self.d)

    def element(self, m, n):
        """``Z^m X^n`` for ``0 <= m, n < d``."""
        d = self.d
        if not (0 <= m < d and 0 <= n < d):
            raise IndexError(f"frame indices ({m}, {n}) out of range for d={d}")
        return np.linalg.matrix_power(self.z, m) @ np.linalg.matrix_power(self.x, n)

    def elements(self):
        """All frame elements in canonical coefficient order."""
        if self.d == 2:
            return [p.copy() for p in PAULIS]
        return [self.element(m, n) for m in range(self.d) for n in range(self.d)]

    def labels(self):
        if self.d == 2:
            return ["I", "X", "Y", "Z"]
        return [f"Z^{m}X^{n}" for m in range(self.d) for n in range(self.d)]


def frame_element(frame, m, n):
    """Return ``Z^m X^n`` of ``frame``; ``frame_element(f, 0, 0)`` is the identity."""
    return frame.element(m, n)


def _check_operand(f, frame):
    f = check_square(f)
    if f.shape[0] != frame.d:
        raise DimensionError(f"operator of side {f.shape[0]} does not match frame d={frame.d}")
    return f


def decompose_in_frame(f, frame):
    """Coefficients ``c_i = tr(G_i^dag f) / d`` of ``f`` in the frame.

    The frame is orthogonal with ``tr(G_a^dag G_b) = d delta_ab``, so
    ``f == reconstruct(c, frame)`` exactly.
    """
    f = _check_operand(f, frame)
    return np.array([np.vdot(g, f) / frame.d for g in frame.elements()])


def reconstruct(coeffs, frame):
    """Inverse of :func:`decompose_in_frame`: ``sum_i c_i G_i``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    elems = frame.elements()
    if coeffs.shape != (len(elems),):
        raise DimensionError(f"expected {len(elems)} coefficients, got shape {coeffs.shape}")
    return np.einsum("i,ijk->jk", coeffs, np.array(elems))


def twirl(f, frame):
    """``sum_{m,n} (Z^m X^n) f (Z^m X^n)^dag``, which equals ``d tr(f) 1``."""
    f = _check_operand(f, frame)
    out = np.zeros_like(f)
    for g in frame.elements():
        out += g @ f @ g.conj().T
    return out
