"""Input validation helpers shared across the package."""
from __future__ import annotations

import numbers

import numpy as np

#: Absolute tolerance applied to Frobenius-norm comparisons.
ATOL = 1e-9


class DimensionError(ValueError):
    """Raised when operand shapes or tensor-factor dimensions disagree."""


def check_tolerance(atol):
    if not isinstance(atol, numbers.Real) or not np.isfinite(atol) or atol <= 0:
        raise ValueError(f"tolerance must be a positive finite real, got {atol!r}")
    return float(atol)


def check_matrix(m, name="matrix"):
    """Return ``m`` as a 2-D complex array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def check_square(m, name="matrix"):
    arr = check_matrix(m, name)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_dims(dims, side=None):
    """Validate a list of tensor-factor dimensions.

    Every factor must be an integer >= 2 and, when ``side`` is given, the
    product of the factors must equal it.
    """
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("dims must contain at least one factor")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every tensor factor must have dimension >= 2, got {dims}")
    if side is not None and int(np.prod(dims)) != side:
        raise DimensionError(f"dims {dims} do not multiply to side length {side}")
    return dims


def check_dimension(d, minimum=2):
    if not isinstance(d, numbers.Integral) or isinstance(d, bool) or d < minimum:
        raise ValueError(f"dimension must be an integer >= {minimum}, got {d!r}")
    return int(d)


def check_probability(p, name="p"):
    if not isinstance(p, numbers.Real) or not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return float(p)


def check_density(rho, atol=ATOL):
    """Return ``rho`` as an array after checking it is a density matrix."""
    rho = check_square(rho, "density matrix")
    if np.linalg.norm(rho - rho.conj().T) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.6g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho
