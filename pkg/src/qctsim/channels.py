"""Quantum channels in Kraus form.

Choi matrices use the unnormalised, output-factor-first convention

    J(L) = sum_ij L(|i><j|) (x) |i><j|,

so ``tr J = d_in`` and ``J = sum_m vec(F_m) vec(F_m)^dag`` with row-major
``vec``. Two channels are considered equal when their Choi matrices agree in
Frobenius norm; Kraus sets are never canonicalised.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import weyl
from ._validation import (
    ATOL,
    DimensionError,
    check_dimension,
    check_dims,
    check_matrix,
    check_probability,
    check_square,
)
from .linalg import haar_random_unitary, partial_transpose, permute_factors


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """A completely positive map ``rho -> sum_m F_m rho F_m^dag``.

    Trace preservation is not enforced at construction; use
    :func:`validate_cptp`. The stored operators are read-only.
    """

    kraus: tuple
    label: str = ""

    def __post_init__(self):
        ops = [check_matrix(k, "Kraus operator").copy() for k in self.kraus]
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        for k in ops:
            if k.shape != shape:
                raise DimensionError(f"mixed Kraus shapes {shape} and {k.shape}")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", tuple(ops))

    @property
    def d_in(self):
        return self.kraus[0].shape[1]

    @property
    def d_out(self):
        return self.kraus[0].shape[0]

    def __len__(self):
        return len(self.kraus)

    def __repr__(self):
        return (f"KrausChannel(label={self.label!r}, d_in={self.d_in}, "
                f"d_out={self.d_out}, n_kraus={len(self)})")


class CPTPReport(NamedTuple):
    deviation: float
    passed: bool


def identity_channel(d):
    d = check_dimension(d, minimum=1)
    return KrausChannel((np.eye(d),), label="identity")


def unitary_channel(u, label="unitary"):
    return KrausChannel((check_square(u),), label=label)


def validate_cptp(channel, atol=ATOL):
    """Check ``||sum_m F_m^dag F_m - 1||_F <= atol``."""
    total = sum(k.conj().T @ k for k in channel.kraus)
    deviation = float(np.linalg.norm(total - np.eye(channel.d_in)))
    return CPTPReport(deviation, deviation <= atol)


def choi_of(channel):
    """Unnormalised Choi matrix on ``output (x) input``."""
    vecs = np.array([k.reshape(-1) for k in channel.kraus])
    return vecs.T @ vecs.conj()


def choi_distance(a, b):
    """Frobenius distance between the Choi matrices of two channels."""
    ja = a if isinstance(a, np.ndarray) else choi_of(a)
    jb = b if isinstance(b, np.ndarray) else choi_of(b)
    if ja.shape != jb.shape:
        raise DimensionError(f"Choi shapes differ: {ja.shape} vs {jb.shape}")
    return float(np.linalg.norm(ja - jb))


def identity_choi(d):
    return choi_of(identity_channel(d))


def apply(channel, rho):
    """Apply ``channel`` to the density matrix ``rho``."""
    rho = check_square(rho, "state")
    if rho.shape[0] != channel.d_in:
        raise DimensionError(f"state of side {rho.shape[0]} but channel input is {channel.d_in}")
    return sum(k @ rho @ k.conj().T for k in channel.kraus)


def channel_tensor(a, b):
    """The product map ``a (x) b`` with Kraus set ``{E_mu (x) F_m}``."""
    ops = [np.kron(e, f) for e in a.kraus for f in b.kraus]
    label = f"({a.label})x({b.label})" if a.label or b.label else ""
    return KrausChannel(tuple(ops), label=label)


def channel_compose(after, before):
    """The map ``after o before`` with Kraus set ``{A_i B_j}``."""
    if after.d_in != before.d_out:
        raise DimensionError(
            f"cannot compose: inner dimensions {before.d_out} -> {after.d_in} differ"
        )
    ops = [a @ b for a in after.kraus for b in before.kraus]
    return KrausChannel(tuple(ops), label=f"{after.label}o{before.label}")


def entanglement_fidelity(channel):
    """``<Phi|(L (x) id)(|Phi><Phi|)|Phi> = sum_m |tr F_m|^2 / d^2``."""
    if channel.d_in != channel.d_out:
        raise DimensionError("entanglement fidelity needs d_in == d_out")
    d = channel.d_in
    value = sum(abs(np.trace(k)) ** 2 for k in channel.kraus) / d**2
    return float(min(max(value, 0.0), 1.0))


def choi_entanglement_fidelity(choi, d):
    """Entanglement fidelity read off an unnormalised Choi matrix of a d->d map."""
    phi = np.eye(d).reshape(-1) / np.sqrt(d)
    return float(np.real(phi.conj() @ choi @ phi) / d)


def random_cptp(d, rank, seed):
    """Random channel from a Stinespring dilation of a Haar unitary.

    The first ``d`` columns of a Haar unitary on ``d * rank`` form an isometry
    ``V``; its ``rank`` row blocks of height ``d`` are the Kraus operators.
    ``rank=1`` yields a Haar-random unitary channel.
    """
    d = check_dimension(d, minimum=1)
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    iso = haar_random_unitary(d * rank, seed)[:, :d]
    ops = tuple(iso[k * d:(k + 1) * d, :] for k in range(rank))
    return KrausChannel(ops, label=f"random(d={d},rank={rank},seed={seed})")


def depolarizing(p, d=2):
    """``rho -> (1 - p) rho + p tr(rho) 1/d`` written over the Weyl frame."""
    p = check_probability(p)
    elems = weyl.WeylFrame(d).elements()
    w0 = 1.0 - p * (d**2 - 1) / d**2
    ops = [np.sqrt(w0) * elems[0]] + [np.sqrt(p / d**2) * g for g in elems[1:]]
    return KrausChannel(tuple(ops), label=f"depolarizing({p:g})")


def amplitude_damping(gamma):
    gamma = check_probability(gamma, "gamma")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return KrausChannel((k0, k1), label=f"amplitude_damping({gamma:g})")


def phase_damping(lam):
    lam = check_probability(lam, "lambda")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - lam)]])
    k1 = np.array([[0, 0], [0, np.sqrt(lam)]])
    return KrausChannel((k0, k1), label=f"phase_damping({lam:g})")


def bit_flip(p):
    p = check_probability(p)
    return KrausChannel((np.sqrt(1 - p) * weyl.PAULI_I, np.sqrt(p) * weyl.PAULI_X),
                        label=f"bit_flip({p:g})")


_NAMED = {
    "depolarizing": depolarizing,
    "amplitude_damping": amplitude_damping,
    "phase_damping": phase_damping,
    "bit_flip": bit_flip,
}


def named_channel(name, *params, **kwargs):
    """Look up a textbook qubit channel by name.

    Known names: ``depolarizing``, ``amplitude_damping``, ``phase_damping``,
    ``bit_flip``. Each takes a single probability in [0, 1].
    """
    try:
        factory = _NAMED[name]
    except KeyError:
        raise ValueError(f"unknown channel {name!r}; choose from {sorted(_NAMED)}") from None
    return factory(*params, **kwargs)


def product_choi_reorder(choi_a, choi_b, a_dims, b_dims):
    """Choi of ``a (x) b`` from the individual Choi matrices.

    ``a_dims`` and ``b_dims`` are ``(d_out, d_in)`` pairs. The plain Kronecker
    product is ordered ``(outA, inA, outB, inB)``; the product-channel Choi is
    ``(outA, outB, inA, inB)``.
    """
    dims = (a_dims[0], a_dims[1], b_dims[0], b_dims[1])
    return permute_factors(np.kron(choi_a, choi_b), dims, [0, 2, 1, 3])


def negativity(rho, dims, transpose=1):
    """Sum of |negative eigenvalues| of the partial transpose of ``rho``.

    ``dims`` must describe a two-factor cut ``(d_A, d_B)``; ``transpose`` picks
    the factor that is transposed (the value does not depend on the choice).
    """
    rho = check_square(rho, "state")
    dims = check_dims(dims, rho.shape[0])
    if len(dims) != 2:
        raise DimensionError(f"negativity needs a bipartition, got dims {dims}")
    pt = partial_transpose(rho, dims, [transpose])
    w = np.linalg.eigvalsh((pt + pt.conj().T) / 2)
    return max(0.0, float(-w[w < 0].sum()))
