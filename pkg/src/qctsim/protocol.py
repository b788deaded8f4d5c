"""Channel-transparency protocol on ancillas ``A``, ``B`` and system ``S``.

Factor order is always ``A (x) B (x) S``, each factor of dimension ``d``.
The protocol prepares ``|psi0 psi0>`` on ``AB`` (``psi0`` the uniform
superposition), applies the entangling unitary ``U``, lets noise
``Phi_AB (x) Lambda_S`` act, then applies ``U^dag`` followed by the correction
``V``. For any ``Lambda`` the reduced map on ``S`` is the identity channel.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import weyl
from ._validation import ATOL, DimensionError, check_dimension
from .channels import (
    KrausChannel,
    channel_tensor,
    choi_of,
    entanglement_fidelity,
    identity_choi,
    validate_cptp,
)
from .linalg import partial_trace, permute_factors, psd_inverse_sqrt, tensor_product

VARIANTS = ("eq3_unitary", "hadamard_conjugated", "projective_kraus")
AB_ORDERS = ("AB", "BA")
ANCILLA_KINDS = (
    "identity",
    "mixed_unitary_in_class",
    "unitary_in_class",
    "general_in_class",
    "out_of_class_control",
)
IN_CLASS_KINDS = ANCILLA_KINDS[:4]

#: Joint Choi matrices beyond this system dimension are not formed by default.
MAX_FACTORIZATION_DIM = 3

_PLUS = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=np.complex128) / np.sqrt(2)


def _proj(ket):
    return np.outer(ket, ket.conj())


def psi0(d):
    """Uniform superposition ``sum_k |k> / sqrt(d)``."""
    return np.full(d, 1 / np.sqrt(d), dtype=np.complex128)


def ancilla_state(d):
    """Density matrix of ``|psi0> (x) |psi0>`` on ``AB``."""
    d = check_dimension(d)
    return _proj(np.kron(psi0(d), psi0(d)))


def _controlled(d, base, control, n_factors=3, target=2):
    """``sum_k |k><k|_control (x) base^k_target`` on ``n_factors`` qudits."""
    out = np.zeros((d**n_factors,) * 2, dtype=np.complex128)
    for k in range(d):
        factors = [np.eye(d)] * n_factors
        factors[control] = _proj(np.eye(d)[k])
        factors[target] = np.linalg.matrix_power(base, k)
        out += tensor_product(*factors)
    return out


def build_u_qubit():
    """``|00><00| 1 + |01><01| s_z + |10><10| s_x - i |11><11| s_y``."""
    e = np.eye(2)
    blocks = [
        ((0, 0), weyl.PAULI_I),
        ((0, 1), weyl.PAULI_Z),
        ((1, 0), weyl.PAULI_X),
        ((1, 1), -1j * weyl.PAULI_Y),
    ]
    return sum(np.kron(_proj(np.kron(e[a], e[b])), g) for (a, b), g in blocks)


def build_u_qudit(d):
    """``(1_B (x) C_X^{AS}) (1_A (x) C_Z^{BS})`` for any ``d >= 2``."""
    d = check_dimension(d)
    c_x = _controlled(d, weyl.shift(d), control=0)
    c_z = _controlled(d, weyl.clock(d), control=1)
    return c_x @ c_z


def build_u(d):
    """Entangling unitary on ``A (x) B (x) S``.

    For ``d == 2`` the projector-sum form is used directly; it coincides
    entrywise with :func:`build_u_qudit` at ``d == 2``.
    """
    d = check_dimension(d)
    return build_u_qubit() if d == 2 else build_u_qudit(d)


def branch_states(d):
    """Ancilla kets ``|psi_m> (x) |psi_n>`` keyed by ``(m, n)``.

    ``|psi_m>_A = Z^m |psi0>`` and ``|psi_n>_B = Z^{n(d-1) mod d} |psi0>``.
    """
    z = weyl.clock(d)
    p0 = psi0(d)
    out = {}
    for m in range(d):
        a = np.linalg.matrix_power(z, m) @ p0
        for n in range(d):
            b = np.linalg.matrix_power(z, (n * (d - 1)) % d) @ p0
            out[m, n] = np.kron(a, b)
    return out


def _correction_terms(d):
    """``(ancilla projector, system correction)`` pairs of the V step."""
    if d == 2:
        # |++> 1, |+-> s_x, |--> s_y, |-+> s_z, first label on A
        return [
            (_proj(np.kron(_PLUS, _PLUS)), weyl.PAULI_I),
            (_proj(np.kron(_PLUS, _MINUS)), weyl.PAULI_X),
            (_proj(np.kron(_MINUS, _MINUS)), weyl.PAULI_Y),
            (_proj(np.kron(_MINUS, _PLUS)), weyl.PAULI_Z),
        ]
    frame = weyl.WeylFrame(d)
    return [
        (_proj(ket), frame.element(m, n).conj().T)
        for (m, n), ket in branch_states(d).items()
    ]


def _swap_ab(op, d):
    return permute_factors(op, (d, d, d), [1, 0, 2])


def build_v(d, variant="eq3_unitary", ab_order="AB"):
    """Correction step of the protocol.

    Parameters
    ----------
    d : int
        System dimension.
    variant : {'eq3_unitary', 'hadamard_conjugated', 'projective_kraus'}
        ``eq3_unitary`` is the projector-sum unitary (the qudit form for
        ``d >= 3``); ``hadamard_conjugated`` is ``H^{x3} U H^{x3}`` and only
        exists for ``d == 2``; ``projective_kraus`` returns the individual
        projector-times-correction terms as a CPTP :class:`KrausChannel`.
    ab_order : {'AB', 'BA'}
        Which ancilla carries the first label of each projector. ``'BA'``
        conjugates the result by the swap of ``A`` and ``B``.

    Returns
    -------
    ndarray or KrausChannel
    """
    d = check_dimension(d)
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    if ab_order not in AB_ORDERS:
        raise ValueError(f"unknown ab_order {ab_order!r}; choose from {AB_ORDERS}")
    if variant == "hadamard_conjugated" and d != 2:
        raise ValueError("the hadamard_conjugated variant is only defined for d == 2")

    if variant == "hadamard_conjugated":
        h3 = tensor_product(weyl.HADAMARD, weyl.HADAMARD, weyl.HADAMARD)
        terms = [h3 @ build_u(2) @ h3]
    else:
        terms = [np.kron(p, c) for p, c in _correction_terms(d)]
    if ab_order == "BA":
        terms = [_swap_ab(t, d) for t in terms]

    if variant == "projective_kraus":
        return KrausChannel(tuple(terms), label=f"projective_v(d={d},{ab_order})")
    return sum(terms)


@dataclass(frozen=True, eq=False)
class ProtocolAssembly:
    """Noise-independent parts of the protocol for one configuration."""

    d: int
    u: np.ndarray
    v: object
    ancilla_state: np.ndarray
    v_variant: str = "eq3_unitary"
    ab_order: str = "AB"

    @classmethod
    def build(cls, d, variant="eq3_unitary", ab_order="AB"):
        d = check_dimension(d)
        return cls(d, build_u(d), build_v(d, variant, ab_order), ancilla_state(d),
                   variant, ab_order)

    @property
    def v_kraus(self):
        if isinstance(self.v, KrausChannel):
            return self.v.kraus
        return (self.v,)

    def preparation(self):
        """Isometry ``S -> ABS`` attaching ``|psi0 psi0>``."""
        ket = np.kron(psi0(self.d), psi0(self.d))
        return np.kron(ket[:, None], np.eye(self.d))

    def run(self, system_noise, ancilla_noise=None):
        """Assemble the full protocol as a channel ``S -> A (x) B (x) S``."""
        d = self.d
        if system_noise.d_in != d or system_noise.d_out != d:
            raise DimensionError(f"system noise must act on dimension {d}")
        if ancilla_noise is None:
            ancilla_noise = KrausChannel((np.eye(d * d),), label="identity")
        if ancilla_noise.d_in != d * d or ancilla_noise.d_out != d * d:
            raise DimensionError(f"ancilla noise must act on dimension {d * d}")

        encoded = self.u @ self.preparation()
        noise = channel_tensor(ancilla_noise, system_noise)
        u_dag = self.u.conj().T
        decoded = [u_dag @ (k @ encoded) for k in noise.kraus]
        ops = tuple(v @ k for v in self.v_kraus for k in decoded)
        return KrausChannel(ops, label=f"qct[{system_noise.label}|{ancilla_noise.label}]")


def assemble(system_noise, ancilla_noise=None, d=None, variant="eq3_unitary", ab_order="AB"):
    """Full protocol as a channel ``S -> A (x) B (x) S``.

    ``d`` defaults to the input dimension of ``system_noise``.
    """
    if d is None:
        d = system_noise.d_in
    return ProtocolAssembly.build(d, variant, ab_order).run(system_noise, ancilla_noise)


def _system_dim(assembled):
    d = assembled.d_in
    if assembled.d_out != d**3:
        raise DimensionError(f"expected an S -> ABS channel, got {assembled.d_in} -> {assembled.d_out}")
    return d


def system_channel(assembled):
    """Reduced ``S -> S`` channel obtained by tracing out ``A (x) B``."""
    d = _system_dim(assembled)
    ops = []
    for k in assembled.kraus:
        ops.extend(k.reshape(d * d, d, d))
    return KrausChannel(tuple(ops), label=f"tr_AB {assembled.label}")


def effective_system_channel(assembled):
    """Choi matrix of the reduced ``S -> S`` channel."""
    return choi_of(system_channel(assembled))


class FactorizationReport(NamedTuple):
    system_fidelity: float
    factorization_residual: Optional[float]
    ancilla_choi: Optional[np.ndarray]
    system_choi_distance: float


def factorization_report(assembled, max_dim=MAX_FACTORIZATION_DIM):
    """Check that the protocol output is ``Psi_AB (x) id_S``.

    With the ancilla preparation absorbed, the full map goes ``S -> ABS`` and
    its Choi matrix lives on ``(AB, S_out, S_in)``. The ancilla part ``Psi``
    has trivial input, so its Choi matrix is the ancilla output state
    ``tr_{S_out S_in} J / d``. The residual is
    ``||J - Psi (x) J(id_S)||_F``. For ``d > max_dim`` the joint Choi matrix
    is not formed and the residual and ancilla Choi are ``None``.
    """
    d = _system_dim(assembled)
    reduced = system_channel(assembled)
    fidelity = entanglement_fidelity(reduced)
    distance = float(np.linalg.norm(choi_of(reduced) - identity_choi(d)))
    if d > max_dim:
        return FactorizationReport(fidelity, None, None, distance)

    full = choi_of(assembled)
    psi_ab = partial_trace(full, (d * d, d, d), keep=[0]) / d
    residual = float(np.linalg.norm(full - np.kron(psi_ab, identity_choi(d))))
    return FactorizationReport(fidelity, residual, psi_ab, distance)


def kraus_branch_weights(f, psi):
    """Squared norms of each ancilla branch after ``U^dag (1 (x) F) U``.

    ``f`` is a single system Kraus operator and ``psi`` a normalised system
    ket. Returns a ``d x d`` array indexed like :func:`branch_states`; entry
    ``(m, n)`` equals ``|tr((Z^m X^n)^dag f)|^2 / d^2``.
    """
    f = np.asarray(f, dtype=np.complex128)
    d = f.shape[0]
    u = build_u(d)
    state = u @ np.kron(np.kron(psi0(d), psi0(d)), psi)
    state = u.conj().T @ (np.kron(np.eye(d * d), f) @ state)
    amps = state.reshape(d * d, d)
    weights = np.zeros((d, d))
    for (m, n), ket in branch_states(d).items():
        weights[m, n] = np.linalg.norm(ket.conj() @ amps) ** 2
    return weights


# ---------------------------------------------------------------- ancilla noise


def ancilla_class_generators(d):
    """Operators ``Z^i X^j (x) X^{d-i}`` spanning the tolerated ancilla noise.

    For ``d == 2`` the listed span ``{1 1, s_x 1, s_y s_x, s_z s_x}`` is used
    verbatim.
    """
    d = check_dimension(d)
    if d == 2:
        p = weyl.PAULIS
        return [np.kron(p[0], p[0]), np.kron(p[1], p[0]),
                np.kron(p[2], p[1]), np.kron(p[3], p[1])]
    frame = weyl.WeylFrame(d)
    x = weyl.shift(d)
    return [
        np.kron(frame.element(i, j), np.linalg.matrix_power(x, (d - i) % d))
        for i in range(d) for j in range(d)
    ]


def class_residual(op, d):
    """Distance of ``op`` from the tolerated span, in normalised HS norm.

    The generators are mutually orthogonal unitaries, so the projection is a
    sum of rank-one terms. The norm is ``||.||_F / sqrt(n)`` with ``n`` the
    side length, which gives 1 for a unitary fully outside the span.
    """
    op = np.asarray(op, dtype=np.complex128)
    n = op.shape[0]
    if op.shape != (d * d, d * d):
        raise DimensionError(f"expected a {d * d}x{d * d} ancilla operator, got {op.shape}")
    proj = sum(np.vdot(g, op) / n * g for g in ancilla_class_generators(d))
    return float(np.linalg.norm(op - proj) / np.sqrt(n))


@dataclass(frozen=True)
class AncillaNoiseSpec:
    kind: str
    seed: int = 0
    d: int = 2
    n_kraus: int = 3

    def __post_init__(self):
        if self.kind not in ANCILLA_KINDS:
            raise ValueError(f"unknown ancilla noise kind {self.kind!r}; choose from {ANCILLA_KINDS}")
        check_dimension(self.d)
        if self.n_kraus < 1:
            raise ValueError("n_kraus must be >= 1")

    @property
    def in_class(self):
        return self.kind in IN_CLASS_KINDS


def _normalized_span_sample(gens, n_kraus, rng, atol):
    coeffs = rng.standard_normal((n_kraus, len(gens))) + 1j * rng.standard_normal((n_kraus, len(gens)))
    ops = [np.einsum("i,ijk->jk", c, np.array(gens)) for c in coeffs]
    gram = sum(e.conj().T @ e for e in ops)
    r = psd_inverse_sqrt(gram, atol=atol)
    return [e @ r for e in ops]


def sample_ancilla_noise(spec, max_tries=10, atol=ATOL):
    """Draw an ancilla channel of the requested kind.

    In-class kinds produce Kraus operators in the span of
    :func:`ancilla_class_generators`. ``general_in_class`` draws
    ``spec.n_kraus`` random span elements and right-normalises them by
    ``(sum E^dag E)^{-1/2}``, which stays in the span because the span is
    closed under products and adjoints. ``unitary_in_class`` is the
    single-operator case of the same construction.
    """
    d = spec.d
    gens = ancilla_class_generators(d)
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind

    if kind == "identity":
        return KrausChannel((np.eye(d * d),), label="identity")
    if kind == "mixed_unitary_in_class":
        probs = rng.dirichlet(np.ones(len(gens)))
        return KrausChannel(tuple(np.sqrt(p) * g for p, g in zip(probs, gens)),
                            label=f"mixed_unitary_in_class(seed={spec.seed})")
    if kind == "out_of_class_control":
        z = weyl.PAULI_Z if d == 2 else weyl.clock(d)
        ops = (np.sqrt(0.5) * np.eye(d * d), np.sqrt(0.5) * np.kron(np.eye(d), z))
        return KrausChannel(ops, label="out_of_class_control")

    n_kraus = 1 if kind == "unitary_in_class" else spec.n_kraus
    for _ in range(max_tries):
        try:
            ops = _normalized_span_sample(gens, n_kraus, rng, atol)
        except np.linalg.LinAlgError:
            continue
        return KrausChannel(tuple(ops), label=f"{kind}(seed={spec.seed})")
    raise RuntimeError(f"could not draw a non-singular {kind} sample in {max_tries} tries")


def noise_is_in_class(channel, d, atol=ATOL):
    return all(class_residual(k, d) <= atol for k in channel.kraus) and validate_cptp(channel, atol).passed
