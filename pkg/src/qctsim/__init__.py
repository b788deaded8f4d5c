"""Simulation and verification of quantum channel transparency.

Two ancillas and a pair of entangling unitaries turn an arbitrary noisy
channel on a ``d``-level system into the identity channel. The package
builds the protocol for any ``d``, injects system and ancilla noise, and
certifies transparency, factorisation and the optical/atomic gate
decompositions numerically.
"""
from .channels import (
    KrausChannel,
    apply,
    channel_compose,
    channel_tensor,
    choi_of,
    entanglement_fidelity,
    named_channel,
    negativity,
    random_cptp,
    validate_cptp,
)
from .estimator import ChannelTransparency
from .protocol import (
    AncillaNoiseSpec,
    ProtocolAssembly,
    assemble,
    build_u,
    build_v,
    effective_system_channel,
    factorization_report,
    sample_ancilla_noise,
)
from .weyl import WeylFrame, decompose_in_frame, twirl

__version__ = "0.1.0"

__all__ = [
    "AncillaNoiseSpec",
    "ChannelTransparency",
    "KrausChannel",
    "ProtocolAssembly",
    "WeylFrame",
    "apply",
    "assemble",
    "build_u",
    "build_v",
    "channel_compose",
    "channel_tensor",
    "choi_of",
    "decompose_in_frame",
    "effective_system_channel",
    "entanglement_fidelity",
    "factorization_report",
    "named_channel",
    "negativity",
    "random_cptp",
    "sample_ancilla_noise",
    "twirl",
    "validate_cptp",
]
