"""scikit-learn style front-end for the transparency protocol.

:class:`ChannelTransparency` treats a batch of noisy system channels as its
input samples. ``fit`` builds the protocol for the dimension found in the
batch, ``transform`` returns the Choi matrices of the protocol-corrected
system channels and ``score`` the mean entanglement fidelity.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import ATOL, DimensionError, check_tolerance
from .channels import KrausChannel, choi_of, entanglement_fidelity
from .protocol import (
    AB_ORDERS,
    ANCILLA_KINDS,
    VARIANTS,
    AncillaNoiseSpec,
    ProtocolAssembly,
    sample_ancilla_noise,
    system_channel,
)


def check_channels(X):
    """Coerce ``X`` to a list of square :class:`KrausChannel` of one dimension.

    Each sample may be a :class:`KrausChannel`, a sequence of Kraus matrices
    or a 3-D array of shape ``(n_kraus, d, d)``.
    """
    if isinstance(X, KrausChannel):
        X = [X]
    channels = []
    for item in X:
        if not isinstance(item, KrausChannel):
            item = KrausChannel(tuple(np.asarray(item, dtype=np.complex128)))
        if item.d_in != item.d_out:
            raise DimensionError("system channels must map a space to itself")
        channels.append(item)
    if not channels:
        raise ValueError("X contains no channels")
    dims = {c.d_in for c in channels}
    if len(dims) != 1:
        raise DimensionError(f"all channels must share one dimension, got {sorted(dims)}")
    return channels


class ChannelTransparency(TransformerMixin, BaseEstimator):
    """Make arbitrary system channels transparent with two ancillas.

    Parameters
    ----------
    variant : {'eq3_unitary', 'hadamard_conjugated', 'projective_kraus'}
        Correction step to use.
    ab_order : {'AB', 'BA'}
        Ancilla labelling of the correction projectors.
    ancilla_noise : str, KrausChannel or None
        Noise on the ancillas. A string is an ancilla-noise kind sampled once
        with ``random_state`` at fit time; ``None`` means noiseless ancillas.
    random_state : int
        Seed for sampled ancilla noise.
    tol : float
        Tolerance used by :meth:`score` thresholds and input checks.

    Attributes
    ----------
    d_ : int
        System dimension seen during fit.
    assembly_ : ProtocolAssembly
    ancilla_noise_ : KrausChannel
    """

    def __init__(self, variant="eq3_unitary", ab_order="AB", ancilla_noise=None,
                 random_state=0, tol=ATOL):
        self.variant = variant
        self.ab_order = ab_order
        self.ancilla_noise = ancilla_noise
        self.random_state = random_state
        self.tol = tol

    def fit(self, X, y=None):
        channels = check_channels(X)
        check_tolerance(self.tol)
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")
        if self.ab_order not in AB_ORDERS:
            raise ValueError(f"ab_order must be one of {AB_ORDERS}")
        d = channels[0].d_in
        self.assembly_ = ProtocolAssembly.build(d, self.variant, self.ab_order)
        noise = self.ancilla_noise
        if noise is None:
            noise = "identity"
        if isinstance(noise, str):
            if noise not in ANCILLA_KINDS:
                raise ValueError(f"ancilla_noise must be one of {ANCILLA_KINDS}")
            noise = sample_ancilla_noise(AncillaNoiseSpec(noise, self.random_state, d))
        self.ancilla_noise_ = noise
        self.d_ = d
        return self

    def _effective(self, X):
        check_is_fitted(self, "assembly_")
        channels = check_channels(X)
        if channels[0].d_in != self.d_:
            raise DimensionError(f"fitted for d={self.d_}, got d={channels[0].d_in}")
        return [system_channel(self.assembly_.run(c, self.ancilla_noise_)) for c in channels]

    def transform(self, X):
        """Choi matrices of the corrected system channels, shape ``(n, d*d, d*d)``."""
        return np.array([choi_of(c) for c in self._effective(X)])

    def effective_channels(self, X):
        return self._effective(X)

    def fidelities(self, X):
        return np.array([entanglement_fidelity(c) for c in self._effective(X)])

    def score(self, X, y=None):
        """Mean entanglement fidelity of the corrected channels."""
        return float(self.fidelities(X).mean())
