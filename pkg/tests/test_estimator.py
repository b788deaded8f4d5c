import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from qctsim import channels as ch
from qctsim.estimator import ChannelTransparency, check_channels

from conftest import ATOL


@pytest.fixture
def batch():
    return [ch.random_cptp(2, 1 + s % 4, s) for s in range(8)]


def test_get_params_and_clone():
    est = ChannelTransparency(variant="projective_kraus", ancilla_noise="general_in_class", random_state=3)
    params = est.get_params()
    assert params["variant"] == "projective_kraus" and params["random_state"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    assert not hasattr(twin, "assembly_")


def test_fit_transform(batch):
    est = ChannelTransparency()
    chois = est.fit_transform(batch)
    assert chois.shape == (8, 4, 4)
    for j in chois:
        assert ch.choi_distance(j, ch.identity_choi(2)) <= ATOL
    assert est.d_ == 2
    assert est.score(batch) == pytest.approx(1, abs=ATOL)


@pytest.mark.parametrize("variant", ["eq3_unitary", "hadamard_conjugated", "projective_kraus"])
@pytest.mark.parametrize("noise", ["identity", "mixed_unitary_in_class", "unitary_in_class", "general_in_class"])
def test_variants_and_ancilla_noise(batch, variant, noise):
    est = ChannelTransparency(variant=variant, ancilla_noise=noise, random_state=1).fit(batch)
    assert np.all(est.fidelities(batch) >= 1 - ATOL)


def test_ba_order_and_control_score_lower(batch):
    assert ChannelTransparency(ab_order="BA").fit(batch).score(batch) < 0.9
    est = ChannelTransparency(ancilla_noise="out_of_class_control").fit(batch)
    assert est.score(batch) == pytest.approx(0.5, abs=1e-9)


def test_accepts_raw_kraus_arrays():
    raw = [np.array(ch.amplitude_damping(0.4).kraus), list(ch.bit_flip(0.2).kraus)]
    est = ChannelTransparency().fit(raw)
    assert est.score(raw) == pytest.approx(1, abs=ATOL)


def test_qutrit_batch():
    batch = [ch.random_cptp(3, 4, s) for s in range(3)]
    est = ChannelTransparency(ancilla_noise=ch.KrausChannel((np.eye(9),))).fit(batch)
    assert np.all(est.fidelities(batch) >= 1 - ATOL)


def test_not_fitted(batch):
    with pytest.raises(NotFittedError):
        ChannelTransparency().transform(batch)


def test_input_validation(batch):
    with pytest.raises(ValueError):
        check_channels([])
    with pytest.raises(ValueError):
        check_channels([ch.identity_channel(2), ch.identity_channel(3)])
    with pytest.raises(ValueError):
        ChannelTransparency(variant="nope").fit(batch)
    with pytest.raises(ValueError):
        ChannelTransparency(ancilla_noise="thermal").fit(batch)
    with pytest.raises(ValueError):
        ChannelTransparency(tol=-1).fit(batch)
    est = ChannelTransparency().fit(batch)
    with pytest.raises(ValueError):
        est.transform([ch.identity_channel(3)])


def test_in_pipeline(batch):
    pipe = make_pipeline(ChannelTransparency(), FunctionTransformer(lambda x: x.reshape(len(x), -1)))
    out = pipe.fit_transform(batch)
    assert out.shape == (8, 16)
