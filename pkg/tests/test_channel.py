import numpy as np
import pytest

from dcqss.channel import FORWARD, RETURN, ChannelLeg, ChannelModel, PhotonKind, PhotonMessage, transmit
from dcqss.qcore import BellSet, MeasBasis, PairRegistry, prepare_decoy, state_of


def _msg(pid="p", leg=ChannelLeg.ALICE_TO_BOB):
    return PhotonMessage(0, leg, pid, PhotonKind.DECOY)


def test_leg_metadata():
    assert FORWARD["bob"] is ChannelLeg.ALICE_TO_BOB
    assert RETURN["charlie"] is ChannelLeg.CHARLIE_TO_ALICE
    assert ChannelLeg.ALICE_TO_CHARLIE.is_forward
    assert not ChannelLeg.BOB_TO_ALICE.is_forward
    assert ChannelLeg.BOB_TO_ALICE.agent == "bob"


@pytest.mark.parametrize("kw", [{"loss_prob": -0.1}, {"depolarize_prob": 1.5}])
def test_model_validation(kw):
    with pytest.raises(ValueError):
        ChannelModel(**kw)


def test_ideal_channel_is_identity():
    reg = PairRegistry()
    reg.add(prepare_decoy(2), ["p"])
    out = transmit(_msg(), ChannelModel(), reg, np.random.default_rng(0))
    assert out.photon == "p"
    assert np.allclose(reg.single_probabilities("p", MeasBasis.X), [1, 0])


def test_full_loss_retires_photon_and_keeps_partner():
    reg = PairRegistry()
    reg.add(state_of(BellSet.STANDARD, 0), ["B", "C"])
    out = transmit(_msg("B"), ChannelModel(loss_prob=1.0), reg, np.random.default_rng(0))
    assert out is None
    assert not reg.is_live("B") and reg.is_live("C")


def test_loss_rate():
    rng = np.random.default_rng(5)
    n, lost = 20000, 0
    for _ in range(n):
        reg = PairRegistry()
        reg.add(prepare_decoy(0), ["p"])
        lost += transmit(_msg(), ChannelModel(loss_prob=0.2), reg, rng) is None
    assert abs(lost / n - 0.2) <= 5 * np.sqrt(0.16 / n)


def test_depolarize_error_rate_on_eigenstate():
    """A Z eigenstate flips under U2 or U3 only: error 2p/3."""
    rng = np.random.default_rng(6)
    n, flips, p = 20000, 0, 0.3
    for _ in range(n):
        reg = PairRegistry()
        reg.add(prepare_decoy(0), ["p"])
        transmit(_msg(), ChannelModel(depolarize_prob=p), reg, rng)
        flips += reg.measure_single("p", MeasBasis.Z, rng)
    q = 2 * p / 3
    assert abs(flips / n - q) <= 5 * np.sqrt(q * (1 - q) / n)


def test_unaffected_leg_passes_untouched():
    reg = PairRegistry()
    reg.add(prepare_decoy(0), ["p"])
    model = ChannelModel(loss_prob=1.0, legs={ChannelLeg.ALICE_TO_CHARLIE})
    assert transmit(_msg(), model, reg, np.random.default_rng(0)) is not None


def test_absent_message_reaches_tap():
    seen = []
    msg = PhotonMessage(3, ChannelLeg.BOB_TO_ALICE, None, PhotonKind.PAIR_HALF)
    out = transmit(msg, ChannelModel(loss_prob=1.0), PairRegistry(), np.random.default_rng(0),
                   tap=lambda m, reg, rng: seen.append(m) or m)
    assert out is msg and seen == [msg] and msg.absent


def test_depolarized_phi_plus_leaves_bell_state_with_prob_p():
    """Each of U1, U2, U3 moves phi+ to another Bell state, so the miss rate is p."""
    rng = np.random.default_rng(9)
    n, miss, p = 20000, 0, 0.2
    for _ in range(n):
        reg = PairRegistry()
        reg.add(state_of(BellSet.STANDARD, 0), ["B", "C"])
        transmit(_msg("C", ChannelLeg.ALICE_TO_CHARLIE), ChannelModel(depolarize_prob=p), reg, rng)
        miss += reg.bell_measure("B", "C", BellSet.STANDARD, rng) != 0
    assert abs(miss / n - p) <= 5 * np.sqrt(p * (1 - p) / n)
