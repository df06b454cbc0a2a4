import itertools
import math
import pickle

import numpy as np
import pytest

from dcqss.channel import ChannelLeg, ChannelModel
from dcqss.protocol import (
    ProtocolAbort, Session, SessionConfig, all_checks, code_bits, decode_combined, first_check,
    remap_agent_code, run_session, second_check, sift,
)
from dcqss.protocol.records import CHECK, ENCODE
from dcqss.qcore import BellSet, PairRegistry, UnitaryCode, state_of

STD, ROT = BellSet.STANDARD, BellSet.ROTATED


def _bell_outcome(bell_set, member, ub, uc):
    reg = PairRegistry()
    reg.add(state_of(bell_set, member), ["B", "C"])
    reg.apply_local(ub, "B")
    reg.apply_local(uc, "C")
    p = reg.bell_probabilities("B", "C", bell_set)
    k = int(np.argmax(p))
    return k, p[k]


# --- decoding examples ---------------------------------------------------------

@pytest.mark.parametrize("bell_set,member,ub,uc,want", [
    (STD, 0, UnitaryCode.U0, UnitaryCode.U2, 2),   # phi+ -> psi+
    (ROT, 0, UnitaryCode.U1, UnitaryCode.U0, 3),   # Phi+ -> Psi-
    (STD, 0, UnitaryCode.U1, UnitaryCode.U1, 0),   # operations cancel
])
def test_alice_decode_examples(bell_set, member, ub, uc, want):
    k, p = _bell_outcome(bell_set, member, ub, uc)
    assert k == want and abs(p - 1) <= 1e-12


def test_decode_combined_examples():
    assert decode_combined(0, 0, STD) == 0b00
    assert decode_combined(0, 2, STD) == 0b10
    # Phi+ -> Psi- is the class of (U1 x I) after the B-side remap
    assert decode_combined(0, 3, ROT) == remap_agent_code(1, "B", ROT)


def test_remap_examples():
    assert remap_agent_code(0b01, "B", STD) == 0b01
    assert remap_agent_code(0b01, "B", ROT) == 0b11
    assert [remap_agent_code(c, "B", ROT) for c in range(4)] == [0b00, 0b11, 0b01, 0b10]
    assert [remap_agent_code(c, "C", ROT) for c in range(4)] == [0, 1, 2, 3]


def test_xor_enumeration():
    for bell_set, m, ub, uc in itertools.product((STD, ROT), range(4), UnitaryCode, UnitaryCode):
        k, p = _bell_outcome(bell_set, m, ub, uc)
        assert abs(p - 1) <= 1e-12
        want = remap_agent_code(int(ub), "B", bell_set) ^ remap_agent_code(int(uc), "C", bell_set)
        assert decode_combined(m, k, bell_set) == want


def test_code_bits():
    assert code_bits(0b10) == (1, 0)


# --- config --------------------------------------------------------------------

@pytest.mark.parametrize("kw", [{"p_c": 0.0}, {"p_c": 0.5}, {"p_d": -0.1}, {"rounds": 0},
                                {"decoy_mode": "swap"}])
def test_config_rejects(kw):
    with pytest.raises(ValueError):
        SessionConfig(**kw)


def test_zero_check_probability_needs_opt_in():
    SessionConfig(p_c=0.0, allow_no_checks=True)


# --- honest sessions -----------------------------------------------------------

@pytest.fixture(scope="module")
def honest():
    return run_session(SessionConfig(rounds=1000, seed=7))


def test_honest_checks_zero_and_xor(honest):
    checks = all_checks(honest)
    assert all(c.errors == 0 for c in checks.values())
    keys = sift(honest, checks)
    assert keys.xor_holds()


def test_honest_decode_is_deterministic(honest):
    for r in honest.records:
        if r.decodable:
            assert abs(r.alice_probability - 1) <= 1e-12


def test_key_length(honest):
    cfg = honest.config
    keys = sift(honest)
    n = cfg.rounds
    p = (1 - cfg.p_c) ** 2
    mean = 2 * n * p * (1 - cfg.second_check_fraction)
    sigma = 2 * (1 - cfg.second_check_fraction) * math.sqrt(n * p * (1 - p))
    assert abs(len(keys) - mean) <= 5 * sigma


def test_checked_rounds_never_in_key(honest):
    ids = set(sift(honest).sifted_round_ids)
    for r in honest.records:
        if r.mode_b.mode == CHECK or r.mode_c.mode == CHECK or r.selected_for_second_check:
            assert r.round_id not in ids


def test_encode_codes_uniform():
    t = run_session(SessionConfig(rounds=4000, seed=3))
    codes = [int(a.code) for r in t.records for a in (r.mode_b, r.mode_c) if a.mode == ENCODE]
    n = len(codes)
    counts = np.bincount(codes, minlength=4)
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert np.all(np.abs(counts - n / 4) <= 5 * sigma)


def test_check_outcomes_equiprobable():
    t = run_session(SessionConfig(rounds=4000, p_c=0.4, seed=4))
    outs = [a.outcome for r in t.records for a in (r.mode_b, r.mode_c) if a.mode == CHECK]
    n = len(outs)
    assert abs(sum(outs) - n / 2) <= 5 * math.sqrt(n / 4)


def test_determinism_bit_identical_transcript():
    cfg = SessionConfig(rounds=300, seed=99, channel=ChannelModel(0.05, 0.05))
    a, b = run_session(cfg), run_session(cfg)
    assert pickle.dumps(a.records) == pickle.dumps(b.records)
    assert a.announcements == b.announcements


def test_different_seeds_differ():
    a = run_session(SessionConfig(rounds=200, seed=1))
    b = run_session(SessionConfig(rounds=200, seed=2))
    assert pickle.dumps(a.records) != pickle.dumps(b.records)


def test_no_signalling_of_codes(honest):
    """Only second-check announcements carry operation codes."""
    second = {r.round_id for r in honest.records if r.selected_for_second_check}
    for a in honest.announcements:
        if a.kind == "second-check":
            assert a.round_id in second
        else:
            assert a.kind in {"basis-set", "decoy-position", "decoy-reveal", "loss", "check-reveal"}


def test_second_check_order_balance():
    for seed in range(5):
        t = run_session(SessionConfig(rounds=500, seed=seed, second_check_fraction=0.3))
        rounds = t.second_check_rounds
        bob = sum(r.reveal_first == "bob" for r in rounds)
        assert abs(bob - (len(rounds) - bob)) <= 1
        steps = [a for a in t.announcements if a.kind == "second-check"]
        assert len(steps) == 2 * len(rounds)


def test_replace_mode_counts():
    t = run_session(SessionConfig(rounds=3000, p_d=0.2, decoy_mode="replace", seed=5))
    pairs = sum(r.pair for r in t.records)
    assert abs(pairs - 2400) <= 5 * math.sqrt(3000 * 0.16)
    assert all(c.errors == 0 for c in all_checks(t).values())


def test_decoy_yield_normalizations():
    cfg = SessionConfig(rounds=20000, p_d=0.3, p_c=0.3, seed=8)
    fc = first_check(run_session(cfg))
    for c in fc.values():
        want = cfg.p_d * cfg.p_c / 3
        assert abs(c.yield_per_round_checked - want) <= 5 * math.sqrt(want / cfg.rounds)
        want_all = cfg.p_d / 3
        assert abs(c.yield_per_round_all - want_all) <= 5 * math.sqrt(want_all / cfg.rounds)


def test_agent_decoy_variant_honest_zero():
    t = run_session(SessionConfig(rounds=2000, p_c=0.3, agent_decoy_variant=True, seed=2))
    checks = all_checks(t)
    assert checks["agent_decoy_check.bob"].samples > 0
    assert all(c.errors == 0 for c in checks.values())


# --- noise and aborts ----------------------------------------------------------

def depolarized_return_qber(p: float) -> float:
    """Wrong-class probability with independent Pauli errors (p/3 each) on both
    returned halves: the decode is right iff the two errors are in one class."""
    return 1 - ((1 - p) ** 2 + 3 * (p / 3) ** 2)


def test_depolarized_return_legs_qber():
    p = 0.1
    cfg = SessionConfig(
        rounds=100_000, p_d=0.0, p_c=0.01, second_check_fraction=0.5, seed=12,
        channel=ChannelModel(depolarize_prob=p, legs={ChannelLeg.BOB_TO_ALICE, ChannelLeg.CHARLIE_TO_ALICE}),
    )
    sc = second_check(run_session(cfg))
    q = depolarized_return_qber(p)
    assert abs(sc.qber - q) <= 5 * math.sqrt(q * (1 - q) / sc.samples)


def test_zero_threshold_with_noise_aborts():
    cfg = SessionConfig(rounds=2000, epsilon_th=0.0, channel=ChannelModel(depolarize_prob=0.05), seed=1)
    with pytest.raises(ProtocolAbort) as exc:
        sift(run_session(cfg))
    assert exc.value.failed


def test_loss_rounds_are_not_decodable():
    t = run_session(SessionConfig(rounds=2000, channel=ChannelModel(loss_prob=0.2), seed=6))
    for r in t.records:
        lost_decoys = sum(bool(r.decoy(a) and r.decoy(a).lost) for a in ("bob", "charlie"))
        if len(r.lost_legs) > lost_decoys:
            assert not r.decodable
    assert sift(t).xor_holds()


def test_session_accepts_explicit_adversary():
    from dcqss.adversary import FakeEprOpaque
    t = Session(SessionConfig(rounds=200, p_d=0.0, seed=0), FakeEprOpaque("charlie")).run()
    assert t.victim == "bob"
