"""Attack strategies that act through channel taps.

Every strategy exposes ``on_forward`` and ``on_return`` taps and keeps a
per-round :class:`RoundLog` of what it learned.  The fake-EPR opaque attack is
run by a dishonest agent against the other agent's photons.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .channel import FORWARD, RETURN, ChannelLeg, PhotonMessage
from .qcore import BASES, BellSet, MeasBasis, PairRegistry, StateVector, UnitaryCode, state_of

ATTACK_KINDS = ("none", "intercept-resend", "fake-epr", "loss-only")
AGENTS = ("bob", "charlie")


@dataclass(frozen=True)
class AttackSpec:
    """Attack selection as it appears in a session config.

    ``leg`` and ``basis`` apply to intercept-resend (``basis=None`` means a
    uniformly random basis per photon); ``dishonest`` to fake-epr.
    """

    kind: str = "none"
    leg: ChannelLeg = ChannelLeg.ALICE_TO_CHARLIE
    basis: Optional[MeasBasis] = None
    dishonest: str = "bob"

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack {self.kind!r}; expected one of {ATTACK_KINDS}")
        if self.dishonest not in AGENTS:
            raise ValueError(f"dishonest agent must be one of {AGENTS}")


@dataclass
class RoundLog:
    learned_operation: Optional[UnitaryCode] = None  # None stands for Unknown
    cheated_loss: bool = False
    swap_outcome: Optional[int] = None


class Adversary:
    """Pass-through strategy; also the base class of the real attacks."""

    dishonest: Optional[str] = None
    victim: Optional[str] = None

    def __init__(self):
        self.log: dict[int, RoundLog] = {}

    def round_log(self, round_id: int) -> RoundLog:
        entry = self.log.get(round_id)
        if entry is None:
            entry = self.log[round_id] = RoundLog()
        return entry

    def return_order(self) -> tuple[ChannelLeg, ChannelLeg]:
        return (ChannelLeg.BOB_TO_ALICE, ChannelLeg.CHARLIE_TO_ALICE)

    def on_forward(self, msg: PhotonMessage, reg: PairRegistry, rng) -> PhotonMessage:
        return msg

    def on_return(self, msg: PhotonMessage, reg: PairRegistry, rng) -> PhotonMessage:
        return msg

    def cheated(self, round_id: int) -> bool:
        entry = self.log.get(round_id)
        return entry is not None and entry.cheated_loss


class LossOnly(Adversary):
    pass


class InterceptResend(Adversary):
    """Measure every photon on one leg and resend the observed eigenstate."""

    def __init__(self, leg: ChannelLeg, basis: Optional[MeasBasis] = None):
        super().__init__()
        self.leg = leg
        self.basis = basis

    def _tap(self, msg, reg, rng):
        if msg.leg is not self.leg or msg.absent:
            return msg
        basis = self.basis if self.basis is not None else BASES[int(rng.integers(3))]
        bit = reg.measure_single(msg.photon, basis, rng)
        fresh = ("eve", msg.round_id, msg.leg.value, msg.slot)
        reg.add(StateVector(basis.eigenvector(bit)), [fresh])
        self.round_log(msg.round_id)
        return msg.with_photon(fresh)

    on_forward = _tap
    on_return = _tap


class FakeEprOpaque(Adversary):
    """Dishonest agent swaps the victim's photon for half of its own phi+ pair.

    Forward leg: the victim's photon is stored and C' is sent instead.
    Victim's return leg: a returned C' is Bell-measured with B', which reveals
    the victim's operation exactly; that operation is then applied to the
    stored photon, which goes on to Alice.  When nothing comes back (the
    victim measured), B' is Bell-measured with the stored photon; any outcome
    other than phi+ is hidden by claiming the dishonest agent's own photon
    was lost.
    """

    def __init__(self, dishonest: str = "bob"):
        super().__init__()
        self.dishonest = dishonest
        self.victim = "charlie" if dishonest == "bob" else "bob"
        self._stored: dict[tuple[int, int], tuple] = {}  # (round, slot) -> (stored, B')

    def return_order(self):
        return (RETURN[self.victim], RETURN[self.dishonest])

    def on_forward(self, msg, reg, rng):
        if msg.leg is not FORWARD[self.victim] or msg.absent:
            return msg
        key = (msg.round_id, msg.slot)
        b_fake, c_fake = ("fake-B'", *key), ("fake-C'", *key)
        reg.add(state_of(BellSet.STANDARD, 0), [b_fake, c_fake])
        self._stored[key] = (msg.photon, b_fake)
        return msg.with_photon(c_fake)

    def on_return(self, msg, reg, rng):
        entry = self.round_log(msg.round_id)
        if msg.leg is RETURN[self.dishonest]:
            if entry.cheated_loss and not msg.absent:
                reg.discard(msg.photon, rng)
                return msg.with_photon(None)
            return msg
        if msg.leg is not RETURN[self.victim]:
            return msg
        held = self._stored.pop((msg.round_id, msg.slot), None)
        if held is None:
            return msg
        stored, b_fake = held
        if not msg.absent:
            k = reg.bell_measure(b_fake, msg.photon, BellSet.STANDARD, rng)
            entry.learned_operation = UnitaryCode(k)
            entry.swap_outcome = k
            reg.apply_local(entry.learned_operation, stored)
            return msg.with_photon(stored)
        k = reg.bell_measure(b_fake, stored, BellSet.STANDARD, rng)
        entry.swap_outcome = k
        entry.cheated_loss = k != 0
        return msg

    def end_round(self, round_id: int):
        for key in [k for k in self._stored if k[0] == round_id]:
            del self._stored[key]


def make_adversary(spec: AttackSpec) -> Adversary:
    if spec.kind == "none":
        return Adversary()
    if spec.kind == "loss-only":
        return LossOnly()
    if spec.kind == "intercept-resend":
        return InterceptResend(spec.leg, spec.basis)
    return FakeEprOpaque(spec.dishonest)


def leakage_summary(transcript, key_round_ids=None) -> float:
    """Fraction of the victim's key bits the adversary knows, over key rounds.

    An attack with no victim (no dishonest agent) is scored against Charlie.
    Key rounds default to the decodable rounds not spent on the second check.
    """
    records = transcript.records
    if key_round_ids is None:
        key_round_ids = [r.round_id for r in records if r.key_candidate]
    if not key_round_ids:
        return 0.0
    victim = transcript.victim or "charlie"
    log = transcript.adversary_log
    known = 0
    for rid in key_round_ids:
        entry = log.get(rid)
        if entry is None or entry.learned_operation is None:
            continue
        action = records[rid].action(victim)
        if action.code is not None and entry.learned_operation == action.code:
            known += 1
    return known / len(key_round_ids)
