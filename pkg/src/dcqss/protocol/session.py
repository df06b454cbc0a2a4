"""Round-by-round execution of the three-party protocol.

One round: Alice prepares a pair (and maybe decoys), the forward legs are
transmitted Bob first, each agent either checks or encodes, the return legs
are transmitted, and Alice Bell-measures whatever pair came back.  Each round
gets its own photon registry; nothing quantum survives a round.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..adversary import Adversary, make_adversary
from ..channel import FORWARD, RETURN, PhotonKind, PhotonMessage, transmit
from ..qcore import BASES, DECOY_STATES, BellSet, PairRegistry, UnitaryCode, prepare_decoy, state_of
from .config import SessionConfig
from .records import (
    CHECK, ENCODE, AgentAction, AgentDecoyRecord, Announcement, DecoyRecord, RoundRecord, Transcript,
)

AGENTS = ("bob", "charlie")
_SIDE = {"bob": "B", "charlie": "C"}
_SETS = (BellSet.STANDARD, BellSet.ROTATED)
PAIR_SLOT_INSERT = 1


@dataclass
class PreparedRound:
    pair: bool
    bell_set: Optional[BellSet]
    member: Optional[int]
    decoys: dict  # agent -> decoy index or None


def alice_prepare_round(cfg: SessionConfig, rng) -> PreparedRound:
    """Draw the round's preparation: one of eight states plus per-leg decoys."""
    if cfg.decoy_mode == "replace":
        if cfg.p_d > 0 and rng.random() < cfg.p_d:
            return PreparedRound(False, None, None, {a: int(rng.integers(6)) for a in AGENTS})
        k = int(rng.integers(8))
        return PreparedRound(True, _SETS[k >> 2], k & 3, {a: None for a in AGENTS})
    k = int(rng.integers(8))
    decoys = {}
    for a in AGENTS:
        decoys[a] = int(rng.integers(6)) if cfg.p_d > 0 and rng.random() < cfg.p_d else None
    return PreparedRound(True, _SETS[k >> 2], k & 3, decoys)


def _random_basis(rng):
    return BASES[int(rng.integers(3))]


def agent_step(agent: str, delivered: list, cfg: SessionConfig, reg: PairRegistry, rng, rec: RoundRecord):
    """Mode choice and local actions of one agent; returns the message sent back.

    In insert mode the agent measures every decoy slot and applies the mode to
    the pair half.  In replace mode the agent cannot tell a decoy from a pair
    half and treats the single arriving photon as a pair half.
    """
    check = rng.random() < cfg.p_c
    mode = CHECK if check else ENCODE
    action = AgentAction(mode, received=False)
    back = None
    blind = cfg.decoy_mode == "replace"
    for msg in delivered:
        decoy = rec.decoy(agent) if msg.kind is PhotonKind.DECOY else None
        if msg.kind is PhotonKind.DECOY and not blind:
            decoy.basis = _random_basis(rng)
            decoy.outcome = reg.measure_single(msg.photon, decoy.basis, rng)
            decoy.check_round = check
            continue
        action.received = True
        if check:
            action.basis = _random_basis(rng)
            action.outcome = reg.measure_single(msg.photon, action.basis, rng)
            if decoy is not None:
                decoy.basis, decoy.outcome, decoy.check_round = action.basis, action.outcome, True
            if cfg.agent_decoy_variant:
                idx = int(rng.integers(6))
                pid = (rec.round_id, f"agent-decoy-{agent}")
                reg.add(prepare_decoy(idx), [pid])
                setattr(rec, f"agent_decoy_{_SIDE[agent].lower()}", AgentDecoyRecord(idx))
                back = PhotonMessage(rec.round_id, RETURN[agent], pid, PhotonKind.DECOY, msg.slot)
            else:
                back = PhotonMessage(rec.round_id, RETURN[agent], None, msg.kind, msg.slot)
        else:
            action.code = UnitaryCode(int(rng.integers(4)))
            reg.apply_local(action.code, msg.photon)
            back = PhotonMessage(rec.round_id, RETURN[agent], msg.photon, msg.kind, msg.slot)
    if back is None:
        slot = 0 if blind else PAIR_SLOT_INSERT
        back = PhotonMessage(rec.round_id, RETURN[agent], None, PhotonKind.PAIR_HALF, slot)
    return action, back


def alice_decode(reg: PairRegistry, returned: dict, rec: RoundRecord, rng) -> Optional[int]:
    """Bell measurement in the preparation set when both pair halves are back."""
    if not rec.pair:
        return None
    msg_b, msg_c = returned["bob"], returned["charlie"]
    if msg_b is None or msg_c is None or msg_b.absent or msg_c.absent:
        return None
    if msg_b.kind is not PhotonKind.PAIR_HALF or msg_c.kind is not PhotonKind.PAIR_HALF:
        return None
    probs = reg.bell_probabilities(msg_b.photon, msg_c.photon, rec.prepared_set)
    k = reg.bell_measure(msg_b.photon, msg_c.photon, rec.prepared_set, rng)
    rec.alice_probability = float(probs[k] / probs.sum())
    return k


class Session:
    def __init__(self, cfg: SessionConfig, adversary: Adversary | None = None):
        self.cfg = cfg
        self.rng = np.random.default_rng(cfg.seed)
        self.adversary = adversary if adversary is not None else make_adversary(cfg.attack)

    def run_round(self, round_id: int) -> RoundRecord:
        cfg, rng, adv = self.cfg, self.rng, self.adversary
        reg = PairRegistry()
        prep = alice_prepare_round(cfg, rng)
        rec = RoundRecord(round_id, prep.pair, prep.bell_set, prep.member)
        outgoing = {}
        if prep.pair:
            pids = {"bob": (round_id, "B"), "charlie": (round_id, "C")}
            reg.add(state_of(prep.bell_set, prep.member), [pids["bob"], pids["charlie"]])
        for agent in AGENTS:
            msgs = []
            idx = prep.decoys[agent]
            if idx is not None:
                pid = (round_id, "decoy-" + agent)
                reg.add(prepare_decoy(idx), [pid])
                setattr(rec, f"decoy_{_SIDE[agent].lower()}", DecoyRecord(idx))
                msgs.append(PhotonMessage(round_id, FORWARD[agent], pid, PhotonKind.DECOY, 0))
            if prep.pair:
                slot = 0 if cfg.decoy_mode == "replace" else PAIR_SLOT_INSERT
                msgs.append(PhotonMessage(round_id, FORWARD[agent], pids[agent], PhotonKind.PAIR_HALF, slot))
            outgoing[agent] = msgs

        lost = []
        delivered = {}
        for agent in AGENTS:
            got = []
            for msg in outgoing[agent]:
                out = transmit(msg, cfg.channel, reg, rng, adv.on_forward)
                if out is None:
                    lost.append(msg.leg)
                    if msg.kind is PhotonKind.DECOY:
                        rec.decoy(agent).lost = True
                elif not out.absent:
                    got.append(out)
            delivered[agent] = got

        back = {}
        for agent in AGENTS:
            action, msg = agent_step(agent, delivered[agent], cfg, reg, rng, rec)
            setattr(rec, f"mode_{_SIDE[agent].lower()}", action)
            back[msg.leg] = msg

        returned = {}
        for leg in adv.return_order():
            msg = back[leg]
            out = transmit(msg, cfg.channel, reg, rng, adv.on_return)
            if out is None:
                lost.append(leg)
            returned[leg.agent] = out

        if adv.dishonest is not None and adv.cheated(round_id):
            rec.action(adv.dishonest).announced_loss = True

        # agent-decoy variant: a checking agent's own decoy is measured by Alice in its basis
        for agent in AGENTS:
            adr = rec.agent_decoy(agent)
            msg = returned[agent]
            if adr is None or msg is None or msg.absent:
                continue
            basis, _ = DECOY_STATES[adr.index]
            adr.alice_outcome = reg.measure_single(msg.photon, basis, rng)
            returned[agent] = None

        rec.alice_outcome = alice_decode(reg, returned, rec, rng)
        rec.lost_legs = tuple(leg.value for leg in lost)
        if hasattr(adv, "end_round"):
            adv.end_round(round_id)
        return rec

    def run(self) -> Transcript:
        records = [self.run_round(r) for r in range(self.cfg.rounds)]
        transcript = Transcript(self.cfg, records, victim=self.adversary.victim)
        publish_announcements(transcript)
        select_second_check(transcript, self.rng)
        transcript.adversary_log = self.adversary.log
        return transcript


def publish_announcements(transcript: Transcript) -> None:
    """Classical messages of the checking phase, in a fixed order.

    Alice's per-pair basis-set reveal, then decoy positions with the agents'
    bases and outcomes, then the agents' check-mode reveals.  Operation codes
    are never published here.
    """
    ann = transcript.announcements
    for r in transcript.records:
        if r.pair:
            ann.append(Announcement(r.round_id, "alice", "basis-set", (r.prepared_set.value,)))
    for r in transcript.records:
        for agent in AGENTS:
            d = r.decoy(agent)
            if d is None:
                continue
            ann.append(Announcement(r.round_id, "alice", "decoy-position", (agent,)))
            if d.basis is not None:
                ann.append(Announcement(r.round_id, agent, "decoy-reveal", (d.basis.value, d.outcome)))
    for r in transcript.records:
        for agent in AGENTS:
            a = r.action(agent)
            if a.announced_loss or (not a.received):
                ann.append(Announcement(r.round_id, agent, "loss", ()))
            elif a.mode == CHECK:
                ann.append(Announcement(r.round_id, agent, "check-reveal", (a.basis.value, a.outcome)))


def select_second_check(transcript: Transcript, rng) -> None:
    """Pick a random share of the decodable rounds and publish their operations.

    Half the picked rounds (rounded up) have Bob reveal first, the rest Charlie.
    """
    cfg = transcript.config
    candidates = [r.round_id for r in transcript.records if r.decodable]
    n = int(round(cfg.second_check_fraction * len(candidates)))
    if n == 0:
        return
    chosen = np.sort(rng.choice(np.asarray(candidates), size=n, replace=False))
    order = rng.permutation(n)
    bob_first = (n + 1) // 2
    for pos, rid in enumerate(chosen):
        rec = transcript.records[int(rid)]
        rec.selected_for_second_check = True
        rec.reveal_first = "bob" if order[pos] < bob_first else "charlie"
    for rid in chosen:
        rec = transcript.records[int(rid)]
        first = rec.reveal_first
        second = "charlie" if first == "bob" else "bob"
        for step, agent in enumerate((first, second)):
            code = rec.action(agent).code
            transcript.announcements.append(
                Announcement(rec.round_id, agent, "second-check", (int(code), step)))


def run_session(cfg: SessionConfig) -> Transcript:
    return Session(cfg).run()
