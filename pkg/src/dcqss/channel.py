"""Photon transport between Alice and her agents.

A leg applies loss, then optional depolarization, then hands the message to
an adversary tap which may substitute it before delivery.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Hashable, Optional

from .qcore import PairRegistry, UnitaryCode


class ChannelLeg(enum.Enum):
    ALICE_TO_BOB = "alice->bob"
    ALICE_TO_CHARLIE = "alice->charlie"
    BOB_TO_ALICE = "bob->alice"
    CHARLIE_TO_ALICE = "charlie->alice"

    @property
    def is_forward(self) -> bool:
        return self in (ChannelLeg.ALICE_TO_BOB, ChannelLeg.ALICE_TO_CHARLIE)

    @property
    def agent(self) -> str:
        return "bob" if self in (ChannelLeg.ALICE_TO_BOB, ChannelLeg.BOB_TO_ALICE) else "charlie"


FORWARD = {"bob": ChannelLeg.ALICE_TO_BOB, "charlie": ChannelLeg.ALICE_TO_CHARLIE}
RETURN = {"bob": ChannelLeg.BOB_TO_ALICE, "charlie": ChannelLeg.CHARLIE_TO_ALICE}


class PhotonKind(enum.Enum):
    PAIR_HALF = "pair"
    DECOY = "decoy"


@dataclass(frozen=True)
class PhotonMessage:
    round_id: int
    leg: ChannelLeg
    photon: Optional[Hashable]  # None is the "nothing sent" marker
    kind: PhotonKind
    slot: int = 0

    @property
    def absent(self) -> bool:
        return self.photon is None

    def with_photon(self, photon) -> "PhotonMessage":
        return replace(self, photon=photon)


@dataclass(frozen=True)
class ChannelModel:
    loss_prob: float = 0.0
    depolarize_prob: float = 0.0
    legs: Optional[frozenset] = None  # None: every leg is affected

    def __post_init__(self):
        for name in ("loss_prob", "depolarize_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if self.legs is not None:
            object.__setattr__(self, "legs", frozenset(self.legs))

    def affects(self, leg: ChannelLeg) -> bool:
        return self.legs is None or leg in self.legs


Tap = Callable[[PhotonMessage, PairRegistry, object], PhotonMessage]

_ERRORS = (UnitaryCode.U1, UnitaryCode.U2, UnitaryCode.U3)


def transmit(msg: PhotonMessage, model: ChannelModel, reg: PairRegistry, rng,
             tap: Tap | None = None) -> PhotonMessage | None:
    """Send one message down its leg; returns the delivered message or None if lost.

    An absent-photon message skips the physics and goes straight to the tap, so
    an adversary can notice that nothing was sent.
    """
    if not msg.absent:
        if model.affects(msg.leg):
            if model.loss_prob > 0 and rng.random() < model.loss_prob:
                reg.discard(msg.photon, rng)
                return None
            if model.depolarize_prob > 0 and rng.random() < model.depolarize_prob:
                reg.apply_local(_ERRORS[int(rng.integers(3))], msg.photon)
    if tap is not None:
        msg = tap(msg, reg, rng)
    return msg
