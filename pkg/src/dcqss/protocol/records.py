"""Per-round ground truth, public announcements, and key material."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from ..qcore import BellSet, MeasBasis, UnitaryCode
from .config import SessionConfig

CHECK, ENCODE = "check", "encode"


@dataclass(slots=True)
class AgentAction:
    mode: str                            # CHECK or ENCODE
    received: bool = True                # pair half (or replacing decoy) arrived
    basis: Optional[MeasBasis] = None    # check mode only
    outcome: Optional[int] = None
    code: Optional[UnitaryCode] = None   # encode mode only
    announced_loss: bool = False


@dataclass(slots=True)
class DecoyRecord:
    index: int                           # into DECOY_STATES
    basis: Optional[MeasBasis] = None    # agent's measurement basis, None if never measured
    outcome: Optional[int] = None
    check_round: bool = False            # agent was in check mode that round
    lost: bool = False


@dataclass(slots=True)
class AgentDecoyRecord:
    """Decoy an agent sends back in place of a measured photon (agent-decoy variant)."""

    index: int
    alice_outcome: Optional[int] = None  # None if it never reached Alice


@dataclass(slots=True)
class RoundRecord:
    round_id: int
    pair: bool                           # False for a decoy-only round (replace mode)
    prepared_set: Optional[BellSet]
    prepared_member: Optional[int]
    decoy_b: Optional[DecoyRecord] = None
    decoy_c: Optional[DecoyRecord] = None
    mode_b: Optional[AgentAction] = None
    mode_c: Optional[AgentAction] = None
    alice_outcome: Optional[int] = None  # None is NoResult
    alice_probability: Optional[float] = None
    lost_legs: tuple = ()
    agent_decoy_b: Optional[AgentDecoyRecord] = None
    agent_decoy_c: Optional[AgentDecoyRecord] = None
    selected_for_second_check: bool = False
    reveal_first: Optional[str] = None   # "bob" or "charlie" for second-check rounds

    def action(self, agent: str) -> AgentAction:
        return self.mode_b if agent == "bob" else self.mode_c

    def decoy(self, agent: str) -> Optional[DecoyRecord]:
        return self.decoy_b if agent == "bob" else self.decoy_c

    def agent_decoy(self, agent: str) -> Optional[AgentDecoyRecord]:
        return self.agent_decoy_b if agent == "bob" else self.agent_decoy_c

    @property
    def checked(self) -> bool:
        return any(a is not None and a.mode == CHECK for a in (self.mode_b, self.mode_c))

    @property
    def decodable(self) -> bool:
        return self.alice_outcome is not None

    @property
    def key_candidate(self) -> bool:
        return self.decodable and not self.selected_for_second_check


class Announcement(NamedTuple):
    round_id: int
    party: str
    kind: str
    data: tuple


@dataclass
class Transcript:
    config: SessionConfig
    records: list[RoundRecord]
    announcements: list[Announcement] = field(default_factory=list)
    adversary_log: dict = field(default_factory=dict)
    victim: Optional[str] = None

    @property
    def second_check_rounds(self) -> list[RoundRecord]:
        return [r for r in self.records if r.selected_for_second_check]


@dataclass
class KeyMaterial:
    k_a: np.ndarray
    k_b: np.ndarray
    k_c: np.ndarray
    sifted_round_ids: list[int]

    def __len__(self):
        return len(self.k_a)

    def xor_holds(self) -> bool:
        return bool(np.array_equal(self.k_a, self.k_b ^ self.k_c))

    @staticmethod
    def bitstring(bits: np.ndarray) -> str:
        return "".join("1" if b else "0" for b in bits)
