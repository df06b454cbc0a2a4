from __future__ import annotations

from dataclasses import dataclass, field

from ..adversary import AttackSpec
from ..channel import ChannelModel

DECOY_MODES = ("insert", "replace")


@dataclass(frozen=True)
class SessionConfig:
    """Parameters of one protocol session.

    ``decoy_mode`` picks how decoys relate to pairs:

    * ``"insert"``: a decoy is an extra slot sent ahead of the pair half on a
      leg, with probability ``p_d`` per leg; agents always measure decoys.
    * ``"replace"``: with probability ``p_d`` a whole round carries decoys to
      both agents instead of a pair; agents cannot tell and run their normal
      check/encode choice on whatever arrives.

    ``allow_no_checks`` admits ``p_c = 0`` for efficiency-limit studies only;
    such a session has no check-mode rounds at all.
    """

    rounds: int = 10000
    p_d: float = 0.1
    p_c: float = 0.1
    epsilon_th: float = 0.05
    second_check_fraction: float = 0.1
    seed: int = 0
    attack: AttackSpec = field(default_factory=AttackSpec)
    channel: ChannelModel = field(default_factory=ChannelModel)
    agent_decoy_variant: bool = False
    decoy_mode: str = "insert"
    min_samples: int = 50
    allow_no_checks: bool = False

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if not 0.0 <= self.p_d < 1.0:
            raise ValueError("p_d must lie in [0, 1)")
        low_ok = self.p_c > 0 or (self.allow_no_checks and self.p_c == 0)
        if not (low_ok and self.p_c < 0.5):
            raise ValueError("p_c must lie in (0, 0.5)")
        if not 0.0 <= self.epsilon_th < 1.0:
            raise ValueError("epsilon_th must lie in [0, 1)")
        if not 0.0 < self.second_check_fraction < 1.0:
            raise ValueError("second_check_fraction must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.decoy_mode not in DECOY_MODES:
            raise ValueError(f"decoy_mode must be one of {DECOY_MODES}")
        if self.min_samples < 1:
            raise ValueError("min_samples must be >= 1")
