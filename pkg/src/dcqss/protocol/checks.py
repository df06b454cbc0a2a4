"""Eavesdropping checks and key sifting over a finished transcript."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..qcore import DECOY_STATES
from .keys import code_bits, decode_combined, remap_agent_code
from .records import KeyMaterial, Transcript

AGENTS = ("bob", "charlie")


@dataclass(frozen=True)
class CheckResult:
    errors: int
    samples: int
    min_samples: int

    @property
    def qber(self) -> float:
        return self.errors / self.samples if self.samples else 0.0

    @property
    def insufficient(self) -> bool:
        return self.samples < self.min_samples


@dataclass(frozen=True)
class DecoyCheck(CheckResult):
    rounds: int = 0
    sifted_in_check_rounds: int = 0   # matching-basis decoys from rounds the agent checked

    @property
    def yield_per_round_checked(self) -> float:
        """Sifted decoys from check-mode rounds per round (the (1/3) p_d p_c population)."""
        return self.sifted_in_check_rounds / self.rounds if self.rounds else 0.0

    @property
    def yield_per_round_all(self) -> float:
        """All sifted decoys per round, whatever the agent's mode."""
        return self.samples / self.rounds if self.rounds else 0.0


def first_check(transcript: Transcript) -> dict[str, DecoyCheck]:
    """Per-leg error rate on decoys the agent measured in their preparation basis."""
    cfg = transcript.config
    out = {}
    for agent in AGENTS:
        errors = samples = in_check = 0
        for r in transcript.records:
            d = r.decoy(agent)
            if d is None or d.basis is None:
                continue
            basis, bit = DECOY_STATES[d.index]
            if d.basis is not basis:
                continue
            samples += 1
            errors += d.outcome != bit
            in_check += d.check_round
        out[agent] = DecoyCheck(errors, samples, cfg.min_samples, len(transcript.records), in_check)
    return out


def agent_decoy_check(transcript: Transcript) -> dict[str, CheckResult]:
    """Return-leg error rate on decoys sent back by checking agents (agent-decoy variant)."""
    cfg = transcript.config
    out = {}
    for agent in AGENTS:
        errors = samples = 0
        for r in transcript.records:
            adr = r.agent_decoy(agent)
            if adr is None or adr.alice_outcome is None:
                continue
            samples += 1
            errors += adr.alice_outcome != DECOY_STATES[adr.index][1]
        out[agent] = CheckResult(errors, samples, cfg.min_samples)
    return out


def expected_code(record) -> int:
    """remap(code_B) xor remap(code_C): what the agents' operations say Alice should decode."""
    s = record.prepared_set
    return remap_agent_code(int(record.mode_b.code), "B", s) ^ remap_agent_code(int(record.mode_c.code), "C", s)


def second_check(transcript: Transcript) -> CheckResult:
    """Error rate of Alice's decoded code against the published operations."""
    errors = samples = 0
    for r in transcript.second_check_rounds:
        samples += 1
        errors += decode_combined(r.prepared_member, r.alice_outcome, r.prepared_set) != expected_code(r)
    return CheckResult(errors, samples, transcript.config.min_samples)


class ProtocolAbort(Exception):
    """Some check exceeded the error threshold; ``failed`` names those checks."""

    def __init__(self, failed: list[str], rates: dict[str, float]):
        self.failed = failed
        self.rates = rates
        detail = ", ".join(f"{name}={rates[name]:.4f}" for name in failed)
        super().__init__(f"error threshold exceeded: {detail}")


def all_checks(transcript: Transcript) -> dict[str, CheckResult]:
    checks = {f"first_check.{a}": c for a, c in first_check(transcript).items()}
    if transcript.config.agent_decoy_variant:
        checks.update({f"agent_decoy_check.{a}": c for a, c in agent_decoy_check(transcript).items()})
    checks["second_check"] = second_check(transcript)
    return checks


def sift(transcript: Transcript, checks: dict | None = None) -> KeyMaterial:
    """Raw keys from the decodable rounds left after the second check.

    Raises ProtocolAbort if any check with samples is above ``epsilon_th``.
    No error correction or privacy amplification is applied.
    """
    if checks is None:
        checks = all_checks(transcript)
    eps = transcript.config.epsilon_th
    failed = [name for name, c in checks.items() if c.samples and c.qber > eps]
    if failed:
        raise ProtocolAbort(failed, {n: c.qber for n, c in checks.items()})
    rows = [r for r in transcript.records if r.key_candidate]
    k_a = np.zeros(2 * len(rows), dtype=np.uint8)
    k_b = np.zeros_like(k_a)
    k_c = np.zeros_like(k_a)
    for i, r in enumerate(rows):
        s = r.prepared_set
        k_a[2 * i: 2 * i + 2] = code_bits(decode_combined(r.prepared_member, r.alice_outcome, s))
        k_b[2 * i: 2 * i + 2] = code_bits(remap_agent_code(int(r.mode_b.code), "B", s))
        k_c[2 * i: 2 * i + 2] = code_bits(remap_agent_code(int(r.mode_c.code), "C", s))
    return KeyMaterial(k_a, k_b, k_c, [r.round_id for r in rows])
