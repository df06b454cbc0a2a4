"""Efficiency formulas, empirical estimators, and the session report.

Accounting used for the empirical efficiencies:

* useful qubits: 2 per decodable round (both pair halves gave Alice a result);
* transmitted qubits: every photon Alice sends forward, so each pair counts 2
  for the qubit efficiency and 4 (there and back) for the total efficiency,
  decoys alike;
* raw-key bits b_s: 2 per decodable round;
* classical bits b_t: 2 (basis, outcome) per photon an agent measured in a
  check-mode round.

With that accounting the expectations equal the closed forms once P_d is
read as the fraction of forward photons that are decoys: p_d itself in
``replace`` mode, p_d / (1 + p_d) in ``insert`` mode.  A second, "full"
accounting counts every classical announcement and only sifted key bits.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .adversary import leakage_summary
from .protocol import ProtocolAbort, Transcript, all_checks, first_check, sift
from .protocol.records import CHECK

ANNOUNCEMENT_BITS = {
    "basis-set": 1,
    "decoy-position": 1,
    "decoy-reveal": 2,
    "check-reveal": 2,
    "second-check": 2,
    "loss": 1,
}


@dataclass(frozen=True)
class EfficiencyInputs:
    b_s: float   # raw-key bits
    q_t: float   # qubits transmitted
    b_t: float   # classical bits exchanged

    def __post_init__(self):
        if min(self.b_s, self.q_t, self.b_t) < 0:
            raise ValueError("efficiency inputs must be non-negative")


def efficiency_total(inputs: EfficiencyInputs) -> float:
    denom = inputs.q_t + inputs.b_t
    if denom <= 0:
        raise ZeroDivisionError("q_t + b_t must be positive")
    return inputs.b_s / denom


def theoretical_eta_q(p_d: float, p_c: float) -> float:
    return (1 - p_d) * (1 - p_c) ** 2


def theoretical_eta_t(p_d: float, p_c: float) -> float:
    return 0.5 * (1 - p_d) * (1 - p_c) ** 2 / (1 + p_c)


def effective_decoy_fraction(p_d: float, decoy_mode: str) -> float:
    """Fraction of forward photons that are decoys under each decoy reading."""
    return p_d if decoy_mode == "replace" else p_d / (1 + p_d)


def _ratio_sigma(x: np.ndarray, y: np.ndarray, r0: float) -> float:
    """Standard error of sum(x)/sum(y) around r0 (delta method on per-round terms)."""
    n = len(x)
    if n < 2 or y.mean() == 0:
        return 0.0
    return float(np.std(x - r0 * y, ddof=1) / (math.sqrt(n) * y.mean()))


@dataclass(frozen=True)
class Efficiencies:
    eta_q: float
    eta_t: float
    eta_q_sigma: float
    eta_t_sigma: float
    eta_t_full: float
    b_s: int
    q_t: int
    b_t: int


def _per_round(transcript: Transcript):
    recs = transcript.records
    dec = np.fromiter((r.decodable for r in recs), dtype=float, count=len(recs))
    fwd = np.zeros(len(recs))
    checked_photons = np.zeros(len(recs))
    for i, r in enumerate(recs):
        fwd[i] = 2 * r.pair + (r.decoy_b is not None) + (r.decoy_c is not None)
        for agent in ("bob", "charlie"):
            a = r.action(agent)
            if a.mode != CHECK:
                continue
            checked_photons[i] += a.basis is not None
            d = r.decoy(agent)
            if transcript.config.decoy_mode == "insert" and d is not None and d.basis is not None:
                checked_photons[i] += 1
    return dec, fwd, checked_photons


def empirical_efficiencies(transcript: Transcript, key_bits: int | None = None) -> Efficiencies:
    """Measured eta_q and eta_t under the accounting in the module docstring."""
    cfg = transcript.config
    dec, fwd, checked = _per_round(transcript)
    b_s = int(2 * dec.sum())
    q_t = int(2 * fwd.sum())
    b_t = int(2 * checked.sum())
    eta_q = float(2 * dec.sum() / fwd.sum())
    eta_t = efficiency_total(EfficiencyInputs(b_s, q_t, b_t))
    pd_eff = effective_decoy_fraction(cfg.p_d, cfg.decoy_mode)
    sig_q = _ratio_sigma(2 * dec, fwd, theoretical_eta_q(pd_eff, cfg.p_c))
    sig_t = _ratio_sigma(2 * dec, 2 * fwd + 2 * checked, theoretical_eta_t(pd_eff, cfg.p_c))
    if key_bits is None:
        key_bits = 2 * sum(r.key_candidate for r in transcript.records)
    b_t_full = sum(ANNOUNCEMENT_BITS[a.kind] for a in transcript.announcements)
    eta_t_full = efficiency_total(EfficiencyInputs(key_bits, q_t, b_t_full))
    return Efficiencies(eta_q, eta_t, sig_q, sig_t, eta_t_full, b_s, q_t, b_t)


def decoy_yield(transcript: Transcript) -> dict[str, dict[str, float]]:
    """Per-leg sifted-decoy yield under both normalizations.

    ``per_round_checked`` counts only decoys measured in rounds where the agent
    chose check mode (expected (1/3) p_d p_c); ``per_round_all`` counts every
    sifted decoy (expected p_d / 3 in insert mode).
    """
    return {
        agent: {"per_round_checked": c.yield_per_round_checked, "per_round_all": c.yield_per_round_all}
        for agent, c in first_check(transcript).items()
    }


def _within(emp: float, theo: float, sigma: float, k: float = 5.0) -> bool:
    return bool(abs(emp - theo) <= k * sigma)


@dataclass
class Report:
    config: dict
    seed: int
    counts: dict
    qber: dict
    check_samples: dict
    insufficient_samples: list
    decoy_yield: dict
    efficiency: dict
    leakage_fraction: float
    aborted: bool
    failed_checks: list
    key_bits: int
    key_xor_holds: bool | None
    decoy_reading: str = field(default="")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        names = [f.name for f in fields(cls)]
        unknown = set(data) - set(names)
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**data)


def build_report(transcript: Transcript, config_echo: dict) -> tuple[Report, object]:
    """Run the checks and sifting, and gather everything into a Report.

    Returns the report and the KeyMaterial (None when the session aborted).
    """
    cfg = transcript.config
    checks = all_checks(transcript)
    try:
        keys = sift(transcript, checks)
        aborted, failed = False, []
    except ProtocolAbort as exc:
        keys, aborted, failed = None, True, exc.failed
    recs = transcript.records
    decodable = sum(r.decodable for r in recs)
    second = sum(r.selected_for_second_check for r in recs)
    counts = {
        "rounds": len(recs),
        "pair_rounds": sum(r.pair for r in recs),
        "decoys_bob": sum(r.decoy_b is not None for r in recs),
        "decoys_charlie": sum(r.decoy_c is not None for r in recs),
        "losses": sum(len(r.lost_legs) for r in recs),
        "checked": sum(r.checked for r in recs),
        "decoded": decodable,
        "second_checked": second,
        "sifted": decodable - second,
        "undecodable": len(recs) - decodable,
    }
    key_bits = len(keys) if keys is not None else 0
    eff = empirical_efficiencies(transcript, key_bits=2 * counts["sifted"])
    pd_eff = effective_decoy_fraction(cfg.p_d, cfg.decoy_mode)
    th_q, th_t = theoretical_eta_q(pd_eff, cfg.p_c), theoretical_eta_t(pd_eff, cfg.p_c)
    efficiency = {
        "eta_q": eff.eta_q,
        "eta_q_theory": th_q,
        "eta_q_sigma": eff.eta_q_sigma,
        "eta_q_within_5sigma": _within(eff.eta_q, th_q, eff.eta_q_sigma),
        "eta_t": eff.eta_t,
        "eta_t_theory": th_t,
        "eta_t_sigma": eff.eta_t_sigma,
        "eta_t_within_5sigma": _within(eff.eta_t, th_t, eff.eta_t_sigma),
        "eta_t_full_accounting": eff.eta_t_full,
        "b_s": eff.b_s,
        "q_t": eff.q_t,
        "b_t": eff.b_t,
        "p_d_effective": pd_eff,
    }
    key_rounds = keys.sifted_round_ids if keys is not None else None
    report = Report(
        config=config_echo,
        seed=cfg.seed,
        counts=counts,
        qber={name: c.qber for name, c in checks.items()},
        check_samples={name: c.samples for name, c in checks.items()},
        insufficient_samples=[name for name, c in checks.items() if c.insufficient],
        decoy_yield=decoy_yield(transcript),
        efficiency=efficiency,
        leakage_fraction=leakage_summary(transcript, key_rounds),
        aborted=aborted,
        failed_checks=failed,
        key_bits=key_bits,
        key_xor_holds=keys.xor_holds() if keys is not None else None,
        decoy_reading=cfg.decoy_mode,
    )
    return report, keys
