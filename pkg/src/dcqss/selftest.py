"""Exhaustive algebraic oracles behind ``dcqss selftest``.

Each oracle recomputes a property from raw amplitudes (explicit index loops
or plain matrix products) and compares it with what the simulator reports.
``state_fn`` lets a caller substitute the canonical-state constructor, which
is how fault injection is exercised.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .protocol.keys import decode_combined, remap_agent_code
from .qcore import (
    ATOL, BellSet, PairRegistry, UnitaryCode, check_representations,
    StateVector, density_average, member_name, state_of,
)
from .qcore.tables import DOCUMENTED_REPRESENTATION_MISMATCHES, PRINTED_TRANSITIONS

# Printed transition entries whose sign (global phase) disagrees with direct
# computation.  No rephasing of the rotated states removes them.
DOCUMENTED_SIGN_DISCREPANCIES = frozenset({
    ("C", "U1", "Psi+"), ("C", "U1", "Psi-"),
    ("B", "U1", "Phi+"), ("B", "U1", "Phi-"), ("B", "U1", "Psi+"), ("B", "U1", "Psi-"),
    ("B", "U2", "Psi+"), ("B", "U2", "Psi-"),
    ("B", "U3", "Phi+"), ("B", "U3", "Phi-"), ("B", "U3", "Psi+"), ("B", "U3", "Psi-"),
})


@dataclass
class OracleResult:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def _matrix(state_fn, bell_set):
    return np.array([state_fn(bell_set, m).amps for m in range(4)])


def _local(u: UnitaryCode, side: str) -> np.ndarray:
    eye = np.eye(2)
    return np.kron(u.matrix, eye) if side == "B" else np.kron(eye, u.matrix)


def oracle_representations(state_fn=state_of) -> OracleResult:
    mismatches = set()
    for c in check_representations():
        canon = state_fn(c.rep.bell_set, c.rep.bell_set.member(c.rep.member)).amps
        f = abs(np.vdot(canon, c.rep.assemble().amps)) ** 2
        if f < 1 - ATOL:
            mismatches.add((c.rep.bell_set, c.rep.member, c.rep.bases))
    ok = mismatches == set(DOCUMENTED_REPRESENTATION_MISMATCHES)
    names = sorted(f"{m} {''.join(b.value for b in bases)}" for _, m, bases in mismatches)
    return OracleResult("representation equivalence", ok,
                        f"{len(check_representations()) - len(mismatches)} match, mismatches={names}",
                        sorted(map(repr, mismatches ^ set(DOCUMENTED_REPRESENTATION_MISMATCHES))))


def _transition_rows(state_fn):
    rows = []
    for e in PRINTED_TRANSITIONS:
        mat = _matrix(state_fn, e.bell_set)
        out = _local(e.u, e.side) @ mat[e.bell_set.member(e.source)]
        ov = mat.conj() @ out
        k = int(np.argmax(np.abs(ov)))
        rows.append((e, member_name(e.bell_set, k), ov[k], abs(abs(ov[k]) - 1) <= ATOL))
    return rows


def oracle_transition_states(state_fn=state_of) -> OracleResult:
    """Every printed entry lands on the printed target, phase ignored."""
    bad = [f"{e.u.name} on {e.side}: {e.source}" for e, tgt, _, unit in _transition_rows(state_fn)
           if not unit or tgt != e.target]
    n_std = sum(e.bell_set is BellSet.STANDARD for e in PRINTED_TRANSITIONS)
    n_rot = len(PRINTED_TRANSITIONS) - n_std
    return OracleResult("transition tables (states)", not bad,
                        f"{len(PRINTED_TRANSITIONS) - len(bad)}/{len(PRINTED_TRANSITIONS)} "
                        f"({n_std} standard, {n_rot} rotated)", bad)


def sign_discrepancies(state_fn=state_of) -> set:
    out = set()
    for e, tgt, ph, unit in _transition_rows(state_fn):
        if not unit or tgt != e.target or abs(ph - e.sign) > ATOL:
            out.add((e.side, e.u.name, e.source))
    return out


def rephasing_solution(bell_set: BellSet, state_fn=state_of):
    """Phases e^{i t_m} making every printed sign of ``bell_set`` hold, or None.

    Rephasing |m> -> e^{i t_m}|m> multiplies the computed phase of an entry
    source -> target by e^{i(t_source - t_target)}.  The required ratios form a
    graph over the four members; a solution exists iff every cycle is
    consistent, which a breadth-first walk settles.
    """
    edges = {m: [] for m in range(4)}
    for e, tgt, ph, unit in _transition_rows(state_fn):
        if e.bell_set is not bell_set:
            continue
        if not unit or tgt != e.target:
            return None
        s, t = bell_set.member(e.source), bell_set.member(tgt)
        # need e^{i(t_s - t_t)} = sign / ph
        ratio = e.sign / ph
        edges[s].append((t, 1 / ratio))
        edges[t].append((s, ratio))
    phase = {0: 1 + 0j}
    queue = [0]
    while queue:
        a = queue.pop()
        for b, r in edges[a]:
            want = phase[a] * r
            if b not in phase:
                phase[b] = want
                queue.append(b)
            elif abs(phase[b] - want) > 1e-9:
                return None
    return [phase.get(m, 1 + 0j) for m in range(4)]


def oracle_transition_signs(state_fn=state_of, bell_set: BellSet | None = None,
                            strict: bool = False) -> OracleResult:
    """Printed signs with phases tracked.

    Non-strict: discrepancies must equal the documented list.  Strict: every
    printed sign must be reproduced verbatim.
    """
    entries = [e for e in PRINTED_TRANSITIONS if bell_set is None or e.bell_set is bell_set]
    keys = {(e.side, e.u.name, e.source) for e in entries}
    found = {k for k in sign_discrepancies(state_fn) if k in keys}
    expected = set() if strict else (DOCUMENTED_SIGN_DISCREPANCIES & keys)
    label = "all" if bell_set is None else bell_set.value
    name = f"printed signs ({label}{', strict' if strict else ''})"
    detail = f"{len(entries) - len(found)}/{len(entries)} reproduced"
    if found:
        detail += f", {len(found)} discrepancies"
    return OracleResult(name, found == expected, detail, sorted(found ^ expected))


def oracle_xor_key(state_fn=state_of) -> OracleResult:
    """8 preparations x 16 operation pairs: Alice's outcome is certain and
    decode_combined equals remap(code_B) xor remap(code_C)."""
    bad, total = [], 0
    for bell_set in BellSet:
        mat = _matrix(state_fn, bell_set)
        for m in range(4):
            for ub, uc in itertools.product(UnitaryCode, repeat=2):
                total += 1
                out = np.kron(ub.matrix, uc.matrix) @ mat[m]
                probs = np.abs(mat.conj() @ out) ** 2
                k = int(np.argmax(probs))
                lhs = decode_combined(m, k, bell_set)
                rhs = remap_agent_code(int(ub), "B", bell_set) ^ remap_agent_code(int(uc), "C", bell_set)
                if abs(probs[k] - 1) > ATOL or lhs != rhs:
                    bad.append((member_name(bell_set, m), ub.name, uc.name))
    return OracleResult("XOR key property", not bad, f"{total - len(bad)}/{total}", bad)


def brute_force_swap(prepared: np.ndarray, bell: np.ndarray, outcome: int) -> tuple[float, np.ndarray]:
    """Probability and post-measurement (B, C') state when (B', C) of
    prepared_{BC} x phi+_{B'C'} is projected onto Bell vector ``bell[outcome]``.

    Qubit order of the 16-amplitude input is (B, C, B', C'); written with
    explicit index loops on purpose.
    """
    phi = np.zeros(4, dtype=complex)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    full = np.zeros(16, dtype=complex)
    for b, c, b2, c2 in itertools.product((0, 1), repeat=4):
        full[8 * b + 4 * c + 2 * b2 + c2] = prepared[2 * b + c] * phi[2 * b2 + c2]
    out = np.zeros(4, dtype=complex)
    for b, c2 in itertools.product((0, 1), repeat=2):
        acc = 0j
        for b2, c in itertools.product((0, 1), repeat=2):
            # projector row indexed as (B', C)
            acc += np.conj(bell[outcome][2 * b2 + c]) * full[8 * b + 4 * c + 2 * b2 + c2]
        out[2 * b + c2] = acc
    p = float(np.vdot(out, out).real)
    return p, (out / np.sqrt(p) if p > 0 else out)


def swap_table(prepared: np.ndarray):
    """Registry version of the swap: per outcome, (probability, surviving (B, C') state)."""
    rows = []
    for k in range(4):
        reg = PairRegistry()
        reg.add(StateVector(prepared), ["B", "C"])
        reg.add(state_of(BellSet.STANDARD, 0), ["B'", "C'"])
        p = reg.bell_probabilities("B'", "C", BellSet.STANDARD)[k]
        reg.bell_measure("B'", "C", BellSet.STANDARD, outcome=k)
        rows.append((float(p), reg.joint_state(["B", "C'"]).amps))
    return rows


def oracle_swap(state_fn=state_of) -> OracleResult:
    bad = []
    std = BellSet.STANDARD.matrix
    for bell_set in BellSet:
        for m in range(4):
            prepared = state_fn(bell_set, m).amps
            reg_rows = swap_table(prepared)
            for k in range(4):
                p_bf, st_bf = brute_force_swap(prepared, std, k)
                p_reg, st_reg = reg_rows[k]
                same = abs(p_bf - p_reg) <= ATOL and abs(abs(np.vdot(st_bf, st_reg)) ** 2 - 1) <= ATOL
                if not same or abs(p_bf - 0.25) > ATOL:
                    bad.append((member_name(bell_set, m), k))
            # phi+ outcome restores the prepared state on (B, C')
            if abs(abs(np.vdot(prepared, reg_rows[0][1])) ** 2 - 1) > ATOL:
                bad.append((member_name(bell_set, m), "phi+ not restored"))
    return OracleResult("entanglement-swap table", not bad, f"{32 - len(bad)}/32 outcomes", bad)


def oracle_mixed_state(state_fn=state_of) -> OracleResult:
    bad = []
    target = np.eye(4) / 4
    for bell_set in BellSet:
        for m in range(4):
            s = state_fn(bell_set, m)
            encoded = [StateVector(np.kron(ub.matrix, uc.matrix) @ s.amps)
                       for ub, uc in itertools.product(UnitaryCode, repeat=2)]
            rho = density_average(encoded)
            if not np.allclose(rho, target, atol=ATOL, rtol=0):
                bad.append(member_name(bell_set, m))
    return OracleResult("mixed state of encoded pairs", not bad, f"{8 - len(bad)}/8 equal I/4", bad)


def run_selftest(state_fn=state_of, strict_signs: bool = False) -> list[OracleResult]:
    oracles = [
        ("representation equivalence", lambda: oracle_representations(state_fn)),
        ("transition tables (states)", lambda: oracle_transition_states(state_fn)),
        ("printed signs (standard)", lambda: oracle_transition_signs(state_fn, BellSet.STANDARD, strict=True)),
        ("printed signs (rotated)", lambda: oracle_transition_signs(state_fn, BellSet.ROTATED, strict=strict_signs)),
        ("XOR key property", lambda: oracle_xor_key(state_fn)),
        ("entanglement-swap table", lambda: oracle_swap(state_fn)),
        ("mixed state of encoded pairs", lambda: oracle_mixed_state(state_fn)),
    ]
    results = []
    for name, run in oracles:
        try:
            results.append(run())
        except Exception as exc:  # a broken state constructor must show up as FAIL
            results.append(OracleResult(name, False, f"raised {type(exc).__name__}: {exc}"))
    return results


def main_selftest(strict_signs: bool = False, out=print) -> bool:
    t0 = time.perf_counter()
    results = run_selftest(strict_signs=strict_signs)
    for r in results:
        out(r.line())
    ok = all(r.passed for r in results)
    out(f"{'PASS' if ok else 'FAIL'}  selftest ({time.perf_counter() - t0:.2f} s)")
    return ok
