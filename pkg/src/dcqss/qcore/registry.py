"""Photon bookkeeping across independently created joint states.

Every live photon maps to one qubit of one registered state.  Photons held by
different parties stay in the same joint state for as long as they are
entangled; measured photons are projected out immediately and retired.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .states import BellSet, MeasBasis, UnitaryCode
from .statevector import MAX_QUBITS, StateVector


# rows are the conjugated eigenvectors, so row k of P @ psi is the outcome-k branch
_PROJECTORS = {b: np.array([e.conj() for e in b.eigenvectors]) for b in MeasBasis}


class DeadPhotonError(LookupError):
    """Raised when an operation names a photon that is not (or no longer) live."""


@dataclass(frozen=True)
class PhotonRef:
    photon_id: Hashable
    state_handle: int
    qubit_index: int


def _sample(probs: np.ndarray, rng) -> int:
    total = probs.sum()
    u = rng.random() * total
    acc = 0.0
    for k, p in enumerate(probs):
        acc += p
        if u < acc:
            return k
    # u landed on the rounding slack at the top end
    return int(np.flatnonzero(probs)[-1])


class PairRegistry:
    def __init__(self):
        self._states: dict[int, StateVector] = {}
        self._members: dict[int, list] = {}
        self._owner: dict[Hashable, int] = {}
        self._handles = itertools.count()

    # -- registration -----------------------------------------------------
    def add(self, state: StateVector, photon_ids: Sequence[Hashable]) -> int:
        if len(photon_ids) != state.n_qubits:
            raise ValueError("one photon id per qubit required")
        if len(set(photon_ids)) != len(photon_ids):
            raise ValueError("duplicate photon ids")
        for pid in photon_ids:
            if pid in self._owner:
                raise ValueError(f"photon {pid!r} is already live")
        handle = next(self._handles)
        self._states[handle] = state
        self._members[handle] = list(photon_ids)
        for pid in photon_ids:
            self._owner[pid] = handle
        return handle

    def is_live(self, pid) -> bool:
        return pid in self._owner

    def ref(self, pid) -> PhotonRef:
        handle = self._handle(pid)
        return PhotonRef(pid, handle, self._members[handle].index(pid))

    def live_photons(self) -> list:
        return list(self._owner)

    def state(self, handle: int) -> StateVector:
        return self._states[handle]

    def __len__(self):
        return len(self._states)

    def _handle(self, pid) -> int:
        try:
            return self._owner[pid]
        except KeyError:
            raise DeadPhotonError(f"photon {pid!r} is not live") from None

    # -- structure ----------------------------------------------------------
    def merge(self, pid_a, pid_b) -> int:
        """Put the states holding two photons into one joint (tensor) state."""
        ha, hb = self._handle(pid_a), self._handle(pid_b)
        if ha == hb:
            return ha
        sa, sb = self._states[ha], self._states[hb]
        if sa.n_qubits + sb.n_qubits > MAX_QUBITS:
            raise ValueError(f"merged state would exceed {MAX_QUBITS} qubits")
        self._states[ha] = StateVector(np.kron(sa.amps, sb.amps))
        moved = self._members.pop(hb)
        del self._states[hb]
        self._members[ha].extend(moved)
        for pid in moved:
            self._owner[pid] = ha
        return ha

    def _retire(self, handle: int, positions: Sequence[int], remaining: np.ndarray | None):
        members = self._members[handle]
        for pos in positions:
            del self._owner[members[pos]]
        kept = [pid for i, pid in enumerate(members) if i not in positions]
        if kept:
            self._members[handle] = kept
            self._states[handle] = StateVector(remaining, normalize=True)
        else:
            del self._members[handle]
            del self._states[handle]

    def joint_state(self, photon_ids: Sequence[Hashable]) -> StateVector:
        """State of exactly these photons, in the order given.

        The photons must make up whole registered states (a photon entangled
        with anything outside the list has no pure reduced state).
        """
        handles = []
        for pid in photon_ids:
            h = self._handle(pid)
            if h not in handles:
                handles.append(h)
        order = []
        amps = np.ones(1, dtype=complex)
        for h in handles:
            order.extend(self._members[h])
            amps = np.kron(amps, self._states[h].amps)
        if sorted(map(repr, order)) != sorted(map(repr, photon_ids)):
            raise ValueError("photons are entangled with photons outside the requested set")
        n = len(order)
        perm = [order.index(pid) for pid in photon_ids]
        amps = np.transpose(amps.reshape([2] * n), perm).reshape(-1)
        return StateVector(amps)

    # -- operations ---------------------------------------------------------
    def apply_matrix(self, matrix: np.ndarray, pid) -> None:
        r = self.ref(pid)
        self._states[r.state_handle] = self._states[r.state_handle].apply(matrix, r.qubit_index)

    def apply_local(self, u: UnitaryCode, pid) -> None:
        self.apply_matrix(u.matrix, pid)

    def _single_branches(self, pid, basis: MeasBasis):
        r = self.ref(pid)
        st = self._states[r.state_handle]
        psi = st.amps.reshape(1 << r.qubit_index, 2, -1)
        proj = np.matmul(_PROJECTORS[basis], psi)
        return r, proj.transpose(1, 0, 2).reshape(2, -1)

    def single_probabilities(self, pid, basis: MeasBasis) -> np.ndarray:
        """Outcome distribution of measure_single without collapsing anything."""
        _, branches = self._single_branches(pid, basis)
        return np.sum(np.abs(branches) ** 2, axis=1)

    def measure_single(self, pid, basis: MeasBasis, rng=None, outcome: int | None = None) -> int:
        """Projective measurement of one photon; the photon is consumed.

        Pass ``outcome`` to post-select a branch instead of sampling (it must
        have nonzero probability).
        """
        r, branches = self._single_branches(pid, basis)
        probs = np.sum(np.abs(branches) ** 2, axis=1)
        k = _sample(probs, rng) if outcome is None else outcome
        if probs[k] <= 0:
            raise ValueError(f"outcome {k} has zero probability")
        self._retire(r.state_handle, [r.qubit_index], branches[k])
        return k

    def discard(self, pid, rng) -> None:
        """Trace a photon out by measuring it in Z and forgetting the result."""
        self.measure_single(pid, MeasBasis.Z, rng)

    def _bell_branches(self, p1, p2, bell_set: BellSet):
        if p1 == p2:
            raise ValueError("Bell measurement needs two distinct photons")
        handle = self.merge(p1, p2)
        st = self._states[handle]
        members = self._members[handle]
        q1, q2 = members.index(p1), members.index(p2)
        if st.n_qubits == 2:
            psi = st.amps.reshape(4, 1) if q1 == 0 else st.amps.reshape(2, 2).T.reshape(4, 1)
        else:
            psi = np.moveaxis(st.amps.reshape([2] * st.n_qubits), (q1, q2), (0, 1)).reshape(4, -1)
        branches = bell_set.matrix.conj() @ psi
        return handle, (q1, q2), branches

    def bell_probabilities(self, p1, p2, bell_set: BellSet) -> np.ndarray:
        """Outcome distribution of bell_measure; may merge states, never collapses."""
        _, _, branches = self._bell_branches(p1, p2, bell_set)
        return np.sum(np.abs(branches) ** 2, axis=1)

    def bell_measure(self, p1, p2, bell_set: BellSet, rng=None, outcome: int | None = None) -> int:
        """Project photons (p1, p2) onto ``bell_set``; p1 is the first tensor factor."""
        handle, positions, branches = self._bell_branches(p1, p2, bell_set)
        probs = np.sum(np.abs(branches) ** 2, axis=1)
        k = _sample(probs, rng) if outcome is None else outcome
        if probs[k] <= 0:
            raise ValueError(f"outcome {k} has zero probability")
        self._retire(handle, positions, branches[k])
        return k
