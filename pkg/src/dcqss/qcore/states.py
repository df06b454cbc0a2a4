"""Named single-qubit bases, the two Bell-type basis sets, encoding unitaries.

Qubit ordering: the first tensor factor (photon B) is the most significant
bit of the basis-state index, so ``|b c>`` lives at index ``2*b + c``.
"""
from __future__ import annotations

import enum
from math import sqrt

import numpy as np

from .statevector import ATOL, StateVector

_S = 1 / sqrt(2)

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)


class MeasBasis(enum.Enum):
    Z = "Z"
    X = "X"
    Y = "Y"

    @property
    def eigenvectors(self) -> tuple[np.ndarray, np.ndarray]:
        """(|+b>, |-b>); outcome bit 0 is the + eigenvector."""
        return _EIGEN[self]

    def eigenvector(self, bit: int) -> np.ndarray:
        return _EIGEN[self][bit]


_EIGEN = {
    MeasBasis.Z: (KET0, KET1),
    MeasBasis.X: (_S * np.array([1, 1], dtype=complex), _S * np.array([1, -1], dtype=complex)),
    MeasBasis.Y: (_S * np.array([1, 1j], dtype=complex), _S * np.array([1, -1j], dtype=complex)),
}

BASES = (MeasBasis.Z, MeasBasis.X, MeasBasis.Y)


class UnitaryCode(enum.IntEnum):
    """Encoding operations; the integer value is the 2-bit key code."""

    U0 = 0
    U1 = 1
    U2 = 2
    U3 = 3

    @property
    def matrix(self) -> np.ndarray:
        return _UNITARIES[self]

    @property
    def bits(self) -> str:
        return format(int(self), "02b")


_UNITARIES = {
    UnitaryCode.U0: np.eye(2, dtype=complex),
    UnitaryCode.U1: np.array([[1, 0], [0, -1]], dtype=complex),   # sigma_z
    UnitaryCode.U2: np.array([[0, 1], [1, 0]], dtype=complex),    # sigma_x
    UnitaryCode.U3: np.array([[0, 1], [-1, 0]], dtype=complex),   # i sigma_y
}


class BellSet(enum.Enum):
    STANDARD = "standard"
    ROTATED = "rotated"

    @property
    def names(self) -> tuple[str, str, str, str]:
        return _MEMBER_NAMES[self]

    def member(self, name: str) -> int:
        return _MEMBER_NAMES[self].index(name)

    @property
    def matrix(self) -> np.ndarray:
        """4x4 array whose row k is the canonical amplitude vector of member k."""
        return _BELL_MATRICES[self]


# Member index = 2*letter + sign, letter: phi/Phi = 0, psi/Psi = 1; sign: + = 0, - = 1.
_MEMBER_NAMES = {
    BellSet.STANDARD: ("phi+", "phi-", "psi+", "psi-"),
    BellSet.ROTATED: ("Phi+", "Phi-", "Psi+", "Psi-"),
}


def member_name(bell_set: BellSet, member: int) -> str:
    return _MEMBER_NAMES[bell_set][member]


def letter_bit(member: int) -> int:
    return member >> 1


def sign_bit(member: int) -> int:
    return member & 1


def _standard() -> np.ndarray:
    z0, z1 = _EIGEN[MeasBasis.Z]
    k = np.kron
    return np.array([
        _S * (k(z0, z0) + k(z1, z1)),
        _S * (k(z0, z0) - k(z1, z1)),
        _S * (k(z0, z1) + k(z1, z0)),
        _S * (k(z0, z1) - k(z1, z0)),
    ])


def _rotated() -> np.ndarray:
    # canonical in the X (photon B) x Z (photon C) expansion
    z0, z1 = _EIGEN[MeasBasis.Z]
    xp, xm = _EIGEN[MeasBasis.X]
    k = np.kron
    return np.array([
        _S * (k(xp, z0) + 1j * k(xm, z1)),
        _S * (k(xp, z0) - 1j * k(xm, z1)),
        _S * (k(xp, z1) + 1j * k(xm, z0)),
        _S * (k(xp, z1) - 1j * k(xm, z0)),
    ])


_BELL_MATRICES = {BellSet.STANDARD: _standard(), BellSet.ROTATED: _rotated()}
for _m in _BELL_MATRICES.values():
    _m.setflags(write=False)

ALL_PREPARATIONS = tuple((s, m) for s in BellSet for m in range(4))


def state_of(bell_set: BellSet, member: int) -> StateVector:
    """Canonical 2-qubit state of one member of a Bell-type set."""
    if not 0 <= member < 4:
        raise ValueError(f"member index must be 0..3, got {member}")
    return StateVector(_BELL_MATRICES[bell_set][member].copy())


# Decoy index -> (basis, outcome bit): |0>, |1>, |+x>, |-x>, |+y>, |-y>
DECOY_STATES = (
    (MeasBasis.Z, 0), (MeasBasis.Z, 1),
    (MeasBasis.X, 0), (MeasBasis.X, 1),
    (MeasBasis.Y, 0), (MeasBasis.Y, 1),
)


def prepare_decoy(index: int) -> StateVector:
    if not 0 <= index < 6:
        raise ValueError(f"decoy index must be 0..5, got {index}")
    basis, bit = DECOY_STATES[index]
    return StateVector(basis.eigenvector(bit).copy())


def fidelity(a: StateVector, b: StateVector) -> float:
    """|<a|b>|^2, insensitive to global phase."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


def equal_up_to_phase(a: StateVector, b: StateVector, tol: float = ATOL) -> bool:
    return fidelity(a, b) >= 1 - tol


def density_average(states, weights=None) -> np.ndarray:
    """Weighted mixture sum_i w_i |s_i><s_i| of 2-qubit pure states."""
    states = list(states)
    if weights is None:
        weights = np.full(len(states), 1 / len(states))
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(states):
        raise ValueError("one weight per state required")
    if np.any(weights < 0) or abs(weights.sum() - 1) > ATOL:
        raise ValueError("weights must be non-negative and sum to 1")
    rho = np.zeros((4, 4), dtype=complex)
    for s, w in zip(states, weights):
        if s.n_qubits != 2:
            raise ValueError("density_average takes 2-qubit states only")
        rho += w * np.outer(s.amps, s.amps.conj())
    return rho


def is_density_matrix(rho: np.ndarray, tol: float = ATOL) -> bool:
    if rho.shape != (4, 4):
        return False
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -1e-10)
