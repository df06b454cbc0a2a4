"""Exact complex amplitude vectors over at most eight qubits."""
from __future__ import annotations

import numpy as np

ATOL = 1e-12
MAX_QUBITS = 8


class StateVector:
    """Normalized pure state of ``n_qubits`` qubits.

    Amplitudes are stored as a flat complex128 array of length ``2**n``.
    Qubit 0 is the most significant bit of the index, which is also the axis
    order of ``amps.reshape([2] * n)``.
    """

    __slots__ = ("amps", "n_qubits")

    def __init__(self, amps, normalize: bool = False):
        amps = np.asarray(amps, dtype=complex).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size != 1 << n or not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"amplitude vector length {amps.size} is not 2**n with 1 <= n <= {MAX_QUBITS}")
        norm2 = np.vdot(amps, amps).real
        if normalize:
            if not 0 < norm2 < np.inf:
                raise ValueError("cannot normalize a zero or non-finite vector")
            amps = amps / np.sqrt(norm2)
            norm2 = np.vdot(amps, amps).real
        # also rejects NaN/Inf, for which the comparison is False
        if not abs(norm2 - 1) <= ATOL:
            raise ValueError(f"state is not normalized (squared norm {norm2!r})")
        self.amps = amps
        self.n_qubits = n

    @classmethod
    def product(cls, *factors: "StateVector") -> "StateVector":
        amps = factors[0].amps
        for f in factors[1:]:
            amps = np.kron(amps, f.amps)
        return cls(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def apply(self, matrix: np.ndarray, qubit: int) -> "StateVector":
        """New state with a single-qubit matrix applied at ``qubit``."""
        if not 0 <= qubit < self.n_qubits:
            raise IndexError(f"qubit {qubit} out of range for {self.n_qubits} qubits")
        psi = self.amps.reshape(1 << qubit, 2, -1)
        return StateVector(np.matmul(matrix, psi).reshape(-1))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, amps={np.round(self.amps, 6)!r})"
