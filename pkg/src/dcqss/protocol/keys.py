"""Mapping Bell outcomes and agent operations to 2-bit key codes.

Members carry a (letter, sign) label: phi/Phi = 0, psi/Psi = 1 for the letter,
+ = 0, - = 1 for the sign, packed as ``2*letter + sign``.  With
U0..U3 -> 00, 01, 10, 11 every operation on photon C acts on the label as an
XOR with its own code, in both sets.  Operations on photon B do the same in
the standard set but act through a fixed permutation in the rotated set,
which ``remap_agent_code`` undoes so that K_A = K_B xor K_C holds everywhere.
"""
from __future__ import annotations

from ..qcore import BellSet

# Rotated set, photon B: U1 flips letter and sign, U2 flips the sign, U3 flips the letter.
_ROTATED_B = (0b00, 0b11, 0b01, 0b10)


def remap_agent_code(code: int, side: str, bell_set: BellSet) -> int:
    if not 0 <= code < 4:
        raise ValueError(f"code must be 0..3, got {code}")
    if side not in ("B", "C"):
        raise ValueError(f"side must be 'B' or 'C', got {side!r}")
    if side == "B" and bell_set is BellSet.ROTATED:
        return _ROTATED_B[code]
    return code


def decode_combined(prepared: int, outcome: int, bell_set: BellSet) -> int:
    """Label of the combined operation that takes ``prepared`` to ``outcome``."""
    if not (0 <= prepared < 4 and 0 <= outcome < 4):
        raise ValueError("member indices must be 0..3")
    return prepared ^ outcome


def code_bits(code: int) -> tuple[int, int]:
    return code >> 1, code & 1
