# Two Bell sets and the dense-coding action of the four local operations.
#
#    python3 demos/01_bell_states_and_dense_coding.py

import numpy as np

from dcqss.qcore import BellSet, UnitaryCode, member_name, state_of, transition

np.set_printoptions(precision=3, suppress=True)

# Canonical amplitudes, qubit order (B, C).
for bell_set in BellSet:
    print(f"--- {bell_set.value} set ---")
    for m in range(4):
        print(f"{member_name(bell_set, m):>5}", state_of(bell_set, m).amps)

# Any operation on either side permutes the set; the phase is global.
print()
for side in "BC":
    print(f"operations on {side}, rotated set:")
    for u in UnitaryCode:
        row = []
        for m in range(4):
            k, phase = transition(BellSet.ROTATED, m, u, side)
            row.append(f"{member_name(BellSet.ROTATED, m)}->{member_name(BellSet.ROTATED, k)}"
                       f" ({phase.real:+.0f}{phase.imag:+.0f}i)")
        print(f"  {u.name}:", ", ".join(row))
