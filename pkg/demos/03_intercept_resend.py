# An outside eavesdropper measures and resends every photon on one forward leg.
# Decoys on that leg come back wrong a third of the time.
#
#    python3 demos/03_intercept_resend.py

import math

from dcqss.adversary import AttackSpec
from dcqss.channel import ChannelLeg
from dcqss.metrics import build_report
from dcqss.protocol import SessionConfig, run_session
from dcqss.qcore import MeasBasis

for basis in (None, "Z"):
    spec = AttackSpec("intercept-resend", ChannelLeg.ALICE_TO_CHARLIE,
                      None if basis is None else MeasBasis(basis))
    cfg = SessionConfig(rounds=20000, p_d=0.3, seed=4, attack=spec)
    report, _ = build_report(run_session(cfg), {})
    n = report.check_samples["first_check.charlie"]
    q = report.qber["first_check.charlie"]
    print(f"attack basis {basis or 'uniform'}: charlie-leg decoy QBER {q:.3f} "
          f"+- {math.sqrt(q * (1 - q) / n):.3f} (n={n}), bob leg {report.qber['first_check.bob']:.3f}, "
          f"second check {report.qber['second_check']:.3f}, aborted={report.aborted}")

# A fixed Z basis still disturbs the X and Y decoys: 2/3 of decoys, half wrong.
