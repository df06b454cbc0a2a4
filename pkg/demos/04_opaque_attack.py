# Bob cheats: he swaps Charlie's photon for half of his own phi+ pair.
# Without decoys the cheat is invisible and Bob learns every operation of
# Charlie.  With decoys Charlie's leg shows a 50% error rate.
#
#    python3 demos/04_opaque_attack.py

from dcqss.adversary import AttackSpec
from dcqss.metrics import build_report
from dcqss.protocol import SessionConfig, run_session

for p_d in (0.0, 0.1, 0.3):
    cfg = SessionConfig(rounds=10000, p_d=p_d, seed=8, attack=AttackSpec("fake-epr", dishonest="bob"))
    report, _ = build_report(run_session(cfg), {})
    print(f"p_d={p_d}: leakage {report.leakage_fraction:.3f}, "
          f"charlie decoy QBER {report.qber['first_check.charlie']:.3f}, "
          f"second check {report.qber['second_check']:.3f}, "
          f"aborted={report.aborted} {report.failed_checks}")
