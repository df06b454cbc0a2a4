# Channel imperfections: loss only shrinks the key, depolarization shows up
# as errors in both checks.
#
#    python3 demos/06_noise_and_loss.py

from dcqss.channel import ChannelModel
from dcqss.metrics import build_report
from dcqss.protocol import SessionConfig, run_session

for loss, dep in [(0.0, 0.0), (0.2, 0.0), (0.0, 0.01), (0.0, 0.05)]:
    cfg = SessionConfig(rounds=10000, seed=6, channel=ChannelModel(loss, dep))
    report, _ = build_report(run_session(cfg), {})
    print(f"loss={loss:<4} depolarize={dep:<5} key bits {report.key_bits:>6}  "
          f"QBER bob {report.qber['first_check.bob']:.3f} charlie {report.qber['first_check.charlie']:.3f} "
          f"second {report.qber['second_check']:.3f}  aborted={report.aborted}")
