# An honest, noiseless session from preparation to sifted keys.
#
#    python3 demos/02_honest_session.py

from dcqss.metrics import build_report
from dcqss.protocol import SessionConfig, run_session

cfg = SessionConfig(rounds=5000, p_d=0.1, p_c=0.1, seed=1)
transcript = run_session(cfg)
report, keys = build_report(transcript, {"rounds": cfg.rounds, "seed": cfg.seed})

print("counts:", report.counts)
print("error rates:", report.qber)

# Alice's key is the XOR of the two agents' keys, bit for bit.
print("K_A = K_B xor K_C:", keys.xor_holds())
print("first 32 key bits")
print("  K_A", keys.bitstring(keys.k_a[:32]))
print("  K_B", keys.bitstring(keys.k_b[:32]))
print("  K_C", keys.bitstring(keys.k_c[:32]))

# Every round where someone checked, lost a photon, or was spent on the
# second check is gone from the key.
r = next(r for r in transcript.records if r.checked)
print("a checked round:", r.round_id, r.round_id in keys.sifted_round_ids)
