# Measured qubit and total efficiency against the closed forms on a small grid.
# Decoys replace whole rounds here, so p_d is literally the decoy share of
# forward photons.
#
#    python3 demos/05_efficiency_sweep.py

from dcqss import cli

flat = dict(cli.CONFIG_DEFAULTS, rounds=20000, decoy_mode="replace", seed=3)
rows = cli.sweep(flat, [0.0, 0.1, 0.3], [0.0, 0.1, 0.3])
print(cli.format_table(rows), end="")

# Same thing in insert mode: decoys ride along as extra photons, so the
# formulas hold at p_d / (1 + p_d).
flat["decoy_mode"] = "insert"
rows = cli.sweep(flat, [0.3], [0.1])
r = rows[0]
print(f"\ninsert mode, p_d=0.3: eta_q {r['eta_q']:.4f} vs theory {r['eta_q_theory']:.4f}")
