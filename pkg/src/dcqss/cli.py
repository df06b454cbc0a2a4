"""Command-line front end: ``dcqss run | sweep | tables | selftest``.

Exit codes: 0 success, 1 usage or configuration error, 2 protocol abort (run)
or oracle failure (selftest).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .adversary import AttackSpec
from .channel import ChannelLeg, ChannelModel
from .metrics import build_report
from .protocol import SessionConfig, run_session
from .qcore import MeasBasis
from .qcore.tables import tables_document
from .selftest import main_selftest

EXIT_OK, EXIT_USAGE, EXIT_ABORT = 0, 1, 2

# Flat config document: key -> default.  Key order is the report's config echo order.
CONFIG_DEFAULTS = {
    "rounds": 10000,
    "p_d": 0.1,
    "p_c": 0.1,
    "epsilon_th": 0.05,
    "second_check_fraction": 0.1,
    "seed": 0,
    "attack": "none",
    "attack_leg": "alice->charlie",
    "attack_basis": "uniform",
    "dishonest": "bob",
    "loss": 0.0,
    "depolarize": 0.0,
    "noisy_legs": "all",
    "agent_decoy_variant": False,
    "decoy_mode": "insert",
    "min_samples": 50,
    "allow_no_checks": False,
}

_FLAG_TO_KEY = {
    "rounds": "rounds", "pd": "p_d", "pc": "p_c", "threshold": "epsilon_th",
    "second_check_fraction": "second_check_fraction", "seed": "seed", "attack": "attack",
    "attack_leg": "attack_leg", "attack_basis": "attack_basis", "dishonest": "dishonest",
    "loss": "loss", "depolarize": "depolarize", "noisy_legs": "noisy_legs",
    "agent_decoys": "agent_decoy_variant", "decoy_mode": "decoy_mode",
    "min_samples": "min_samples", "allow_no_checks": "allow_no_checks",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("config file must hold a flat JSON object")
    unknown = sorted(set(data) - set(CONFIG_DEFAULTS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _legs(spec: str):
    if spec == "all":
        return None
    try:
        return frozenset(ChannelLeg(s.strip()) for s in spec.split(","))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def session_config(flat: dict) -> SessionConfig:
    """Build a SessionConfig from a flat key/value document."""
    try:
        basis = None if flat["attack_basis"] == "uniform" else MeasBasis(flat["attack_basis"])
        attack = AttackSpec(flat["attack"], ChannelLeg(flat["attack_leg"]), basis, flat["dishonest"])
        channel = ChannelModel(float(flat["loss"]), float(flat["depolarize"]), _legs(flat["noisy_legs"]))
        return SessionConfig(
            rounds=int(flat["rounds"]),
            p_d=float(flat["p_d"]),
            p_c=float(flat["p_c"]),
            epsilon_th=float(flat["epsilon_th"]),
            second_check_fraction=float(flat["second_check_fraction"]),
            seed=int(flat["seed"]),
            attack=attack,
            channel=channel,
            agent_decoy_variant=bool(flat["agent_decoy_variant"]),
            decoy_mode=flat["decoy_mode"],
            min_samples=int(flat["min_samples"]),
            allow_no_checks=bool(flat["allow_no_checks"]),
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid config: {exc}") from None


def resolve_flat(args) -> dict:
    flat = dict(CONFIG_DEFAULTS)
    if getattr(args, "config", None):
        flat.update(load_config_file(args.config))
    for flag, key in _FLAG_TO_KEY.items():
        val = getattr(args, flag, None)
        if val is not None:
            flat[key] = val
    return flat


def cell_seed(master_seed: int, index: int) -> int:
    """Seed of sweep cell ``index``: first 64-bit word of SeedSequence([master, index])."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, dtype=np.uint64)[0])


def _write(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run_report(flat: dict):
    cfg = session_config(flat)
    transcript = run_session(cfg)
    return build_report(transcript, flat)


def cmd_run(args) -> int:
    flat = resolve_flat(args)
    report, _ = run_report(flat)
    _write(report.to_json(), args.out)
    if report.aborted:
        print(f"abort: {', '.join(report.failed_checks)}", file=sys.stderr)
        return EXIT_ABORT
    return EXIT_OK


SWEEP_COLUMNS = (
    "p_d", "p_c", "seed",
    "eta_q", "eta_q_theory", "eta_q_sigma", "eta_q_check",
    "eta_t", "eta_t_theory", "eta_t_sigma", "eta_t_check",
    "qber_first_bob", "qber_first_charlie", "qber_second", "aborted",
)


def _sweep_cell(flat: dict) -> dict:
    report, _ = run_report(flat)
    e = report.efficiency
    return {
        "p_d": flat["p_d"], "p_c": flat["p_c"], "seed": flat["seed"],
        "eta_q": e["eta_q"], "eta_q_theory": e["eta_q_theory"], "eta_q_sigma": e["eta_q_sigma"],
        "eta_q_check": "PASS" if e["eta_q_within_5sigma"] else "FAIL",
        "eta_t": e["eta_t"], "eta_t_theory": e["eta_t_theory"], "eta_t_sigma": e["eta_t_sigma"],
        "eta_t_check": "PASS" if e["eta_t_within_5sigma"] else "FAIL",
        "qber_first_bob": report.qber["first_check.bob"],
        "qber_first_charlie": report.qber["first_check.charlie"],
        "qber_second": report.qber["second_check"],
        "aborted": report.aborted,
    }


def sweep(flat: dict, grid_pd, grid_pc, jobs: int = 1) -> list[dict]:
    """One session per (p_d, p_c) cell, rows in grid order whatever the completion order."""
    cells = []
    for i, (pd, pc) in enumerate((pd, pc) for pd in grid_pd for pc in grid_pc):
        cell = dict(flat, p_d=pd, p_c=pc, seed=cell_seed(int(flat["seed"]), i))
        # zero check probability is an efficiency-limit cell
        cell["allow_no_checks"] = bool(flat["allow_no_checks"]) or pc == 0
        session_config(cell)  # validate every cell before running any
        cells.append(cell)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]


def format_table(rows: list[dict]) -> str:
    def fmt(v):
        if isinstance(v, float):
            return f"{v:.6f}"
        return str(v)

    cols = SWEEP_COLUMNS
    body = [[fmt(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(b[i]) for b in body)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(b, widths)) for b in body]
    return "\n".join(lines) + "\n"


def format_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _grid(text: str) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if not vals:
        raise UsageError("empty grid")
    return vals


def cmd_sweep(args) -> int:
    flat = resolve_flat(args)
    rows = sweep(flat, _grid(args.grid_pd), _grid(args.grid_pc), args.jobs)
    _write(format_table(rows), args.out)
    if args.csv:
        _write(format_csv(rows), args.csv)
    return EXIT_OK


def cmd_tables(args) -> int:
    _write(json.dumps(tables_document(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if main_selftest(strict_signs=args.strict_signs) else EXIT_ABORT


def _add_session_flags(p):
    p.add_argument("--config", help="flat JSON config file; flags override its values")
    p.add_argument("--rounds", type=int)
    p.add_argument("--pd", type=float, help="decoy probability per leg")
    p.add_argument("--pc", type=float, help="check-mode probability, below 0.5")
    p.add_argument("--threshold", type=float, help="error-rate threshold epsilon_th")
    p.add_argument("--second-check-fraction", type=float)
    p.add_argument("--attack", choices=["none", "intercept-resend", "fake-epr", "loss-only"])
    p.add_argument("--attack-leg", choices=[leg.value for leg in ChannelLeg])
    p.add_argument("--attack-basis", choices=["uniform", "Z", "X", "Y"])
    p.add_argument("--dishonest", choices=["bob", "charlie"])
    p.add_argument("--loss", type=float)
    p.add_argument("--depolarize", type=float)
    p.add_argument("--noisy-legs", help="comma-separated legs affected by loss/noise, or 'all'")
    p.add_argument("--agent-decoys", action="store_const", const=True, default=None,
                   help="checking agents return their own decoy photon")
    p.add_argument("--decoy-mode", choices=["insert", "replace"])
    p.add_argument("--min-samples", type=int)
    p.add_argument("--allow-no-checks", action="store_const", const=True, default=None)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcqss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run one session and write a JSON report")
    _add_session_flags(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a (p_d, p_c) grid and write a table")
    _add_session_flags(p)
    p.add_argument("--grid-pd", default="0,0.1,0.3")
    p.add_argument("--grid-pc", default="0,0.1,0.3")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--csv", help="also write the rows as CSV here")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", help="dump canonical states, representations and transition tables")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("selftest", help="run the exhaustive algebraic oracles")
    p.add_argument("--strict-signs", action="store_true",
                   help="require every printed transition sign verbatim")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dcqss: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
