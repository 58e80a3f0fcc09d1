"""Command-line entry point: ``ris-d2d {solve,verify,sweep,trace}``.

Exit codes
----------
0  success (solve: Converged; verify: every gap within threshold)
1  configuration or usage error
2  solve: Infeasible
3  solve: iteration cap reached (MaxIters)
4  I/O error
5  verify: at least one BCD/oracle gap above the threshold
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

from .channel import sample_channels
from .config import ConfigError, RunConfig, describe_keys
from .experiments import (
    SweepSpec,
    csv_text,
    emit_csv,
    run_convergence_trace,
    run_sweep,
    summarize,
)
from .model import check_feasibility
from .oracle import oracle_search
from .solver import BlockSolver, Status, bcd_solve

EXIT_OK, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_MAXITERS, EXIT_IO, EXIT_GAP = 0, 1, 2, 3, 4, 5
STATUS_EXIT = {Status.CONVERGED: EXIT_OK, Status.INFEASIBLE: EXIT_INFEASIBLE,
               Status.MAX_ITERS: EXIT_MAXITERS}
GAP_THRESHOLD = 0.01


def load_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        cfg.update_from_file(args.config)
    cfg.apply_overrides(args.set)
    if args.seed is not None:
        cfg.set("chan.seed", str(args.seed))
    cfg.build()  # validate early
    return cfg


def echo_config(cfg: RunConfig, out):
    out.write("# effective configuration\n")
    out.write(cfg.to_text())
    out.write("\n")


def _decision_dict(res):
    d = res.best
    out = {"status": res.status.value, "iterations": res.iterations, "message": res.message}
    if d is not None:
        out.update(m=d.m, k=d.k, tau_ms=d.tau_ms, energy_J=d.energy, bits=d.bits)
    return out


def cmd_solve(args, out=sys.stdout) -> int:
    cfg = load_config(args)
    sc, scfg, _ = cfg.build()
    echo_config(cfg, out)
    ch = sample_channels(sc.placed(), sc.params, sc.channel)
    res = bcd_solve(ch, sc.params, scfg)
    out.write(f"status: {res.status.value}\n")
    out.write(f"iterations: {res.iterations}\n")
    if res.best is not None:
        d = res.best
        out.write(f"m = {d.m}\nk = {d.k}\ntau = {d.tau_ms:.9g} ms\n"
                  f"energy = {d.energy:.9g} J\nbits = {d.bits:.9g}\n")
        out.write("constraints:\n")
        out.write(str(check_feasibility(d, ch, sc.params)) + "\n")
    else:
        out.write(f"reason: {res.message}\n")
    result = _decision_dict(res)
    if args.out:
        _write_text(args.out, json.dumps(result, indent=2) + "\n")
    out.write("RESULT " + json.dumps(result) + "\n")
    return STATUS_EXIT[res.status]


def cmd_verify(args, out=sys.stdout) -> int:
    cfg = load_config(args)
    sc, scfg, ocfg = cfg.build()
    echo_config(cfg, out)
    seed0 = sc.channel.seed
    failures = 0
    disagreements = 0
    rows = ["seed,bcd_status,bcd_bits,oracle_status,oracle_bits,rel_gap,pass"]
    for seed in range(seed0, seed0 + args.seeds):
        ch = sample_channels(sc.placed(), sc.params, sc.channel.with_seed(seed))
        bcd = bcd_solve(ch, sc.params, scfg)
        orc = oracle_search(ch, sc.params, ocfg)
        disagreements += bcd.sca_disagreements
        b_inf = bcd.status is Status.INFEASIBLE
        o_inf = orc.status is Status.INFEASIBLE
        if b_inf and o_inf:
            gap, ok = 0.0, True
        elif b_inf or o_inf:
            gap, ok = math.inf, False
        else:
            gap = (orc.bits - bcd.bits) / orc.bits
            ok = abs(gap) <= GAP_THRESHOLD
        failures += not ok
        rows.append(f"{seed},{bcd.status.value},{bcd.bits:.12g},{orc.status.value},"
                    f"{orc.bits:.12g},{gap:.3e},{'pass' if ok else 'FAIL'}")
        out.write(f"seed {seed}: bcd={bcd.bits:.9g} ({bcd.status.value}) "
                  f"oracle={orc.bits:.9g} ({orc.status.value}) gap={gap:.3e} "
                  f"{'pass' if ok else 'FAIL'}\n")
    if scfg.block_solver is BlockSolver.PAPER_SCA:
        out.write(f"SCA/scan block disagreements: {disagreements}\n")
    out.write(f"verify: {args.seeds - failures}/{args.seeds} within {GAP_THRESHOLD:.0%}\n")
    if args.out:
        _write_text(args.out, "\n".join(rows) + "\n")
    return EXIT_OK if failures == 0 else EXIT_GAP


def parse_values(text):
    """``a,b,c`` or inclusive ``start:stop:step``."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(x) for x in parts)
        if step <= 0:
            raise ConfigError("range step must be > 0")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(n)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse sweep values {text!r}") from None


SUMMARY_COLUMNS = ("sweep_value", "scheme", "n", "feasible", "bits_mean", "bits_min", "bits_max",
                   "energy_mean", "tau_ms_mean")


def cmd_sweep(args, out=sys.stdout) -> int:
    cfg = load_config(args)
    sc, scfg, _ = cfg.build()
    try:
        spec = SweepSpec(args.var, tuple(parse_values(args.values)), args.seeds,
                         include_no_ris_baseline=args.baseline)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    echo_config(cfg, out)
    t0 = time.perf_counter()
    rows = run_sweep(spec, sc, scfg)
    summary = summarize(rows)
    if args.out:
        emit_csv(rows, args.out)
        emit_csv(summary, _summary_path(args.out))
    out.write(csv_text(summary, SUMMARY_COLUMNS))
    out.write(f"# {len(rows)} rows in {time.perf_counter() - t0:.1f} s\n")
    return EXIT_OK


def _summary_path(path):
    path = str(path)
    return (path[:-4] if path.endswith(".csv") else path) + ".summary.csv"


def cmd_trace(args, out=sys.stdout) -> int:
    cfg = load_config(args)
    sc, scfg, _ = cfg.build()
    echo_config(cfg, out)
    status, rows = run_convergence_trace(sc, sc.channel.seed, scfg)
    out.write(f"status: {status.value}\n")
    text = csv_text(rows, ("iteration", "m", "k", "tau_ms", "bits"))
    out.write(text)
    if args.out:
        emit_csv(rows, args.out, ("iteration", "m", "k", "tau_ms", "bits"))
    return STATUS_EXIT[status]


def _write_text(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ris-d2d", description=__doc__.split("\n\n")[0],
                                 epilog="config keys:\n" + describe_keys(),
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file ('#' starts a comment)")
    common.add_argument("--seed", type=int, help="channel seed (overrides chan.seed)")
    common.add_argument("--out", help="output path")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override one config key (repeatable)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="solve one channel draw")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="compare BCD against the exhaustive oracle")
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="parameter sweep to CSV")
    p.add_argument("--var", required=True, choices=["ris_distance", "zeta", "elements"])
    p.add_argument("--values", required=True, help="a,b,c or start:stop:step (inclusive)")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--baseline", action=argparse.BooleanOptionalAction, default=True,
                   help="also solve the no-RIS baseline (m = k = 0)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("trace", parents=[common], help="per-iteration objective of one solve")
    p.set_defaults(func=cmd_trace)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
