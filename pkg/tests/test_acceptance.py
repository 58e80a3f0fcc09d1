"""Acceptance run: one PASS/FAIL line per criterion.

Runs under pytest (the lines are printed straight to the terminal) or as a
script: ``python3 tests/test_acceptance.py``.
"""

import io
import statistics
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from ris_d2d.channel import ChannelConfig, Geometry, pathloss_db, sample_channels
from ris_d2d.cli import main as cli_main
from ris_d2d.experiments import Scenario, SweepSpec, mean_by_value, run_sweep
from ris_d2d.model import (
    ChannelRealization,
    Decision,
    SystemParams,
    align_phases,
    bits_transmitted,
    check_feasibility,
    effective_cascade,
    harvested_energy,
)
from ris_d2d.oracle import oracle_search
from ris_d2d.solver import (
    BlockInfeasible,
    BlockSolver,
    SolverConfig,
    Status,
    bcd_solve,
    dinkelbach_solve,
    solve_sp1,
    solve_sp1_scan,
    solve_sp2,
    solve_sp2_scan,
)

N_INSTANCES = 100
N_SEEDS = 100
FEAS_RTOL = 1e-9


def report(name, ok, detail, capsys=None):
    line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


# --- shared runs -------------------------------------------------------------------

@lru_cache(maxsize=None)
def oracle_runs():
    """BCD (DirectScan) and oracle on 100 default instances, N = 50."""
    p = SystemParams()
    geo = Geometry()
    out = []
    t0 = time.perf_counter()
    for seed in range(N_INSTANCES):
        ch = sample_channels(geo, p, ChannelConfig(seed=seed))
        bcd = bcd_solve(ch, p, SolverConfig())
        orc = oracle_search(ch, p)
        out.append((ch, bcd, orc))
    return out, time.perf_counter() - t0


@lru_cache(maxsize=None)
def sweeps():
    base = Scenario()
    cfg = SolverConfig()
    specs = {
        "distance": SweepSpec("ris_distance", (0.1, 1.0, 5.0, 10.0, 20.0), N_SEEDS),
        "zeta": SweepSpec("zeta", tuple(round(0.1 * i, 1) for i in range(1, 10)), N_SEEDS),
        "elements": SweepSpec("elements", (50, 100, 150, 200, 250), N_SEEDS),
    }
    return {name: run_sweep(spec, base, cfg) for name, spec in specs.items()}


# --- criteria ------------------------------------------------------------------------

def check_oracle_equivalence():
    runs, elapsed = oracle_runs()
    gaps = []
    for _, bcd, orc in runs:
        if bcd.status is Status.INFEASIBLE and orc.status is Status.INFEASIBLE:
            gaps.append(0.0)
        elif bcd.best is None or orc.best is None:
            gaps.append(np.inf)
        else:
            gaps.append((orc.bits - bcd.bits) / orc.bits)
    worst = max(abs(g) for g in gaps)
    ok = worst <= 0.01 and elapsed < 60.0
    return ok, f"max |gap| = {worst:.2e} over {len(gaps)} instances (limit 1e-2); runtime {elapsed:.1f} s (limit 60 s)"


def check_convergence():
    runs, _ = oracle_runs()
    cap = SolverConfig().max_outer_iters
    monotone = all(np.all(np.diff(bcd.objective_trace()) >= 0) for _, bcd, _ in runs)
    plateaus = [bcd.plateau_iteration() for _, bcd, _ in runs if bcd.best is not None]
    within_cap = all(bcd.status is not Status.MAX_ITERS and bcd.iterations <= cap for _, bcd, _ in runs)
    med = statistics.median(plateaus)
    ok = monotone and med <= 5 and within_cap
    return ok, (f"nondecreasing={monotone}, median plateau iteration = {med} (limit 5), "
                f"max iterations = {max(b.iterations for _, b, _ in runs)} (cap {cap})")


def check_trends():
    s = sweeps()
    dist = mean_by_value(s["distance"])
    d_vals = [dist[v] for v in sorted(dist)]
    dist_ok = all(b < a for a, b in zip(d_vals, d_vals[1:]))

    zb = mean_by_value(s["zeta"])
    ze = mean_by_value(s["zeta"], "energy")
    zb_vals = [zb[v] for v in sorted(zb)]
    ze_vals = [ze[v] for v in sorted(ze)]
    zeta_ok = all(b >= a for a, b in zip(zb_vals, zb_vals[1:])) and all(
        b >= a for a, b in zip(ze_vals, ze_vals[1:]))

    nb = mean_by_value(s["elements"])
    n_vals = [nb[v] for v in sorted(nb)]
    n_ok = all(b >= a for a, b in zip(n_vals, n_vals[1:]))

    base_ok = True
    worst_margin = np.inf
    for rows in s.values():
        ris = mean_by_value(rows, scheme="ris")
        nor = mean_by_value(rows, scheme="no_ris")
        base_max = max(nor.values())
        base_ok &= base_max < min(ris.values())
        worst_margin = min(worst_margin, min(ris.values()) - base_max)
    ok = dist_ok and zeta_ok and n_ok and base_ok
    detail = (f"distance strictly decreasing={dist_ok} {[f'{v:.4g}' for v in d_vals]}; "
              f"zeta nondecreasing (bits, energy)={zeta_ok}; N nondecreasing={n_ok} "
              f"{[f'{v:.4g}' for v in n_vals]}; baseline below all RIS means={base_ok} "
              f"(smallest margin {worst_margin:.4g} bits)")
    return ok, detail


def check_formulas():
    errs = []
    g = np.full(50, 1e-4)
    ch = ChannelRealization(1e-3, 1e-3, g, g, 1e-4, 1e-4)
    p = SystemParams(efficiency_factor=0.5, total_time=0.1, bs_power=1.0, bandwidth=1e6)
    errs.append(abs(harvested_energy(0, 0.05, ch, p) / 2.5e-8 - 1))
    errs.append(abs(harvested_energy(10, 0.05, ch, p) / 1.0e-7 - 1))
    e_unit = 0.05 * p.noise_power / 1e-6  # makes the SNR exactly 1 with k = 0
    errs.append(abs(bits_transmitted(0, 0.05, e_unit, ch, p) / 5.0e4 - 1))
    errs.append(abs(pathloss_db(1, True, 1e9) / 28.0 - 1))
    formula_err = max(errs)

    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 257))
        c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) * 10.0 ** rng.uniform(-6, 2)
        h = complex(*(rng.standard_normal(2) * 10.0 ** rng.uniform(-6, 2)))
        alpha = rng.uniform(0, 1)
        lhs = abs(h + effective_cascade(align_phases(h, np.angle(c)), c, alpha))
        rhs = abs(h) + alpha * np.abs(c).sum()
        worst = max(worst, abs(lhs - rhs) / rhs)
    ok = formula_err <= 1e-12 and worst <= 1e-10
    return ok, f"formula max rel err = {formula_err:.1e} (limit 1e-12); alignment identity max rel err = {worst:.1e} over 1000 vectors (limit 1e-10)"


def check_constraints():
    runs, _ = oracle_runs()
    decisions = []
    for ch, bcd, orc in runs:
        for res in (bcd, orc):
            if res.status is Status.CONVERGED:
                decisions.append((res.best, ch, SystemParams()))
    checked = len(decisions)
    bad = sum(not check_feasibility(d, ch, p).feasible(FEAS_RTOL) for d, ch, p in decisions)
    # sweep rows: re-sample the channel and re-check every converged decision
    for name, rows in sweeps().items():
        base = Scenario()
        for r in rows:
            if r.status != Status.CONVERGED.value:
                continue
            if name == "distance":
                sc = Scenario(ris_distance=r.sweep_value)
                p = base.params
            elif name == "zeta":
                p = SystemParams(efficiency_factor=r.sweep_value)
                sc = Scenario(params=p)
            else:
                p = SystemParams(num_elements=int(r.sweep_value))
                sc = Scenario(params=p)
            ch = sample_channels(sc.placed(), p, sc.channel.with_seed(r.seed))
            d = Decision.evaluate(r.m, r.k, r.tau_ms * 1e-3, ch, p)
            bad += not check_feasibility(d, ch, p).feasible(FEAS_RTOL)
            checked += 1
    return bad == 0, f"{checked - bad}/{checked} converged decisions feasible at rtol {FEAS_RTOL:g}"


def _random_block_instance(rng):
    p = SystemParams(
        efficiency_factor=rng.uniform(0.1, 0.9),
        min_harvest_energy=10.0 ** rng.uniform(-6, -3.5),
        element_power=10.0 ** rng.uniform(-8, -4),
        sampling_rate=10.0 ** rng.uniform(-1, 4),
    )
    geo = Geometry.with_ris_offset(10.0 ** rng.uniform(-1, 1))
    ch = sample_channels(geo, p, ChannelConfig(seed=int(rng.integers(2**32))))
    return p, ch, int(rng.integers(0, 51)), rng.uniform(0.002, 0.098)


def check_dinkelbach():
    err = 0.0
    r = dinkelbach_solve(lambda lam: ((x := 1.0 if lam <= 2.0 else 0.0), 2 * x, x + 1))
    err = max(err, abs(r.x - 1), abs(r.ratio - 1))
    r2 = dinkelbach_solve(lambda lam: (0.0, 4.2, 2.0))
    err = max(err, abs(r2.ratio - 2.1))
    one_step = r2.iterations == 1
    r3 = dinkelbach_solve(lambda lam: (5.0, 5.0, 1.0))
    err = max(err, abs(r3.x - 5), abs(r3.ratio - 5))

    rng = np.random.default_rng(99)
    sca = SolverConfig(block_solver=BlockSolver.PAPER_SCA)
    agree = total = better = 0
    while total < 200:
        p, ch, k, tau = _random_block_instance(rng)
        try:
            m_ref = solve_sp1_scan(k, tau, ch, p)
            k_ref = solve_sp2_scan(m_ref, tau, ch, p)
        except BlockInfeasible:
            continue
        total += 1
        try:
            m_sca = solve_sp1(k, tau, ch, p, sca)
            k_sca = solve_sp2(m_ref, tau, ch, p, sca)
        except BlockInfeasible:
            continue  # a failure counts as a disagreement
        agree += (m_sca == m_ref) and (k_sca == k_ref)
        e_ref, e_sca = harvested_energy(m_ref, tau, ch, p), harvested_energy(m_sca, tau, ch, p)
        b_ref = bits_transmitted(k_ref, tau, e_ref, ch, p)
        b_sca = bits_transmitted(k_sca, tau, e_ref, ch, p)
        better += (e_sca > e_ref) or (b_sca > b_ref)
    ok = err <= 1e-8 and one_step and agree / total >= 0.95 and better == 0
    return ok, (f"closed-form max err = {err:.1e} (limit 1e-8), constant ratio in {r2.iterations} iteration; "
                f"PaperSCA = DirectScan on {agree}/{total} blocks (limit 95%), PaperSCA better on {better}")


def check_determinism(tmp_dir):
    import pathlib

    tmp = pathlib.Path(tmp_dir)
    argv = ["sweep", "--var", "zeta", "--values", "0.1:0.9:0.1", "--seeds", "20", "--seed", "5"]
    outs = []
    for i in range(2):
        path = tmp / f"run{i}.csv"
        code = cli_main(argv + ["--out", str(path)], io.StringIO())
        outs.append((code, path.read_bytes(), (tmp / f"run{i}.summary.csv").read_bytes()))
    same = outs[0][1:] == outs[1][1:]
    return same and outs[0][0] == 0, (f"two CLI sweeps -> rows {'identical' if outs[0][1] == outs[1][1] else 'DIFFER'}, "
                                      f"summaries {'identical' if outs[0][2] == outs[1][2] else 'DIFFER'} "
                                      f"({len(outs[0][1])} bytes)")


CRITERIA = [
    ("1 oracle equivalence", check_oracle_equivalence),
    ("2 convergence", check_convergence),
    ("3 trend reproduction", check_trends),
    ("4 formula unit tests", check_formulas),
    ("5 constraint satisfaction", check_constraints),
    ("6 Dinkelbach and PaperSCA blocks", check_dinkelbach),
    ("7 determinism", check_determinism),
]


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, fn, capsys, tmp_path):
    ok, detail = fn(tmp_path) if fn is check_determinism else fn()
    report(name, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    import tempfile

    results = []
    with tempfile.TemporaryDirectory() as tmp:
        for name, fn in CRITERIA:
            ok, detail = fn(tmp) if fn is check_determinism else fn()
            results.append(report(name, ok, detail))
    sys.exit(0 if all(results) else 1)
