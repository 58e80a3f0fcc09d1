"""
Parameter sweeps
================

Mean bits over 100 channel draws as the RIS moves away from S, as the
harvesting efficiency grows, and as the panel gets larger.  Each sweep also
solves the no-RIS baseline on the same draws.
"""

# %%

from ris_d2d.experiments import Scenario, SweepSpec, run_sweep, summarize

SEEDS = 100
sweeps = {
    "RIS-S distance [m]": SweepSpec("ris_distance", (0.1, 1, 5, 10, 20), SEEDS),
    "zeta": SweepSpec("zeta", [0.1 * i for i in range(1, 10)], SEEDS),
    "N": SweepSpec("elements", (50, 100, 150, 200, 250), SEEDS),
}

for title, spec in sweeps.items():
    print(f"\n{title}")
    print(f"{'value':>8s} {'RIS bits':>12s} {'no-RIS bits':>12s} {'energy [mJ]':>12s} {'tau [ms]':>9s}")
    summary = {(s.sweep_value, s.scheme): s for s in summarize(run_sweep(spec, Scenario()))}
    for v in spec.values:
        ris, base = summary[(v, "ris")], summary[(v, "no_ris")]
        print(f"{v:8.3g} {ris.bits_mean:12.6g} {base.bits_mean:12.6g} "
              f"{ris.energy_mean * 1e3:12.4f} {ris.tau_ms_mean:9.3f}")
