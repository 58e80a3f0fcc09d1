"""
Convergence of the outer loop
=============================

Objective per outer iteration, from a deliberately poor starting point and
from the default one.
"""

# %%

from ris_d2d.experiments import Scenario, run_convergence_trace
from ris_d2d.solver import SolverConfig

for label, cfg in [("default start", SolverConfig()),
                   ("m=k=1, tau=1 ms", SolverConfig(init_m=1, init_k=1, init_tau=1e-3))]:
    status, rows = run_convergence_trace(Scenario(), 42, cfg)
    print(f"\n{label}: {status.value}")
    for r in rows:
        print(f"  it {r.iteration}: m={r.m:2d} k={r.k:2d} tau={r.tau_ms:8.4f} ms  bits={r.bits:.10g}")
