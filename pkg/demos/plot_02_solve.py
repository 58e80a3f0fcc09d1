"""
Solving one instance
====================

Alternate over the Phase-1 element count m, the Phase-2 count k and the
D2D slot tau, then print the decision and the constraint slacks.
"""

# %%

from ris_d2d.channel import ChannelConfig, Geometry, sample_channels
from ris_d2d.model import SystemParams, check_feasibility
from ris_d2d.solver import BlockSolver, SolverConfig, bcd_solve, solve_fixed_elements

p = SystemParams()
ch = sample_channels(Geometry(), p, ChannelConfig(seed=42))

res = bcd_solve(ch, p, SolverConfig())
d = res.best
print(res.status.value, "after", res.iterations, "iterations")
print(f"m={d.m} k={d.k} tau={d.tau_ms:.3f} ms  e={d.energy:.4e} J  bits={d.bits:.6g}")
print(check_feasibility(d, ch, p))

# %%
# The convexified element blocks land on the same answer here.

sca = bcd_solve(ch, p, SolverConfig(block_solver=BlockSolver.PAPER_SCA))
print(f"PaperSCA blocks: bits={sca.bits:.6g}, disagreements with the scan: {sca.sca_disagreements}")

# %%
# Without the RIS only tau is left to choose.

base = solve_fixed_elements(0, 0, ch, p)
print("no RIS:", base.status.value, f"{base.bits:.6g} bits" if base.best else base.message)
