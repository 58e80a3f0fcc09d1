"""
Checking against brute force
============================

The decision space is small enough to enumerate: every (m, k) pair and a
refined tau grid.  Compare the block-coordinate answer to it on a few seeds.
"""

# %%

import time

from ris_d2d.channel import ChannelConfig, Geometry, sample_channels
from ris_d2d.model import SystemParams
from ris_d2d.oracle import oracle_search
from ris_d2d.solver import bcd_solve

p = SystemParams()
geo = Geometry()
for seed in range(5):
    ch = sample_channels(geo, p, ChannelConfig(seed=seed))
    t0 = time.perf_counter()
    bcd = bcd_solve(ch, p)
    t1 = time.perf_counter()
    orc, hist = oracle_search(ch, p, return_history=True)
    t2 = time.perf_counter()
    gap = (orc.bits - bcd.bits) / orc.bits
    print(f"seed {seed}: bcd {bcd.bits:.8g} ({(t1 - t0) * 1e3:.1f} ms)  "
          f"oracle {orc.bits:.8g} ({(t2 - t1) * 1e3:.0f} ms)  gap {gap:+.1e}")
    print("   oracle incumbent per refinement pass:", [f"{h:.10g}" for h in hist])
