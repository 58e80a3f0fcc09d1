"""Exhaustive reference solver over (m, k) and a refined tau grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ChannelRealization, Decision, InvalidInput, SystemParams, check_feasibility
from .solver import IterationRecord, SolveResult, Status

LN2 = np.log(2.0)


@dataclass(frozen=True)
class OracleConfig:
    tau_grid_points: int = 2001
    refine_passes: int = 2
    narrowing: float = 10.0
    mk_stride: int | None = None  # None -> 1 for N <= 100, else 5
    refine_margin: float = 0.01  # refine pairs within this fraction of the coarse best

    def __post_init__(self):
        if self.tau_grid_points < 3:
            raise InvalidInput("tau_grid_points must be >= 3")
        if self.refine_passes < 0:
            raise InvalidInput("refine_passes must be >= 0")
        if self.narrowing <= 1:
            raise InvalidInput("narrowing must be > 1")
        if self.mk_stride is not None and self.mk_stride < 1:
            raise InvalidInput("mk_stride must be >= 1")

    def stride_for(self, N) -> int:
        if self.mk_stride is not None:
            return self.mk_stride
        return 1 if N <= 100 else 5


def _grid_bits(ms, ks, taus, ch, p):
    """Objective over the (m, k, tau) grid with infeasible points set to -inf.

    ``taus`` is either 1-D (shared by all pairs) or shaped (len(ms), len(ks), P).
    """
    T, N, y = p.total_time, p.num_elements, p.element_power
    ms = np.asarray(ms)
    ks = np.asarray(ks)
    taus = np.asarray(taus, dtype=float)
    shared = taus.ndim == 1
    t3 = taus[None, None, :] if shared else taus
    a = np.abs(ch.h_bs) + p.reflection_amplitude * ch.phase1_sum(ms)  # (M,)
    g = np.abs(ch.h_sd) + p.reflection_amplitude * ch.phase2_sum(ks)  # (K,)
    M = ms[:, None, None]
    K = ks[None, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        e = p.efficiency_factor * p.bs_power * (a * a)[:, None, None] * (T - t3)
        # m-only constraints first; pairs failing them never reach the log
        ok = (t3 > 0) & (t3 < T) & (e >= p.min_harvest_energy) & (M * y <= (N - M) * e)
        ok = ok & (K * y <= (N - K) * e)
        bits = (p.bandwidth / LN2) * t3 * np.log1p((e / (t3 * p.noise_power)) * (g * g)[None, :, None])
        ok &= p.sampling_rate * (T - t3) <= bits
    return np.where(ok, bits, -np.inf)


def _best_index(vals):
    """Flat argmax with the first (smallest m, k, tau) winning ties; None if all -inf."""
    i = int(np.argmax(vals))
    if not np.isfinite(vals.flat[i]):
        return None
    return np.unravel_index(i, vals.shape)


def _search(ms, ks, ch, p, cfg: OracleConfig):
    """Best (m, k, tau, bits) on the lattice ``ms x ks``, with per-pair tau refinement."""
    T = p.total_time
    P = cfg.tau_grid_points
    taus = np.linspace(0.0, T, P + 2)[1:-1]
    vals = _grid_bits(ms, ks, taus, ch, p)  # (M, K, P)
    best_j = np.argmax(vals, axis=2)  # first max along tau
    best_v = np.take_along_axis(vals, best_j[..., None], axis=2)[..., 0].copy()
    best_t = taus[best_j].copy()
    history = [float(best_v.max())]
    if not np.isfinite(history[0]):
        return None, history
    # first window spans +-1 coarse cell, narrowed each following pass
    width = 2.0 * (taus[1] - taus[0]) * cfg.narrowing
    for _ in range(cfg.refine_passes):
        # only pairs near the incumbent can overtake it within one grid cell
        cand = np.argwhere(best_v >= (1.0 - cfg.refine_margin) * best_v.max())
        width /= cfg.narrowing
        offs = np.linspace(-width / 2, width / 2, P)
        for i, j in cand:
            grid = np.clip(best_t[i, j] + offs, 0.0, T)
            vals = _grid_bits(ms[i:i + 1], ks[j:j + 1], grid, ch, p)[0, 0]
            q = int(np.argmax(vals))
            # the incumbent is replaced only by a strictly better point
            if vals[q] > best_v[i, j]:
                best_v[i, j] = vals[q]
                best_t[i, j] = grid[q]
        history.append(float(best_v.max()))
    idx = _best_index(best_v)
    if idx is None:
        return None, history
    i, j = idx
    return (int(ms[i]), int(ks[j]), float(best_t[i, j]), float(best_v[i, j])), history


def oracle_search(ch: ChannelRealization, p: SystemParams, cfg: OracleConfig | None = None,
                  return_history=False):
    """Brute-force optimum of the bit-maximisation problem.

    Every (m, k) in {0..N}^2 is enumerated (on a stride lattice for large N,
    followed by a full-resolution pass around the lattice optimum).
    """
    cfg = cfg or OracleConfig()
    N = p.num_elements
    stride = cfg.stride_for(N)
    full = np.arange(N + 1)
    if stride == 1:
        found, history = _search(full, full, ch, p, cfg)
    else:
        lattice = np.union1d(np.arange(0, N + 1, stride), [N])
        found, history = _search(lattice, lattice, ch, p, cfg)
        if found is not None:
            m0, k0 = found[0], found[1]
            ms = full[max(m0 - stride, 0): m0 + stride + 1]
            ks = full[max(k0 - stride, 0): k0 + stride + 1]
            local, h2 = _search(ms, ks, ch, p, cfg)
            history += h2
            if local is not None and local[3] > found[3]:
                found = local
    if found is None:
        res = SolveResult(None, (), Status.INFEASIBLE, "no feasible grid point")
    else:
        m, k, tau, _ = found
        d = Decision.evaluate(m, k, tau, ch, p)
        rep = check_feasibility(d, ch, p)
        if not rep.feasible():
            raise AssertionError(f"oracle returned an infeasible point: {rep.violated()}")
        res = SolveResult(d, (IterationRecord(1, m, k, tau, d.bits, {"oracle": "ok"}),), Status.CONVERGED)
    return (res, history) if return_history else res
