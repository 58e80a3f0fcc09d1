"""Parameter sweeps and convergence traces over seeded channel draws."""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .channel import ChannelConfig, Geometry, sample_channels
from .model import InvalidInput, SystemParams
from .solver import SolverConfig, Status, bcd_solve, solve_fixed_elements


class SweepVariable(str, enum.Enum):
    RIS_DISTANCE = "ris_distance"
    ZETA = "zeta"
    ELEMENTS = "elements"


@dataclass(frozen=True)
class Scenario:
    """Everything needed to build one instance, apart from the channel seed."""

    params: SystemParams = field(default_factory=SystemParams)
    geometry: Geometry = field(default_factory=Geometry)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    ris_distance: float = 0.1  # RIS offset from S [m]
    ris_angle_deg: float = 90.0

    def placed(self) -> Geometry:
        g = self.geometry
        return Geometry.with_ris_offset(self.ris_distance, self.ris_angle_deg,
                                        g.bs_pos, g.s_pos, g.d_pos)


@dataclass(frozen=True)
class SweepSpec:
    sweep_variable: SweepVariable
    values: tuple
    num_seeds: int = 100
    include_no_ris_baseline: bool = True
    fixed_overrides: dict = field(default_factory=dict)  # SystemParams field -> value

    def __post_init__(self):
        object.__setattr__(self, "sweep_variable", SweepVariable(self.sweep_variable))
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise InvalidInput("sweep values must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InvalidInput("sweep values must be strictly increasing")
        if self.num_seeds < 1:
            raise InvalidInput("num_seeds must be >= 1")
        if self.sweep_variable is SweepVariable.ELEMENTS and any(v != int(v) or v < 1 for v in vals):
            raise InvalidInput("element counts must be integers >= 1")
        object.__setattr__(self, "values", vals)


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    seed: int
    scheme: str  # "ris" or "no_ris"
    m: int
    k: int
    tau_ms: float
    energy_J: float
    bits: float
    status: str
    iterations: int


COLUMNS = tuple(f.name for f in fields(SweepRow))


def scenario_for(spec: SweepSpec, base: Scenario, value) -> Scenario:
    p = replace(base.params, **spec.fixed_overrides) if spec.fixed_overrides else base.params
    var = spec.sweep_variable
    if var is SweepVariable.ZETA:
        return replace(base, params=replace(p, efficiency_factor=float(value)))
    if var is SweepVariable.ELEMENTS:
        if value != int(value):
            raise InvalidInput(f"element count must be an integer, got {value}")
        return replace(base, params=replace(p, num_elements=int(value)))
    return replace(base, params=p, ris_distance=float(value))


def _row(value, seed, scheme, res) -> SweepRow:
    if res.best is None:
        return SweepRow(value, seed, scheme, 0, 0, math.nan, 0.0, 0.0, res.status.value, res.iterations)
    d = res.best
    return SweepRow(value, seed, scheme, d.m, d.k, d.tau_ms, d.energy, d.bits, res.status.value,
                    res.iterations)


def run_instance(sc: Scenario, seed, cfg: SolverConfig | None = None, baseline=False):
    """Sample the channel for ``seed`` and solve; the baseline pins m = k = 0."""
    ch = sample_channels(sc.placed(), sc.params, sc.channel.with_seed(seed))
    if baseline:
        return solve_fixed_elements(0, 0, ch, sc.params, cfg)
    return bcd_solve(ch, sc.params, cfg)


def run_sweep(spec: SweepSpec, base: Scenario, cfg: SolverConfig | None = None, base_seed=None):
    """One RIS row (and optionally one baseline row) per sweep value and seed.

    Seeds are ``base_seed + i`` for ``i < num_seeds``; the same seed gives
    the same fading draw at every sweep value.  Rows come back sorted by
    sweep value, then seed, then scheme.
    """
    cfg = cfg or SolverConfig()
    base_seed = base.channel.seed if base_seed is None else base_seed
    rows = []
    for value in spec.values:
        sc = scenario_for(spec, base, value)
        for i in range(spec.num_seeds):
            seed = base_seed + i
            schemes = [("ris", False)] + ([("no_ris", True)] if spec.include_no_ris_baseline else [])
            for scheme, baseline in schemes:
                try:
                    res = run_instance(sc, seed, cfg, baseline)
                    rows.append(_row(value, seed, scheme, res))
                except Exception as exc:  # a bad row never aborts the sweep
                    rows.append(SweepRow(value, seed, scheme, 0, 0, math.nan, 0.0, 0.0,
                                         f"Error:{type(exc).__name__}", 0))
    rows.sort(key=lambda r: (r.sweep_value, r.seed, r.scheme != "ris"))
    return rows


@dataclass(frozen=True)
class SummaryRow:
    sweep_value: float
    scheme: str
    n: int
    feasible: int
    bits_mean: float
    bits_min: float
    bits_max: float
    energy_mean: float
    energy_min: float
    energy_max: float
    tau_ms_mean: float
    tau_ms_min: float
    tau_ms_max: float


def summarize(rows):
    """Per (sweep value, scheme) statistics.

    Infeasible rows count as zero bits and zero energy (nothing is sent);
    slot statistics use feasible rows only and are NaN when there are none.
    """
    groups = {}
    for r in rows:
        groups.setdefault((r.sweep_value, r.scheme), []).append(r)
    out = []
    for (value, scheme), rs in sorted(groups.items(), key=lambda kv: (kv[0][0], kv[0][1] != "ris")):
        bits = np.array([r.bits for r in rs])
        energy = np.array([r.energy_J for r in rs])
        tau = np.array([r.tau_ms for r in rs if r.status == Status.CONVERGED.value])
        t_stats = (tau.mean(), tau.min(), tau.max()) if tau.size else (math.nan,) * 3
        out.append(SummaryRow(value, scheme, len(rs), int(tau.size),
                              bits.mean(), bits.min(), bits.max(),
                              energy.mean(), energy.min(), energy.max(), *t_stats))
    return out


def mean_by_value(rows, attr="bits", scheme="ris"):
    return {s.sweep_value: getattr(s, f"{attr}_mean") for s in summarize(rows) if s.scheme == scheme}


@dataclass(frozen=True)
class TraceRow:
    iteration: int
    m: int
    k: int
    tau_ms: float
    bits: float


def run_convergence_trace(sc: Scenario, seed, cfg: SolverConfig | None = None):
    """Per-outer-iteration objective of one solve: (status, rows)."""
    res = run_instance(sc, seed, cfg)
    if res.status is Status.INFEASIBLE:
        return res.status, []
    return res.status, [TraceRow(r.iteration, r.m, r.k, r.tau * 1e3, r.bits) for r in res.trace]


# --------------------------------------------------------------------------
# CSV output

def _fmt(v):
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "nan" if math.isnan(v) else f"{float(v):.12g}"
    return str(v)


def csv_text(rows, columns=None) -> str:
    if columns is None:
        columns = tuple(f.name for f in fields(rows[0])) if rows else COLUMNS
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(getattr(r, c)) for c in columns])
    return buf.getvalue()


def emit_csv(rows, destination, columns=None):
    """Write rows as UTF-8 CSV with a header line and 12 significant digits."""
    path = Path(destination)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text(rows, columns))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
