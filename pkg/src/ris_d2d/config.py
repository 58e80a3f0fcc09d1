"""Flat key=value run configuration.

Keys use engineering units at the boundary (ms, dBm, mJ, MHz, uW, GHz);
:meth:`RunConfig.build` converts everything to SI.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .channel import LINKS, ChannelConfig, Geometry
from .experiments import Scenario
from .model import AggregationMode, SystemParams, dbm_to_watts
from .oracle import OracleConfig
from .solver import BlockSolver, SolverConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Key:
    name: str
    kind: str  # int | float | str | bool | optint | optfloat
    default: object
    doc: str
    choices: tuple = ()


KEYS = [
    # system
    Key("T_ms", "float", 100.0, "total frame T [ms]"),
    Key("N", "int", 50, "RIS elements"),
    Key("sigma2_dBm", "float", -94.0, "noise power [dBm]"),
    Key("zeta", "float", 0.5, "energy efficiency factor in [0, 1)"),
    Key("Ps_W", "float", 1.0, "BS transmit power [W]"),
    Key("e_m_mJ", "float", 0.1, "minimum harvested energy [mJ]"),
    Key("Sr", "float", 1.0, "sampling rate [bit/s]"),
    Key("W_MHz", "float", 1.0, "bandwidth [MHz] (assumed default)"),
    Key("y_uW", "float", 1.0, "power per active element [uW] (assumed default)"),
    Key("fc_GHz", "float", 3.0, "carrier frequency [GHz]"),
    Key("alpha", "float", 1.0, "reflection amplitude in [0, 1]"),
    # geometry [m]
    Key("geo.bs_x", "float", 0.0, "BS x"),
    Key("geo.bs_y", "float", 0.0, "BS y"),
    Key("geo.s_x", "float", 0.5, "S x"),
    Key("geo.s_y", "float", 0.0, "S y"),
    Key("geo.d_x", "float", 5.5, "D x"),
    Key("geo.d_y", "float", 0.0, "D y"),
    Key("geo.ris_dist", "float", 0.1, "RIS distance from S [m]"),
    Key("geo.ris_angle_deg", "float", 90.0, "direction of the RIS seen from S [deg]"),
    # channel
    Key("chan.seed", "int", 0, "channel seed (unsigned 64-bit)"),
    Key("chan.mode", "str", "paper_mean", "cascade aggregation",
        tuple(m.value for m in AggregationMode)),
    *[Key(f"chan.los_{name}", "bool", los, f"{name} link in line of sight")
      for name, los in (("bs_s", False), ("bs_ris", True), ("ris_s", True),
                        ("s_d", False), ("s_ris", True), ("ris_d", True))],
    # solver
    Key("solver.max_outer_iters", "int", 50, "outer iteration cap"),
    Key("solver.rel_tol", "float", 1e-6, "relative objective change for convergence"),
    Key("solver.dinkelbach_max_iters", "int", 100, "Dinkelbach iteration cap"),
    Key("solver.dinkelbach_tol", "float", 1e-9, "Dinkelbach stopping tolerance"),
    Key("solver.tau_bracket_tol", "float", 1e-9, "tau search tolerance [s]"),
    Key("solver.init_m", "optint", None, "initial m (none -> ceil(N/2))"),
    Key("solver.init_k", "optint", None, "initial k (none -> ceil(N/2))"),
    Key("solver.init_tau_ms", "optfloat", None, "initial tau [ms] (none -> T/2)"),
    Key("solver.block_solver", "str", "direct_scan", "element block solver",
        tuple(b.value for b in BlockSolver)),
    # oracle
    Key("oracle.tau_grid_points", "int", 2001, "uniform tau grid size"),
    Key("oracle.refine_passes", "int", 2, "tau refinement passes"),
    Key("oracle.mk_stride", "optint", None, "(m, k) lattice stride (none -> auto)"),
]
KEY_MAP = {k.name: k for k in KEYS}
assert {f"chan.los_{n}" for n in LINKS} <= set(KEY_MAP)


def _parse(key: Key, raw: str):
    raw = raw.strip()
    try:
        if key.kind in ("optint", "optfloat") and raw.lower() in ("none", ""):
            return None
        if key.kind in ("int", "optint"):
            return int(raw)
        if key.kind in ("float", "optfloat"):
            return float(raw)
        if key.kind == "bool":
            low = raw.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise ConfigError(f"invalid value for key {key.name}: {raw!r} (expected {key.kind})") from None
    if key.choices and raw not in key.choices:
        raise ConfigError(f"invalid value for key {key.name}: {raw!r} (choices: {', '.join(key.choices)})")
    return raw


def _format(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


class RunConfig:
    """Effective configuration: defaults, then a config file, then overrides."""

    def __init__(self, values=None):
        self.values = {k.name: k.default for k in KEYS}
        for name, v in (values or {}).items():
            self.set(name, v)

    def set(self, name, value):
        if name not in KEY_MAP:
            raise ConfigError(f"unknown config key: {name}")
        self.values[name] = _parse(KEY_MAP[name], value) if isinstance(value, str) else value

    def update_from_text(self, text, source="<text>"):
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
            name, raw = (s.strip() for s in line.split("=", 1))
            self.set(name, raw)
        return self

    def update_from_file(self, path):
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
        return self.update_from_text(text, str(path))

    def apply_overrides(self, items):
        for item in items or ():
            if "=" not in item:
                raise ConfigError(f"override must be key=value, got {item!r}")
            name, raw = (s.strip() for s in item.split("=", 1))
            self.set(name, raw)
        return self

    def to_text(self) -> str:
        return "".join(f"{k.name} = {_format(self.values[k.name])}\n" for k in KEYS)

    def __getitem__(self, name):
        return self.values[name]

    # --- typed views -------------------------------------------------------
    def params(self) -> SystemParams:
        v = self.values
        return SystemParams(
            total_time=v["T_ms"] * 1e-3,
            num_elements=v["N"],
            noise_power=dbm_to_watts(v["sigma2_dBm"]),
            efficiency_factor=v["zeta"],
            bs_power=v["Ps_W"],
            min_harvest_energy=v["e_m_mJ"] * 1e-3,
            sampling_rate=v["Sr"],
            bandwidth=v["W_MHz"] * 1e6,
            element_power=v["y_uW"] * 1e-6,
            carrier_freq=v["fc_GHz"] * 1e9,
            reflection_amplitude=v["alpha"],
        )

    def scenario(self) -> Scenario:
        v = self.values
        geo = Geometry.with_ris_offset(v["geo.ris_dist"], v["geo.ris_angle_deg"],
                                       (v["geo.bs_x"], v["geo.bs_y"]), (v["geo.s_x"], v["geo.s_y"]),
                                       (v["geo.d_x"], v["geo.d_y"]))
        chan = ChannelConfig(seed=v["chan.seed"], mode=v["chan.mode"],
                             los_links={n: v[f"chan.los_{n}"] for n in LINKS})
        return Scenario(self.params(), geo, chan, v["geo.ris_dist"], v["geo.ris_angle_deg"])

    def solver(self) -> SolverConfig:
        v = self.values
        tau0 = v["solver.init_tau_ms"]
        return SolverConfig(
            max_outer_iters=v["solver.max_outer_iters"],
            rel_tol=v["solver.rel_tol"],
            dinkelbach_max_iters=v["solver.dinkelbach_max_iters"],
            dinkelbach_tol=v["solver.dinkelbach_tol"],
            tau_bracket_tol=v["solver.tau_bracket_tol"],
            init_m=v["solver.init_m"],
            init_k=v["solver.init_k"],
            init_tau=None if tau0 is None else tau0 * 1e-3,
            block_solver=v["solver.block_solver"],
        )

    def oracle(self) -> OracleConfig:
        v = self.values
        return OracleConfig(tau_grid_points=v["oracle.tau_grid_points"],
                            refine_passes=v["oracle.refine_passes"],
                            mk_stride=v["oracle.mk_stride"])

    def build(self):
        """(Scenario, SolverConfig, OracleConfig), validated."""
        try:
            return self.scenario(), self.solver(), self.oracle()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def describe_keys() -> str:
    return "\n".join(f"{k.name:28s} default={_format(k.default):12s} {k.doc}" for k in KEYS)
