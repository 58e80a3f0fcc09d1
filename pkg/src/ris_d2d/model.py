"""System model of the two-phase RIS-assisted batteryless link.

Phase 1 (duration ``T - tau``): the sensor S harvests energy from the base
station, helped by ``m`` RIS elements.  Phase 2 (duration ``tau``): S spends
that energy on a D2D transmission to D, helped by ``k`` RIS elements.

All quantities are SI (seconds, watts, joules, hertz).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class InvalidInput(ValueError):
    """Raised when arguments violate an operation's preconditions."""


class AggregationMode(str, enum.Enum):
    """How the cascaded RIS gain of ``n`` active elements is formed.

    PAPER_MEAN uses ``n * mean(g)``; EXACT_SUM uses the sum of the ``n``
    largest per-element magnitudes (the coherently aligned sum).
    """

    PAPER_MEAN = "paper_mean"
    EXACT_SUM = "exact_sum"


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemParams:
    total_time: float = 0.1  # T [s]
    num_elements: int = 50  # N
    noise_power: float = dbm_to_watts(-94.0)  # sigma^2 [W]
    efficiency_factor: float = 0.5  # zeta
    bs_power: float = 1.0  # Ps [W]
    min_harvest_energy: float = 1e-4  # e_m [J]
    sampling_rate: float = 1.0  # Sr [bit/s]
    bandwidth: float = 1e6  # W [Hz]
    element_power: float = 1e-6  # y [W per active element]
    carrier_freq: float = 3e9  # [Hz]
    reflection_amplitude: float = 1.0  # alpha, shared by all elements

    def __post_init__(self):
        checks = [
            (self.total_time > 0, "total_time must be > 0"),
            (int(self.num_elements) == self.num_elements and self.num_elements >= 1,
             "num_elements must be an integer >= 1"),
            (self.noise_power > 0, "noise_power must be > 0"),
            (self.bs_power > 0, "bs_power must be > 0"),
            (0 <= self.efficiency_factor < 1, "efficiency_factor must lie in [0, 1)"),
            (0 <= self.reflection_amplitude <= 1, "reflection_amplitude must lie in [0, 1]"),
            (self.bandwidth > 0, "bandwidth must be > 0"),
            (self.element_power >= 0, "element_power must be >= 0"),
            (self.sampling_rate >= 0, "sampling_rate must be >= 0"),
            (self.min_harvest_energy >= 0, "min_harvest_energy must be >= 0"),
            (self.carrier_freq > 0, "carrier_freq must be > 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InvalidInput(msg)
        object.__setattr__(self, "num_elements", int(self.num_elements))

    @property
    def wavelength(self) -> float:
        return 299_792_458.0 / self.carrier_freq


@dataclass(frozen=True)
class ChannelRealization:
    """One quasi-static draw of every link.

    ``g2`` holds the Phase-1 per-element cascade magnitudes
    ``|[h_rs^H]_n [h_br]_n|`` and ``g1`` the Phase-2 ones
    ``|[h_rd^H]_n [h_sr]_n|``; ``h2_mag``/``h1_mag`` are the representative
    per-element magnitudes used by the linear-in-count gain model.
    The reflection amplitude is applied on top of these, in
    :func:`cascade_gain`.
    """

    h_bs: complex
    h_sd: complex
    g2: np.ndarray
    g1: np.ndarray
    h1_mag: float
    h2_mag: float
    mode: AggregationMode = AggregationMode.PAPER_MEAN
    # complex per-element cascades, kept for phase alignment when available
    c2: np.ndarray | None = field(default=None, repr=False)
    c1: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        g1 = np.asarray(self.g1, dtype=float)
        g2 = np.asarray(self.g2, dtype=float)
        if g1.ndim != 1 or g1.shape != g2.shape:
            raise InvalidInput("g1 and g2 must be 1-D vectors of equal length")
        if np.any(g1 < 0) or np.any(g2 < 0):
            raise InvalidInput("cascade magnitudes must be nonnegative")
        if self.h1_mag < 0 or self.h2_mag < 0:
            raise InvalidInput("aggregate magnitudes must be nonnegative")
        g1.setflags(write=False)
        g2.setflags(write=False)
        object.__setattr__(self, "g1", g1)
        object.__setattr__(self, "g2", g2)
        object.__setattr__(self, "mode", AggregationMode(self.mode))
        # cumulative sums of the descending-sorted magnitudes: index n gives
        # the best achievable aligned sum with n active elements
        for name, g in (("_top2", g2), ("_top1", g1)):
            cs = np.concatenate(([0.0], np.cumsum(np.sort(g)[::-1])))
            cs.setflags(write=False)
            object.__setattr__(self, name, cs)

    @classmethod
    def from_cascades(cls, h_bs, h_sd, g2, g1, mode=AggregationMode.PAPER_MEAN, c2=None, c1=None):
        """Build a realization, aggregating ``h1_mag``/``h2_mag`` as the mean magnitude."""
        g1 = np.asarray(g1, dtype=float)
        g2 = np.asarray(g2, dtype=float)
        return cls(complex(h_bs), complex(h_sd), g2, g1,
                   float(np.mean(g1)), float(np.mean(g2)), AggregationMode(mode), c2, c1)

    @property
    def num_elements(self) -> int:
        return self.g1.shape[0]

    def with_mode(self, mode) -> "ChannelRealization":
        return ChannelRealization(self.h_bs, self.h_sd, self.g2, self.g1, self.h1_mag,
                                  self.h2_mag, AggregationMode(mode), self.c2, self.c1)

    def phase1_sum(self, m):
        """RIS contribution to the Phase-1 amplitude for ``m`` active elements (vectorised)."""
        m = np.asarray(m)
        if self.mode is AggregationMode.PAPER_MEAN:
            return m * self.h2_mag
        return self._top2[m.astype(int)]

    def phase2_sum(self, k):
        k = np.asarray(k)
        if self.mode is AggregationMode.PAPER_MEAN:
            return k * self.h1_mag
        return self._top1[k.astype(int)]


@dataclass(frozen=True)
class PhaseConfig:
    theta: np.ndarray  # Phase-1 shifts [rad]
    phi: np.ndarray  # Phase-2 shifts [rad]

    def __post_init__(self):
        for v in (self.theta, self.phi):
            v = np.asarray(v)
            if np.any(v <= -np.pi) or np.any(v > np.pi):
                raise InvalidInput("phase shifts must lie in (-pi, pi]")


def wrap_angle(x):
    """Wrap angles into (-pi, pi]."""
    w = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(w <= -np.pi, w + 2 * np.pi, w)


def align_phases(h_direct, cascade_args):
    """Per-element phase shifts that put every reflected term in phase with ``h_direct``."""
    ref = np.angle(h_direct) if h_direct != 0 else 0.0
    return wrap_angle(ref - np.asarray(cascade_args, dtype=float))


def effective_cascade(phases, per_element, amplitude=1.0):
    """``sum_n amplitude * exp(j*phase_n) * c_n``."""
    phases = np.asarray(phases, dtype=float)
    per_element = np.asarray(per_element, dtype=complex)
    if phases.shape != per_element.shape:
        raise InvalidInput(f"length mismatch: {phases.shape} phases vs {per_element.shape} gains")
    return complex(np.sum(amplitude * np.exp(1j * phases) * per_element))


def phase_config(ch: ChannelRealization) -> PhaseConfig:
    """Aligned phase shifts for both phases of a realization with complex cascades."""
    if ch.c1 is None or ch.c2 is None:
        raise InvalidInput("realization carries no complex per-element cascades")
    return PhaseConfig(theta=align_phases(ch.h_bs, np.angle(ch.c2)),
                       phi=align_phases(ch.h_sd, np.angle(ch.c1)))


# --------------------------------------------------------------------------
# closed-form physics

def cascade_gain(m, ch: ChannelRealization, p: SystemParams):
    """Aligned Phase-1 amplitude ``|h_bs| + alpha * (RIS sum over m elements)``."""
    return abs(ch.h_bs) + p.reflection_amplitude * ch.phase1_sum(m)


def d2d_gain(k, ch: ChannelRealization, p: SystemParams):
    """Aligned Phase-2 amplitude ``|h_sd| + alpha * (RIS sum over k elements)``."""
    return abs(ch.h_sd) + p.reflection_amplitude * ch.phase2_sum(k)


def harvested_energy(m, tau, ch: ChannelRealization, p: SystemParams) -> float:
    """Energy collected by S during ``T - tau`` with ``m`` active elements."""
    if not 0 <= m <= p.num_elements:
        raise InvalidInput(f"m={m} outside [0, {p.num_elements}]")
    if not 0 <= tau < p.total_time:
        raise InvalidInput(f"tau={tau} outside [0, T)")
    a = cascade_gain(m, ch, p)
    return float(p.efficiency_factor * (p.total_time - tau) * p.bs_power * a * a)


def bits_from_energy(k, tau, energy, ch: ChannelRealization, p: SystemParams):
    """Unchecked, broadcasting form of :func:`bits_transmitted`."""
    g = d2d_gain(k, ch, p)
    snr = energy / tau * g * g / p.noise_power
    return p.bandwidth * tau * np.log1p(snr) / np.log(2.0)


def bits_transmitted(k, tau, energy, ch: ChannelRealization, p: SystemParams) -> float:
    """Bits S delivers to D in ``tau`` seconds spending ``energy`` joules."""
    if tau <= 0:
        raise InvalidInput(f"tau={tau} must be > 0")
    if energy < 0:
        raise InvalidInput("energy must be >= 0")
    if not 0 <= k <= p.num_elements:
        raise InvalidInput(f"k={k} outside [0, {p.num_elements}]")
    return float(bits_from_energy(k, tau, energy, ch, p))


# --------------------------------------------------------------------------
# decisions and feasibility

@dataclass(frozen=True)
class Decision:
    m: int
    k: int
    tau: float
    energy: float
    bits: float

    @classmethod
    def evaluate(cls, m, k, tau, ch: ChannelRealization, p: SystemParams) -> "Decision":
        m, k = int(m), int(k)
        if not 0 < tau < p.total_time:
            raise InvalidInput(f"tau={tau} outside (0, T)")
        e = harvested_energy(m, tau, ch, p)
        return cls(m, k, float(tau), e, bits_transmitted(k, tau, e, ch, p))

    @property
    def tau_ms(self) -> float:
        return self.tau * 1e3


CONSTRAINTS = ("C1", "C2", "C3", "C4", "C5")
CONSTRAINT_NAMES = {
    "C1": "minimum harvested energy",
    "C2": "Phase-1 element consumption",
    "C3": "Phase-2 element consumption",
    "C4": "sampled bits delivered",
    "C5": "time split 0 < tau < T",
}


@dataclass(frozen=True)
class ConstraintCheck:
    name: str
    slack: float  # rhs - lhs; >= 0 when satisfied
    scale: float  # magnitude used for the relative tolerance
    strict: bool = False

    def ok(self, rtol=0.0) -> bool:
        if self.strict:
            return self.slack > 0
        return self.slack >= -rtol * self.scale


@dataclass(frozen=True)
class FeasibilityReport:
    checks: tuple

    def __getitem__(self, name) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def feasible(self, rtol=0.0) -> bool:
        return all(c.ok(rtol) for c in self.checks)

    def violated(self, rtol=0.0):
        return [c.name for c in self.checks if not c.ok(rtol)]

    def __str__(self):
        lines = []
        for c in self.checks:
            lines.append(f"{c.name} ({CONSTRAINT_NAMES[c.name]}): "
                         f"{'ok  ' if c.ok() else 'FAIL'} slack={c.slack:.6g}")
        return "\n".join(lines)


def check_feasibility(d: Decision, ch: ChannelRealization, p: SystemParams) -> FeasibilityReport:
    """Evaluate every constraint of the bit-maximisation problem at ``d``.

    Element-consumption constraints use the time-cancelled form
    ``n*y <= (N - n)*e``.
    """
    T, N, y = p.total_time, p.num_elements, p.element_power
    tau = d.tau
    checks = []
    e = harvested_energy(d.m, max(tau, 0.0), ch, p) if tau < T else 0.0
    bits = bits_transmitted(d.k, tau, e, ch, p) if tau > 0 else 0.0
    checks.append(ConstraintCheck("C1", e - p.min_harvest_energy, max(e, p.min_harvest_energy)))
    lhs, rhs = d.m * y, (N - d.m) * e
    checks.append(ConstraintCheck("C2", rhs - lhs, max(abs(lhs), abs(rhs))))
    lhs, rhs = d.k * y, (N - d.k) * e
    checks.append(ConstraintCheck("C3", rhs - lhs, max(abs(lhs), abs(rhs))))
    lhs = p.sampling_rate * (T - tau)
    checks.append(ConstraintCheck("C4", bits - lhs, max(abs(lhs), abs(bits))))
    checks.append(ConstraintCheck("C5", min(tau, T - tau), T, strict=True))
    return FeasibilityReport(tuple(checks))
