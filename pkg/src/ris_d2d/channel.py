"""3GPP UMi pathloss + Rayleigh fading channel generator."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .model import AggregationMode, ChannelRealization, InvalidInput, SystemParams

LINKS = ("bs_s", "bs_ris", "ris_s", "s_d", "s_ris", "ris_d")
# fixed substream ids; new links must take new ids so existing draws never move
_LINK_STREAM = {name: i for i, name in enumerate(LINKS)}


def pathloss_db(distance, los, carrier_freq):
    """UMi pathloss [dB] (TR 36.814 Table B.1.2.1-1, hexagonal layout form).

    LOS:  22.0 log10(d) + 28.0 + 20 log10(fc_GHz)
    NLOS: 36.7 log10(d) + 22.7 + 26 log10(fc_GHz)
    """
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise InvalidInput(f"distance must be > 0, got {distance}")
    f_ghz = carrier_freq / 1e9
    if los:
        pl = 22.0 * np.log10(d) + 28.0 + 20.0 * np.log10(f_ghz)
    else:
        pl = 36.7 * np.log10(d) + 22.7 + 26.0 * np.log10(f_ghz)
    return float(pl) if np.ndim(pl) == 0 else pl


def db_to_linear(db):
    return 10.0 ** (-np.asarray(db) / 10.0)


@dataclass(frozen=True)
class Geometry:
    """Planar node positions in metres."""

    bs_pos: tuple = (0.0, 0.0)
    s_pos: tuple = (0.5, 0.0)
    d_pos: tuple = (5.5, 0.0)
    ris_pos: tuple = (0.5, 0.1)

    def __post_init__(self):
        for name in ("bs_pos", "s_pos", "d_pos", "ris_pos"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        for link, dist in self.distances().items():
            if not dist > 0:
                raise InvalidInput(f"link {link} has non-positive length {dist}")

    @classmethod
    def with_ris_offset(cls, distance, angle_deg=90.0, bs_pos=(0.0, 0.0), s_pos=(0.5, 0.0),
                        d_pos=(5.5, 0.0)):
        """Place the RIS ``distance`` metres from S along ``angle_deg`` (0 = +x axis)."""
        a = np.deg2rad(angle_deg)
        ris = (s_pos[0] + distance * np.cos(a), s_pos[1] + distance * np.sin(a))
        return cls(bs_pos, s_pos, d_pos, ris)

    def distances(self) -> dict:
        def dist(a, b):
            return float(np.hypot(a[0] - b[0], a[1] - b[1]))

        ris_s = dist(self.ris_pos, self.s_pos)
        return {
            "bs_s": dist(self.bs_pos, self.s_pos),
            "bs_ris": dist(self.bs_pos, self.ris_pos),
            "ris_s": ris_s,
            "s_d": dist(self.s_pos, self.d_pos),
            "s_ris": ris_s,
            "ris_d": dist(self.ris_pos, self.d_pos),
        }


# obstacles block the direct links; RIS legs are in line of sight
DEFAULT_LOS = {"bs_s": False, "bs_ris": True, "ris_s": True,
               "s_d": False, "s_ris": True, "ris_d": True}


@dataclass(frozen=True)
class ChannelConfig:
    seed: int = 0
    los_links: dict = field(default_factory=lambda: dict(DEFAULT_LOS))
    mode: AggregationMode = AggregationMode.PAPER_MEAN

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidInput("seed must be an unsigned 64-bit integer")
        unknown = set(self.los_links) - set(LINKS)
        if unknown:
            raise InvalidInput(f"unknown links in los_links: {sorted(unknown)}")
        object.__setattr__(self, "los_links", {**DEFAULT_LOS, **self.los_links})
        object.__setattr__(self, "mode", AggregationMode(self.mode))

    def with_seed(self, seed) -> "ChannelConfig":
        return replace(self, seed=int(seed))


def link_rng(seed, link) -> np.random.Generator:
    """Counter-based (Philox) generator for one link's substream."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(_LINK_STREAM[link],))
    return np.random.Generator(np.random.Philox(ss))


def rayleigh(rng, size=None):
    """Unit-variance circularly-symmetric complex Gaussian draws."""
    shape = (1,) if size is None else (size,)
    z = rng.standard_normal(shape + (2,))
    out = (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)
    return complex(out[0]) if size is None else out


def link_attenuation(geo: Geometry, p: SystemParams, cfg: ChannelConfig) -> dict:
    """Linear power attenuation of every link."""
    return {name: float(db_to_linear(pathloss_db(d, cfg.los_links[name], p.carrier_freq)))
            for name, d in geo.distances().items()}


def sample_channels(geo: Geometry, p: SystemParams, cfg: ChannelConfig) -> ChannelRealization:
    """Draw one quasi-static realization of all six links.

    Each element draw is independent; with a fixed seed, an N-element draw
    is a prefix-extension of any smaller-N draw.
    """
    att = link_attenuation(geo, p, cfg)
    N = p.num_elements
    amp = {name: np.sqrt(a) for name, a in att.items()}

    h_bs = amp["bs_s"] * rayleigh(link_rng(cfg.seed, "bs_s"))
    h_sd = amp["s_d"] * rayleigh(link_rng(cfg.seed, "s_d"))
    h_br = amp["bs_ris"] * rayleigh(link_rng(cfg.seed, "bs_ris"), N)
    h_rs = amp["ris_s"] * rayleigh(link_rng(cfg.seed, "ris_s"), N)
    h_sr = amp["s_ris"] * rayleigh(link_rng(cfg.seed, "s_ris"), N)
    h_rd = amp["ris_d"] * rayleigh(link_rng(cfg.seed, "ris_d"), N)

    c2 = np.conj(h_rs) * h_br  # BS -> RIS -> S
    c1 = np.conj(h_rd) * h_sr  # S -> RIS -> D
    return ChannelRealization.from_cascades(h_bs, h_sd, np.abs(c2), np.abs(c1), cfg.mode,
                                            c2=c2, c1=c1)
