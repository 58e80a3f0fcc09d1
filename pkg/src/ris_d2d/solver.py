"""Block-coordinate solver for the (m, k, tau) bit-maximisation problem.

Each outer iteration optimises the Phase-1 element count ``m``, then the
Phase-2 element count ``k``, then the D2D slot ``tau``, holding the other
variables fixed.  The element blocks have two interchangeable solvers:

* ``PAPER_SCA``: continuous relaxation handled with a slack variable,
  first-order Taylor minorants and a Dinkelbach treatment of the fractional
  element-consumption constraint, followed by rounding and downward repair;
* ``DIRECT_SCAN``: exhaustive scan of the integer block variable.

The time block is solved by bracketing the sampled-bits constraint and a
golden-section search of the (concave) bit count.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .model import (
    ChannelRealization,
    Decision,
    InvalidInput,
    SystemParams,
    bits_from_energy,
    cascade_gain,
    check_feasibility,
    d2d_gain,
)

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BlockSolver(str, enum.Enum):
    PAPER_SCA = "paper_sca"
    DIRECT_SCAN = "direct_scan"


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    INFEASIBLE = "Infeasible"


class BlockInfeasible(Exception):
    """A block subproblem has an empty feasible set."""

    def __init__(self, block, constraint, detail=""):
        self.block = block
        self.constraint = constraint
        super().__init__(f"{block}: no feasible point ({constraint}){': ' + detail if detail else ''}")


class NumericDomainError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    max_outer_iters: int = 50
    rel_tol: float = 1e-6
    dinkelbach_max_iters: int = 100
    dinkelbach_tol: float = 1e-9
    tau_bracket_tol: float = 1e-9  # seconds
    init_m: int | None = None  # None -> ceil(N/2)
    init_k: int | None = None
    init_tau: float | None = None  # None -> T/2
    block_solver: BlockSolver = BlockSolver.DIRECT_SCAN
    sca_max_iters: int = 50
    sca_tol: float = 1e-9

    def __post_init__(self):
        object.__setattr__(self, "block_solver", BlockSolver(self.block_solver))
        if self.rel_tol <= 0 or self.dinkelbach_tol <= 0 or self.tau_bracket_tol <= 0 or self.sca_tol <= 0:
            raise InvalidInput("tolerances must be > 0")
        if min(self.max_outer_iters, self.dinkelbach_max_iters, self.sca_max_iters) < 1:
            raise InvalidInput("iteration caps must be >= 1")

    def initial_point(self, p: SystemParams):
        N, T = p.num_elements, p.total_time
        m = math.ceil(N / 2) if self.init_m is None else int(self.init_m)
        k = math.ceil(N / 2) if self.init_k is None else int(self.init_k)
        tau = T / 2 if self.init_tau is None else float(self.init_tau)
        if not (0 <= m <= N and 0 <= k <= N):
            raise InvalidInput("initial element counts must lie in [0, N]")
        if not 0 < tau < T:
            raise InvalidInput("initial tau must lie in (0, T)")
        return m, k, tau


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    m: int
    k: int
    tau: float
    bits: float
    blocks: dict = field(default_factory=dict)  # block name -> short status


@dataclass(frozen=True)
class SolveResult:
    best: Decision | None
    trace: tuple
    status: Status
    message: str = ""
    sca_disagreements: int = 0

    @property
    def iterations(self) -> int:
        return len(self.trace)

    @property
    def bits(self) -> float:
        return self.best.bits if self.best is not None else 0.0

    def objective_trace(self):
        return np.array([r.bits for r in self.trace])

    def plateau_iteration(self, rel_tol=1e-6) -> int:
        """First (1-based) iteration whose objective is within ``rel_tol`` of the final one."""
        obj = self.objective_trace()
        if obj.size == 0:
            return 0
        final = obj[-1]
        for i, v in enumerate(obj):
            if abs(final - v) <= rel_tol * max(abs(final), 1e-300):
                return i + 1
        return obj.size


# --------------------------------------------------------------------------
# generic numerical building blocks

@dataclass(frozen=True)
class DinkelbachResult:
    x: float
    ratio: float  # lambda*
    converged: bool
    iterations: int
    lambdas: tuple


def dinkelbach_solve(evaluate, lam0=0.0, max_iters=100, tol=1e-9) -> DinkelbachResult:
    """Maximise ``P(x)/Q(x)`` through the parametric problems ``max P - lam*Q``.

    ``evaluate(lam)`` must return ``(x, P(x), Q(x))`` with ``x`` maximising
    ``P - lam*Q`` over the feasible set.  Stops once ``|P - lam*Q| < tol``.
    """
    lam = float(lam0)
    lambdas = [lam]
    x = None
    for it in range(1, max_iters + 1):
        x, P, Q = evaluate(lam)
        if not Q > 0:
            raise NumericDomainError(f"denominator Q={Q} <= 0 at x={x}")
        if abs(P - lam * Q) < tol:
            return DinkelbachResult(x, lam, True, it - 1, tuple(lambdas))
        lam = P / Q
        lambdas.append(lam)
    return DinkelbachResult(x, lam, False, max_iters, tuple(lambdas))


def golden_max(f, lo, hi, tol):
    """Golden-section maximiser of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def bisect_root(g, a, b, tol):
    """Root of ``g`` on ``[a, b]`` given ``g(a)`` and ``g(b)`` of opposite sign."""
    ga = g(a)
    while b - a > tol:
        mid = 0.5 * (a + b)
        gm = g(mid)
        if (gm >= 0) == (ga >= 0):
            a, ga = mid, gm
        else:
            b = mid
    return a, b


# --------------------------------------------------------------------------
# exact block feasibility (shared by both block solvers)

def _energy(m, tau, ch, p):
    a = cascade_gain(m, ch, p)
    return p.efficiency_factor * (p.total_time - tau) * p.bs_power * a * a


def _bits(k, tau, e, ch, p):
    return bits_from_energy(k, tau, e, ch, p)


def sp1_candidates(k, tau, ch, p):
    """Vectorised exact SP1 evaluation over m = 0..N: (m, energy, feasible mask, failing constraint per m)."""
    N, y, T = p.num_elements, p.element_power, p.total_time
    m = np.arange(N + 1)
    e = _energy(m, tau, ch, p)
    c1 = e >= p.min_harvest_energy
    c2 = m * y <= (N - m) * e
    c4 = p.sampling_rate * (T - tau) <= _bits(k, tau, e, ch, p)
    return m, e, c1 & c2 & c4, (c1, c2, c4)


def sp2_candidates(m, tau, ch, p):
    N, y, T = p.num_elements, p.element_power, p.total_time
    k = np.arange(N + 1)
    e = _energy(m, tau, ch, p)
    b = _bits(k, tau, e, ch, p)
    c3 = k * y <= (N - k) * e
    c4 = p.sampling_rate * (T - tau) <= b
    return k, b, c3 & c4, (c3, c4)


def _first_failing(names, masks):
    for name, mask in zip(names, masks):
        if not np.any(mask):
            return name
    return "+".join(names)


# --------------------------------------------------------------------------
# SP1: Phase-1 element count

def solve_sp1_scan(k, tau, ch, p) -> int:
    """Exhaustive SP1: feasible m with maximum harvested energy (ties -> smaller m)."""
    m, e, ok, masks = sp1_candidates(k, tau, ch, p)
    if not ok.any():
        raise BlockInfeasible("SP1", _first_failing(("C1", "C2", "C4"), masks))
    e_ok = np.where(ok, e, -np.inf)
    return int(np.argmax(e_ok))  # argmax returns the first (smallest) maximiser


def _taylor_log_rhs(rate_coef, s_star, W, tau):
    """Affine minorant of ``W*tau*log2(1 + rate_coef*s)`` at ``s_star``: returns (value, slope)."""
    v = W * tau * math.log1p(rate_coef * s_star) / LN2
    slope = W * tau * rate_coef / ((1.0 + rate_coef * s_star) * LN2)
    return v, slope


def _sca_m_step(m_star, k, tau, ch, p, cfg):
    """One convexified SP1 solve at the feasible point ``m_star``.

    Returns the continuous maximiser, or None when the convexified set is empty.
    """
    N, y, T = p.num_elements, p.element_power, p.total_time
    c = p.efficiency_factor * (T - tau) * p.bs_power
    s = _phase1_slope(m_star, ch, p)
    u = float(cascade_gain(m_star, ch, p))
    # energy minorant  E_lin(m) = A + B*m, tangent of c*(u + s*(m - m_star))^2 at m_star
    B = 2.0 * c * s * u
    A = c * u * u - B * m_star

    lower = 0.0
    # minimum-energy constraint on the minorant
    if B > 0:
        lower = max(lower, (p.min_harvest_energy - A) / B)
    elif A < p.min_harvest_energy:
        return None
    # sampled-bits constraint, slack Im1 <= E_lin(m), log term linearised at Im1* = E(m_star)
    d1 = float(d2d_gain(k, ch, p)) ** 2 / (tau * p.noise_power)
    im_star = c * u * u
    v, slope = _taylor_log_rhs(d1, im_star, p.bandwidth, tau)
    need = p.sampling_rate * (T - tau)
    if need > v:
        if slope <= 0 or B <= 0:
            return None
        im_req = im_star + (need - v) / slope
        lower = max(lower, (im_req - A) / B)

    # element-consumption constraint  1 <= P(m)/Q(m),  P = (N-m)E_lin(m)/y,  Q = m
    if y == 0:
        upper = float(N)
    else:
        lo_d = max(1.0, lower)
        if lo_d > N:
            upper = 0.0
        else:
            def evaluate(lam):
                # maximise (N-m)(A+Bm)/y - lam*m : concave quadratic in m
                if B > 0:
                    x = (N * B - A - lam * y) / (2.0 * B)
                    x = min(max(x, lo_d), float(N))
                else:
                    x = lo_d if (-A / y - lam) <= 0 else float(N)
                return x, (N - x) * (A + B * x) / y, x

            res = dinkelbach_solve(evaluate, max_iters=cfg.dinkelbach_max_iters, tol=cfg.dinkelbach_tol)
            if res.ratio < 1.0:
                upper = 0.0  # only m = 0 satisfies the consumption constraint
            elif B > 0:
                # largest root of  B m^2 - (N B - A - y) m - N A = 0
                bq = N * B - A - y
                disc = bq * bq + 4.0 * B * N * A
                upper = min((bq + math.sqrt(max(disc, 0.0))) / (2.0 * B), float(N))
            else:
                upper = min(N * A / (A + y), float(N)) if A > 0 else 0.0
    if upper < lower - 1e-12:
        return None
    # Taylor-linearised objective is increasing in Im1 <= E_lin(m), increasing in m
    return upper


def _phase1_slope(m, ch, p):
    if ch.mode.value == "paper_mean":
        return p.reflection_amplitude * ch.h2_mag
    g = np.sort(ch.g2)[::-1]
    return p.reflection_amplitude * float(g[min(int(m), len(g) - 1)])


def _phase2_slope(k, ch, p):
    if ch.mode.value == "paper_mean":
        return p.reflection_amplitude * ch.h1_mag
    g = np.sort(ch.g1)[::-1]
    return p.reflection_amplitude * float(g[min(int(k), len(g) - 1)])


def _sp1_exact_ok(m, k, tau, ch, p):
    N, y, T = p.num_elements, p.element_power, p.total_time
    e = _energy(m, tau, ch, p)
    return (e >= p.min_harvest_energy and m * y <= (N - m) * e
            and p.sampling_rate * (T - tau) <= _bits(k, tau, e, ch, p))


def _round_and_repair(x, ok):
    n = int(math.floor(x + 0.5))
    while n >= 0:
        if ok(n):
            return n
        n -= 1
    return None


def _sca_start(m0, N, ok_cont):
    for cand in (m0, N - 1, N / 2, 1, 0):
        cand = min(max(float(cand), 0.0), float(N))
        if ok_cont(cand):
            return cand
    return float(min(max(m0, 0), N))


def solve_sp1_sca(k, tau, ch, p, cfg, m0=None) -> int:
    """SP1 via slack + Taylor minorants + Dinkelbach, then rounding with downward repair."""
    N = p.num_elements
    m0 = math.ceil(N / 2) if m0 is None else m0
    paper_mean = ch.mode.value == "paper_mean"

    def ok_cont(mc):
        if not paper_mean:
            mc = int(round(mc))
        return _sp1_exact_ok(mc, k, tau, ch, p)

    m_star = _sca_start(m0, N, ok_cont)
    x = None
    for _ in range(cfg.sca_max_iters):
        x = _sca_m_step(m_star, k, tau, ch, p, cfg)
        if x is None:
            break
        done = abs(x - m_star) < cfg.sca_tol
        m_star = x
        if done:
            break
    if x is None:
        x = m_star
    m = _round_and_repair(x, lambda n: _sp1_exact_ok(n, k, tau, ch, p))
    if m is None:
        raise BlockInfeasible("SP1", "C1", "no integer m after repair")
    return m


def solve_sp1(k, tau, ch, p, cfg: SolverConfig, m0=None) -> int:
    """Optimal Phase-1 element count for fixed ``(k, tau)``."""
    if cfg.block_solver is BlockSolver.DIRECT_SCAN:
        return solve_sp1_scan(k, tau, ch, p)
    return solve_sp1_sca(k, tau, ch, p, cfg, m0)


# --------------------------------------------------------------------------
# SP2: Phase-2 element count

def solve_sp2_scan(m, tau, ch, p) -> int:
    k, b, ok, masks = sp2_candidates(m, tau, ch, p)
    if not ok.any():
        raise BlockInfeasible("SP2", _first_failing(("C3", "C4"), masks))
    b_ok = np.where(ok, b, -np.inf)
    return int(np.argmax(b_ok))


def _sp2_exact_ok(k, e, tau, ch, p):
    N, y, T = p.num_elements, p.element_power, p.total_time
    return k * y <= (N - k) * e and p.sampling_rate * (T - tau) <= _bits(k, tau, e, ch, p)


def _sca_k_step(k_star, e, tau, ch, p, cfg):
    N, y, T = p.num_elements, p.element_power, p.total_time
    t = _phase2_slope(k_star, ch, p)
    v_star = float(d2d_gain(k_star, ch, p))
    # Im2 <= (base + t k)^2, minorant  Im2 <= A + B k
    B = 2.0 * t * v_star
    A = v_star * v_star - B * k_star
    rho = e / (tau * p.noise_power)
    lower = 0.0
    need = p.sampling_rate * (T - tau)
    v, slope = _taylor_log_rhs(rho, v_star * v_star, p.bandwidth, tau)
    if need > v:
        if slope <= 0 or B <= 0:
            return None
        im_req = v_star * v_star + (need - v) / slope
        lower = max(lower, (im_req - A) / B)

    # consumption constraint  1 <= (N-k) e / (k y)
    if y == 0:
        upper = float(N)
    elif e <= 0:
        upper = 0.0
    else:
        lo_d = max(1.0, lower)
        if lo_d > N:
            upper = 0.0
        else:
            def evaluate(lam):
                # (N-k)e - lam*y*k is linear and decreasing in k
                x = lo_d
                return x, (N - x) * e, x * y

            res = dinkelbach_solve(evaluate, max_iters=cfg.dinkelbach_max_iters, tol=cfg.dinkelbach_tol)
            upper = N * e / (e + y) if res.ratio >= 1.0 else 0.0
    if upper < lower - 1e-12:
        return None
    return upper


def solve_sp2_sca(m, tau, ch, p, cfg, k0=None) -> int:
    N = p.num_elements
    e = float(_energy(m, tau, ch, p))
    k0 = math.ceil(N / 2) if k0 is None else k0
    if e <= 0:
        # objective is identically zero: smallest feasible k
        k = _round_and_repair(0, lambda n: _sp2_exact_ok(n, e, tau, ch, p))
        if k is None:
            raise BlockInfeasible("SP2", "C4", "no harvested energy")
        return k
    paper_mean = ch.mode.value == "paper_mean"

    def ok_cont(kc):
        if not paper_mean:
            kc = int(round(kc))
        return _sp2_exact_ok(kc, e, tau, ch, p)

    k_star = _sca_start(k0, N, ok_cont)
    x = None
    for _ in range(cfg.sca_max_iters):
        x = _sca_k_step(k_star, e, tau, ch, p, cfg)
        if x is None:
            break
        done = abs(x - k_star) < cfg.sca_tol
        k_star = x
        if done:
            break
    if x is None:
        x = k_star
    k = _round_and_repair(x, lambda n: _sp2_exact_ok(n, e, tau, ch, p))
    if k is None:
        raise BlockInfeasible("SP2", "C3", "no integer k after repair")
    return k


def solve_sp2(m, tau, ch, p, cfg: SolverConfig, k0=None) -> int:
    """Optimal Phase-2 element count for fixed ``(m, tau)``."""
    if cfg.block_solver is BlockSolver.DIRECT_SCAN:
        return solve_sp2_scan(m, tau, ch, p)
    return solve_sp2_sca(m, tau, ch, p, cfg, k0)


# --------------------------------------------------------------------------
# SP3: D2D slot duration

@dataclass(frozen=True)
class TauInterval:
    lo: float
    hi: float
    binding_hi: str  # which constraint sets the upper end


def sp3_constants(m, k, ch, p):
    """(d3, d4): harvested power factor and the resulting SNR scale, so that
    ``e = d3 (T - tau)`` and ``bits = W tau log2(1 + d4 (T - tau)/tau)``."""
    d3 = p.efficiency_factor * p.bs_power * float(cascade_gain(m, ch, p)) ** 2
    d4 = d3 * float(d2d_gain(k, ch, p)) ** 2 / p.noise_power
    return d3, d4


def sp3_bits(tau, m, k, ch, p):
    d3, d4 = sp3_constants(m, k, ch, p)
    T = p.total_time
    return p.bandwidth * tau * np.log1p(d4 * (T - tau) / tau) / LN2


def sp3_interval(m, k, ch, p, tol) -> TauInterval:
    """Feasible tau interval from the energy-type constraints (all upper bounds on tau)."""
    T, N, y = p.total_time, p.num_elements, p.element_power
    d3, _ = sp3_constants(m, k, ch, p)
    hi, binding = T, "C5"
    bounds = []
    if p.min_harvest_energy > 0:
        if d3 <= 0:
            raise BlockInfeasible("SP3", "C1", "zero harvested power")
        bounds.append((T - p.min_harvest_energy / d3, "C1"))
    for n, name in ((m, "C2"), (k, "C3")):
        if n > 0 and y > 0:
            if n >= N or d3 <= 0:
                raise BlockInfeasible("SP3", name, "element consumption cannot be met")
            bounds.append((T - n * y / ((N - n) * d3), name))
    for b, name in bounds:
        if b < hi:
            hi, binding = b, name
    lo = min(tol, T * 1e-12) if tol < T else T * 1e-12
    if binding == "C5":
        hi = T * (1.0 - 1e-12)
    else:
        # the closed-form bound can land a few ulps on the wrong side
        for _ in range(64):
            e = float(_energy(m, hi, ch, p))
            if (e >= p.min_harvest_energy and m * y <= (N - m) * e and k * y <= (N - k) * e):
                break
            hi = math.nextafter(hi, -math.inf) - abs(hi) * 1e-15
    if hi <= lo:
        raise BlockInfeasible("SP3", binding, "forces tau <= 0")
    return TauInterval(lo, hi, binding)


def solve_sp3(m, k, ch, p, cfg: SolverConfig, tau0=None) -> float:
    """Optimal D2D slot ``tau`` for fixed element counts."""
    T, Sr = p.total_time, p.sampling_rate
    tol = cfg.tau_bracket_tol
    iv = sp3_interval(m, k, ch, p, tol)
    _, d4 = sp3_constants(m, k, ch, p)

    def B(t):
        return float(sp3_bits(t, m, k, ch, p))

    def g(t):
        return B(t) - Sr * (T - t)

    lo, hi = iv.lo, iv.hi
    if Sr > 0:
        if d4 <= 0:
            raise BlockInfeasible("SP3", "C4", "zero effective SNR")
        # g is concave on (0, T): its maximiser splits the feasible region
        t_g = golden_max(g, lo, hi, tol)
        peak = max((t_g, lo, hi), key=g)
        if g(peak) < 0:
            raise BlockInfeasible("SP3", "C4", "sampled bits exceed deliverable bits")
        if g(lo) < 0:
            _, lo = bisect_root(g, lo, peak, tol)
        if g(hi) < 0:
            hi, _ = bisect_root(g, peak, hi, tol)
    t_star = golden_max(B, lo, hi, tol)
    cands = [t_star, lo, hi]
    if tau0 is not None and lo <= tau0 <= hi:
        cands.append(tau0)
    best = max(cands, key=lambda t: (B(t), -t))
    return float(best)


# --------------------------------------------------------------------------
# outer loop

def _restore_tau(m, k, tau, ch, p, cfg):
    """Shrink tau geometrically until SP1 has a feasible point (more harvest time)."""
    t = tau
    for _ in range(60):
        t *= 0.5
        try:
            solve_sp1(k, t, ch, p, cfg, m0=m)
            return t
        except BlockInfeasible:
            continue
    return None


def bcd_solve(ch: ChannelRealization, p: SystemParams, cfg: SolverConfig | None = None) -> SolveResult:
    """Alternate SP1 -> SP2 -> SP3 until the bit count stops improving."""
    cfg = cfg or SolverConfig()
    m, k, tau = cfg.initial_point(p)
    trace = []
    prev = None
    incumbent = None
    disagreements = 0
    for it in range(1, cfg.max_outer_iters + 1):
        blocks = {}
        try:
            try:
                m_new = solve_sp1(k, tau, ch, p, cfg, m0=m)
            except BlockInfeasible:
                if incumbent is not None:
                    raise
                t_new = _restore_tau(m, k, tau, ch, p, cfg)
                if t_new is None:
                    raise
                tau = t_new
                blocks["init"] = f"tau restored to {tau:.6g}"
                m_new = solve_sp1(k, tau, ch, p, cfg, m0=m)
            blocks["SP1"] = "ok"
            k_new = solve_sp2(m_new, tau, ch, p, cfg, k0=k)
            blocks["SP2"] = "ok"
            if cfg.block_solver is BlockSolver.PAPER_SCA:
                disagreements += int(m_new != solve_sp1_scan(k, tau, ch, p))
                disagreements += int(k_new != solve_sp2_scan(m_new, tau, ch, p))
            tau_new = solve_sp3(m_new, k_new, ch, p, cfg, tau0=tau if incumbent is not None else None)
            blocks["SP3"] = "ok"
        except BlockInfeasible as exc:
            if incumbent is None:
                return SolveResult(None, tuple(trace), Status.INFEASIBLE,
                                   f"{exc} [{exc.constraint}]", disagreements)
            log.debug("block failure after first iteration, keeping incumbent: %s", exc)
            trace.append(IterationRecord(it, incumbent.m, incumbent.k, incumbent.tau,
                                         incumbent.bits, {**blocks, "fail": str(exc)}))
            return SolveResult(incumbent, tuple(trace), Status.CONVERGED, str(exc), disagreements)

        cand = Decision.evaluate(m_new, k_new, tau_new, ch, p)
        if incumbent is None or cand.bits >= incumbent.bits:
            incumbent = cand
        else:
            blocks["guard"] = "kept incumbent"
        m, k, tau = incumbent.m, incumbent.k, incumbent.tau
        trace.append(IterationRecord(it, m, k, tau, incumbent.bits, blocks))
        if prev is not None and abs(incumbent.bits - prev) <= cfg.rel_tol * max(abs(incumbent.bits), 1e-300):
            return SolveResult(incumbent, tuple(trace), Status.CONVERGED, "", disagreements)
        prev = incumbent.bits
    return SolveResult(incumbent, tuple(trace), Status.MAX_ITERS, "iteration cap reached", disagreements)


def solve_fixed_elements(m, k, ch, p, cfg: SolverConfig | None = None) -> SolveResult:
    """Optimise ``tau`` only, with the element counts pinned (e.g. the no-RIS baseline)."""
    cfg = cfg or SolverConfig()
    try:
        # with m fixed, SP1 only reports feasibility
        tau = solve_sp3(m, k, ch, p, cfg)
    except BlockInfeasible as exc:
        return SolveResult(None, (), Status.INFEASIBLE, f"{exc} [{exc.constraint}]")
    d = Decision.evaluate(m, k, tau, ch, p)
    if not check_feasibility(d, ch, p).feasible(1e-9):
        return SolveResult(None, (), Status.INFEASIBLE, "fixed-element point violates constraints")
    rec = IterationRecord(1, m, k, tau, d.bits, {"SP3": "ok"})
    return SolveResult(d, (rec,), Status.CONVERGED)
