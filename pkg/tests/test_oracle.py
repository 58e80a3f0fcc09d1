import numpy as np
import pytest

from ris_d2d.channel import ChannelConfig, Geometry, sample_channels
from ris_d2d.model import InvalidInput, SystemParams, check_feasibility
from ris_d2d.oracle import OracleConfig, oracle_search
from ris_d2d.solver import Status, bcd_solve


def channel(seed=0, p=None):
    p = p or SystemParams()
    return sample_channels(Geometry(), p, ChannelConfig(seed=seed)), p


def test_zero_efficiency_infeasible():
    ch, p = channel(p=SystemParams(efficiency_factor=0.0))
    assert oracle_search(ch, p).status is Status.INFEASIBLE
    assert bcd_solve(ch, p).status is Status.INFEASIBLE


def test_unconstrained_uses_all_elements():
    p = SystemParams(element_power=0.0, min_harvest_energy=0.0, sampling_rate=0.0)
    ch, _ = channel(p=p)
    res = oracle_search(ch, p)
    assert (res.best.m, res.best.k) == (p.num_elements, p.num_elements)


@pytest.mark.parametrize("seed", range(4))
def test_oracle_upper_bounds_bcd(seed):
    ch, p = channel(seed)
    orc = oracle_search(ch, p)
    bcd = bcd_solve(ch, p)
    assert orc.bits >= bcd.bits * (1 - 0.01)
    assert check_feasibility(orc.best, ch, p).feasible()


def test_refinement_never_decreases():
    ch, p = channel(1)
    _, history = oracle_search(ch, p, OracleConfig(refine_passes=3), return_history=True)
    assert np.all(np.diff(history) >= 0)


def test_large_n_uses_lattice():
    p = SystemParams(num_elements=250)
    ch, _ = channel(2, p)
    cfg = OracleConfig()
    assert cfg.stride_for(250) == 5
    res = oracle_search(ch, p, cfg)
    ref = bcd_solve(ch, p)
    assert res.bits >= ref.bits * (1 - 0.01)


def test_config_validation():
    with pytest.raises(InvalidInput):
        OracleConfig(tau_grid_points=2)
    with pytest.raises(InvalidInput):
        OracleConfig(refine_passes=-1)
