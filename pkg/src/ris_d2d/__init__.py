"""Energy-harvesting RIS-assisted D2D link: model, channel, solvers, sweeps."""

from .channel import ChannelConfig, Geometry, pathloss_db, sample_channels
from .model import (
    AggregationMode,
    ChannelRealization,
    Decision,
    InvalidInput,
    PhaseConfig,
    SystemParams,
    align_phases,
    bits_transmitted,
    check_feasibility,
    effective_cascade,
    harvested_energy,
)
from .oracle import OracleConfig, oracle_search
from .solver import (
    BlockInfeasible,
    BlockSolver,
    SolverConfig,
    SolveResult,
    Status,
    bcd_solve,
    dinkelbach_solve,
    solve_sp1,
    solve_sp2,
    solve_sp3,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationMode", "BlockInfeasible", "BlockSolver", "ChannelConfig", "ChannelRealization",
    "Decision", "Geometry", "InvalidInput", "OracleConfig", "PhaseConfig", "SolveResult",
    "SolverConfig", "Status", "SystemParams", "align_phases", "bcd_solve", "bits_transmitted",
    "check_feasibility", "dinkelbach_solve", "effective_cascade", "harvested_energy",
    "oracle_search", "pathloss_db", "sample_channels", "solve_sp1", "solve_sp2", "solve_sp3",
]
