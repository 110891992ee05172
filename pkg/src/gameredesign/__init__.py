"""Game redesign against no-regret learners."""

from .bounds import BoundReport, boundary_bounds, exp3p_regret_bound, interior_bounds
from .catalog import GamePreset, get_preset, make_pd, make_rps, make_tc, make_vd
from .cost import CostModel, round_cost
from .designer import (
    DesignerSpec,
    DesignPreconditionError,
    RedesignedRound,
    RoundDesigner,
    boundary_design,
    discrete_design,
    interior_design,
    make_round,
    threshold,
)
from .game import (
    NormalFormGame,
    dominance_gap,
    from_document,
    is_zero_sum,
    loss_at,
    match_count,
    to_document,
)
from .harness import SimulationConfig, SimulationResult, run, run_trial, sublinearity_slope
from .kernel import DEFAULT_BACKEND

__version__ = "0.1.0"
