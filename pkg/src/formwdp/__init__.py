"""Formulary position assignment: benefit costs, break-even shares,
lump-sum price-cost test and a winner-determination solver."""

from .errors import (
    DegenerateShare,
    DomainError,
    FormularyError,
    MissingBid,
    NoBreakeven,
    ScenarioIOError,
    ScenarioParseError,
    ScenarioValidationError,
    TooLarge,
    UnbalancedMenu,
)
from .lumpsum import (
    ExclusionVerdict,
    NetPriceLine,
    avg_net_price_entrant,
    avg_net_price_incumbent,
    exclusion_test,
    gross_rebates,
    net_price_table,
)
from .market import (
    breakeven_share,
    breakeven_units,
    cost_curve,
    decide_assignment,
    equalizing_share_array,
    scenario_breakeven,
    slope_per_point,
    tebc_exclusive,
    tebc_shared,
)
from .model import (
    AnalysisSettings,
    AssignmentOutcome,
    CostLine,
    DrugBid,
    MarketScenario,
    Position,
    PositionSlot,
    SlotKind,
)
from .scenario_io import bundled_scenario, load_scenario, write_scenario
from .solver import (
    CostMatrix,
    PositionMenu,
    brute_force_min,
    build_cost_matrix,
    solve_min_cost,
    sweep_menus,
)

__version__ = "0.1.0"
