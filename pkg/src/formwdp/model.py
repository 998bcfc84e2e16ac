"""Domain types shared by the analysis modules.

All money is double-precision dollars and every "% off list" value is a
fraction (0.44, not 44). Constructors validate their own fields and raise
:class:`~formwdp.errors.ScenarioValidationError` naming each offending field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import ScenarioValidationError


class Position(str, Enum):
    """Formulary position structure chosen for a therapeutic class."""

    EXCLUSIVE = "Exclusive"
    SHARED = "Shared"
    MATCHING = "Matching"


class SlotKind(str, Enum):
    """Kind of slot on a position menu."""

    EXCLUSIVE = "Exclusive"
    SHARED_PRIMARY = "SharedPrimary"
    SHARED_SECONDARY = "SharedSecondary"
    DUMMY = "Dummy"


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _check_fraction(problems, name, value, lo=0.0, hi=1.0):
    if not _is_number(value):
        problems.append((name, f"must be a finite number, got {value!r}"))
    elif not lo <= value <= hi:
        problems.append((name, f"must be in [{lo:g}, {hi:g}], got {value!r}"))


def _check_lump(problems, name, value):
    if not _is_number(value):
        problems.append((name, f"must be a finite number, got {value!r}"))
    elif value < 0:
        problems.append((name, f"must be >= 0, got {value!r}"))


@dataclass(frozen=True)
class DrugBid:
    """One competitor's bid sheet.

    ``pct_off_exclusive`` is None for a drug that cannot be relied on to fill
    the whole market (the entrant); such a drug is ineligible for exclusive
    and primary shared slots.
    """

    pct_off_shared: float
    pct_off_exclusive: float | None = None
    lump_sum_exclusive: float = 0.0
    lump_sum_shared: float = 0.0

    def __post_init__(self):
        problems: list[tuple[str, str]] = []
        _check_fraction(problems, "pct_off_shared", self.pct_off_shared)
        if self.pct_off_exclusive is not None:
            _check_fraction(problems, "pct_off_exclusive", self.pct_off_exclusive)
        _check_lump(problems, "lump_sum_exclusive", self.lump_sum_exclusive)
        _check_lump(problems, "lump_sum_shared", self.lump_sum_shared)
        if problems:
            raise ScenarioValidationError(problems)

    @property
    def has_lump_sums(self) -> bool:
        return self.lump_sum_exclusive > 0 or self.lump_sum_shared > 0


@dataclass(frozen=True)
class AnalysisSettings:
    share_grid_step: float = 0.01
    threshold_share: float = 0.20
    sustainability_cutoff: float = 0.80

    def __post_init__(self):
        problems: list[tuple[str, str]] = []
        if not _is_number(self.share_grid_step) or not 0 < self.share_grid_step <= 0.5:
            problems.append(("share_grid_step", f"must be in (0, 0.5], got {self.share_grid_step!r}"))
        if not _is_number(self.threshold_share) or not 0 < self.threshold_share < 1:
            problems.append(("threshold_share", f"must be in (0, 1), got {self.threshold_share!r}"))
        if not _is_number(self.sustainability_cutoff) or not 0 < self.sustainability_cutoff <= 2:
            problems.append(
                ("sustainability_cutoff", f"must be in (0, 2], got {self.sustainability_cutoff!r}")
            )
        if problems:
            raise ScenarioValidationError(problems)


@dataclass(frozen=True)
class PositionSlot:
    kind: SlotKind
    expected_share: float

    def __post_init__(self):
        kind = SlotKind(self.kind)
        object.__setattr__(self, "kind", kind)
        problems: list[tuple[str, str]] = []
        _check_fraction(problems, "expected_share", self.expected_share)
        if not problems and kind is SlotKind.DUMMY and self.expected_share != 0:
            problems.append(("expected_share", "dummy slots must have zero share"))
        if problems:
            raise ScenarioValidationError(problems)


def check_slot_shares(slots) -> None:
    """Raise unless the non-dummy slot shares sum to one."""
    total = math.fsum(s.expected_share for s in slots if s.kind is not SlotKind.DUMMY)
    if abs(total - 1.0) > 1e-9:
        raise ScenarioValidationError(
            [("slots", f"expected shares of non-dummy slots must sum to 1, got {total:.12g}")]
        )


@dataclass(frozen=True)
class MarketScenario:
    """Exogenous market plus both competitors' bids and analysis settings."""

    total_units: float
    list_price: float
    incumbent: DrugBid
    entrant: DrugBid
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    menu: tuple[PositionSlot, ...] | None = None
    name: str = ""
    description: str = ""
    source: str = ""

    def __post_init__(self):
        problems: list[tuple[str, str]] = []
        if not _is_number(self.total_units) or self.total_units <= 0:
            problems.append(("market.total_units", f"must be > 0, got {self.total_units!r}"))
        if not _is_number(self.list_price) or self.list_price <= 0:
            problems.append(("market.list_price", f"must be > 0, got {self.list_price!r}"))
        if self.incumbent.pct_off_exclusive is None:
            problems.append(("incumbent.pct_off_exclusive", "incumbent needs an exclusive bid"))
        if self.entrant.pct_off_exclusive is not None:
            problems.append(
                ("entrant.pct_off_exclusive", "entrant exclusive bids are not modeled")
            )
        if self.entrant.lump_sum_exclusive != 0:
            problems.append(
                ("entrant.lump_sum_exclusive", "entrant exclusive lump sums are not modeled")
            )
        if self.menu is not None:
            object.__setattr__(self, "menu", tuple(self.menu))
            try:
                check_slot_shares(self.menu)
            except ScenarioValidationError as exc:
                problems.extend((f"menu.{p}", m) for p, m in exc.problems)
        if problems:
            raise ScenarioValidationError(problems)

    @property
    def market_value(self) -> float:
        """Total list-price spend T*Z."""
        return self.total_units * self.list_price

    @property
    def has_lump_sums(self) -> bool:
        return self.incumbent.has_lump_sums or self.entrant.has_lump_sums


@dataclass(frozen=True)
class CostLine:
    """Benefit costs and gross rebates of both assignments at entrant share ``x``."""

    x: float
    tebc_exclusive: float
    tebc_shared: float
    gross_rebates_exclusive: float
    gross_rebates_shared: float


@dataclass(frozen=True)
class AssignmentOutcome:
    """A chosen position structure with its cost and rationale.

    For the two-drug decision both TEBC values and the break-even share are
    filled in. For solver results ``assignment[i]`` is the slot given to row
    ``i`` and ``slot_costs`` the matrix entries along that assignment.
    """

    position: Position
    total_cost: float
    tebc_exclusive: float | None = None
    tebc_shared: float | None = None
    breakeven_share: float | None = None
    assignment: tuple[int, ...] = ()
    slot_costs: tuple[float, ...] = ()
    rationale: str = ""
