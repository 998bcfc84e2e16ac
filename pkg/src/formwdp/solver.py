"""Winner determination over a menu of formulary positions.

Drugs are rows, slots are columns, and each entry is the expected benefit
cost of putting that drug in that slot:

    T * share * Z * (1 - b) - LS

Menus are balanced with zero-cost dummy slots or with dummy drugs that
rebate nothing (a real slot left to a dummy drug is billed at list), so the problem
is a square min-cost assignment solved exactly by the Hungarian method. Ties
between optimal assignments go to the lexicographically smallest
permutation; :func:`brute_force_min` enumerates permutations with the same
rule and serves as an independent check.

A drug without an exclusive bid (the entrant) cannot be counted on to carry
the market, so it is barred from the exclusive and the primary shared slot.
Barred pairs cost ``T*Z``, the worst feasible cost of any slot, which keeps
the arithmetic finite; if every option is barred one is still chosen.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ScenarioValidationError, TooLarge, UnbalancedMenu
from .market import TIE_RTOL, share_grid
from .model import (
    AssignmentOutcome,
    DrugBid,
    MarketScenario,
    Position,
    PositionSlot,
    SlotKind,
    check_slot_shares,
)

DUMMY = "dummy"
BRUTE_FORCE_LIMIT = 9


@dataclass(frozen=True)
class PositionMenu:
    """Slots on offer and the drugs bidding for them, padded to a square.

    ``drugs`` holds ``(name, bid)`` pairs; padding adds ``(DUMMY, None)``
    drugs or zero-share Dummy slots as needed.
    """

    slots: tuple[PositionSlot, ...]
    drugs: tuple[tuple[str, DrugBid | None], ...]
    n_real_slots: int = field(init=False)
    n_real_drugs: int = field(init=False)

    def __post_init__(self):
        slots = tuple(self.slots)
        drugs = tuple((str(name), bid) for name, bid in self.drugs)
        if not slots and not drugs:
            raise UnbalancedMenu("menu has neither slots nor drugs")
        if any(s.kind is not SlotKind.DUMMY for s in slots):
            check_slot_shares(slots)
        object.__setattr__(self, "n_real_slots", len(slots))
        object.__setattr__(self, "n_real_drugs", len(drugs))
        if len(drugs) > len(slots):
            slots += (PositionSlot(SlotKind.DUMMY, 0.0),) * (len(drugs) - len(slots))
        elif len(slots) > len(drugs):
            drugs += ((DUMMY, None),) * (len(slots) - len(drugs))
        if len(slots) != len(drugs):
            raise UnbalancedMenu(f"{len(drugs)} drugs vs {len(slots)} slots after padding")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "drugs", drugs)

    @property
    def size(self) -> int:
        return len(self.slots)


@dataclass(frozen=True)
class CostMatrix:
    entries: np.ndarray
    row_labels: tuple[str, ...] = ()
    col_labels: tuple[str, ...] = ()
    forbidden: np.ndarray | None = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise UnbalancedMenu(f"cost matrix must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise UnbalancedMenu("cost matrix has non-finite entries")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        n = entries.shape[0]
        if not self.row_labels:
            object.__setattr__(self, "row_labels", tuple(f"row{i}" for i in range(n)))
        if not self.col_labels:
            object.__setattr__(self, "col_labels", tuple(f"col{j}" for j in range(n)))
        if self.forbidden is None:
            object.__setattr__(self, "forbidden", np.zeros((n, n), dtype=bool))

    @property
    def size(self) -> int:
        return self.entries.shape[0]


def _entry(bid: DrugBid | None, slot: PositionSlot, total_units: float, list_price: float):
    """Return ``(cost, forbidden)`` for one drug-slot pair."""
    if slot.kind is SlotKind.DUMMY:
        return 0.0, False
    volume = total_units * slot.expected_share * list_price
    if bid is None:
        return volume, False
    if slot.kind is SlotKind.EXCLUSIVE:
        if bid.pct_off_exclusive is None:
            return total_units * list_price, True
        return volume * (1.0 - bid.pct_off_exclusive) - bid.lump_sum_exclusive, False
    if slot.kind is SlotKind.SHARED_PRIMARY and bid.pct_off_exclusive is None:
        return total_units * list_price, True
    return volume * (1.0 - bid.pct_off_shared) - bid.lump_sum_shared, False


def build_cost_matrix(menu: PositionMenu, total_units: float, list_price: float) -> CostMatrix:
    n = menu.size
    entries = np.zeros((n, n))
    forbidden = np.zeros((n, n), dtype=bool)
    for i, (_, bid) in enumerate(menu.drugs):
        for j, slot in enumerate(menu.slots):
            entries[i, j], forbidden[i, j] = _entry(bid, slot, total_units, list_price)
    return CostMatrix(
        entries=entries,
        row_labels=tuple(name for name, _ in menu.drugs),
        col_labels=tuple(slot.kind.value for slot in menu.slots),
        forbidden=forbidden,
    )


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, CostMatrix):
        return matrix.entries
    return CostMatrix(matrix).entries


def _tie_tol(c: np.ndarray) -> float:
    return 1e-9 * max(1.0, float(np.abs(c).max(initial=0.0)))


def _hungarian(c: np.ndarray):
    """Shortest-augmenting-path Hungarian method.

    Returns ``(row_to_col, u, v)`` with reduced costs ``c - u[:, None] - v``
    non-negative and zero along the assignment.
    """
    n = c.shape[0]
    cost = c.tolist()
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    match = [0] * (n + 1)  # match[j] = row (1-based) holding column j
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    row_to_col = [0] * n
    for j in range(1, n + 1):
        row_to_col[match[j] - 1] = j - 1
    return row_to_col, np.array(u[1:]), np.array(v[1:])


def _has_perfect_matching(adj: list[list[int]], rows: list[int], free_cols: set[int]) -> bool:
    owner: dict[int, int] = {}

    def augment(r, seen):
        for col in adj[r]:
            if col in free_cols and col not in seen:
                seen.add(col)
                if col not in owner or augment(owner[col], seen):
                    owner[col] = r
                    return True
        return False

    return all(augment(r, set()) for r in rows)


def _lexicographic_optimum(c: np.ndarray, u: np.ndarray, v: np.ndarray) -> list[int]:
    # optimal assignments are exactly the perfect matchings on zero-reduced-cost edges
    n = c.shape[0]
    tol = _tie_tol(c)
    reduced = c - u[:, None] - v[None, :]
    adj = [[j for j in range(n) if reduced[i, j] <= tol] for i in range(n)]
    free = set(range(n))
    chosen = []
    for i in range(n):
        for j in adj[i]:
            if j not in free:
                continue
            free.discard(j)
            if _has_perfect_matching(adj, list(range(i + 1, n)), free):
                chosen.append(j)
                break
            free.add(j)
        else:  # pragma: no cover - Hungarian guarantees a tight matching
            raise RuntimeError("no tight perfect matching; dual solution inconsistent")
    return chosen


def _outcome(c: np.ndarray, assignment, matrix=None) -> AssignmentOutcome:
    costs = tuple(float(c[i, j]) for i, j in enumerate(assignment))
    rationale = ""
    if isinstance(matrix, CostMatrix):
        rationale = ", ".join(
            f"{matrix.row_labels[i]}->{matrix.col_labels[j]}" for i, j in enumerate(assignment)
        )
    return AssignmentOutcome(
        position=Position.MATCHING,
        total_cost=math.fsum(costs),
        assignment=tuple(int(j) for j in assignment),
        slot_costs=costs,
        rationale=rationale,
    )


def solve_min_cost(matrix) -> AssignmentOutcome:
    """Exact minimum-cost assignment; ``assignment[i]`` is the slot of row ``i``."""
    c = _as_array(matrix)
    _, u, v = _hungarian(c)
    return _outcome(c, _lexicographic_optimum(c, u, v), matrix)


@lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def brute_force_min(matrix) -> AssignmentOutcome:
    """Enumerate every permutation (in lexicographic order) and keep the first optimum."""
    c = _as_array(matrix)
    n = c.shape[0]
    if n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    perms = _permutations(n)
    totals = c[np.arange(n), perms].sum(axis=1)
    best = int(np.flatnonzero(totals <= totals.min() + _tie_tol(c))[0])
    return _outcome(c, perms[best], matrix)


class MenuChoice(NamedTuple):
    x: float
    menu: Position
    cost: float


class MenuComparison(NamedTuple):
    """Both structures solved at one entrant share, plus the cheaper one."""

    x: float
    chosen: Position
    exclusive: AssignmentOutcome
    shared: AssignmentOutcome
    exclusive_matrix: CostMatrix
    shared_matrix: CostMatrix
    exclusive_menu: PositionMenu
    shared_menu: PositionMenu


def _drugs(scenario: MarketScenario):
    return (("incumbent", scenario.incumbent), ("entrant", scenario.entrant))


def exclusive_menu(scenario: MarketScenario) -> PositionMenu:
    """Exclusive slot paired with a zero-cost dummy for the losing drug."""
    slots = (PositionSlot(SlotKind.EXCLUSIVE, 1.0), PositionSlot(SlotKind.DUMMY, 0.0))
    return PositionMenu(slots=slots, drugs=_drugs(scenario))


def shared_menu(scenario: MarketScenario, x: float) -> PositionMenu:
    slots = (
        PositionSlot(SlotKind.SHARED_PRIMARY, 1.0 - x),
        PositionSlot(SlotKind.SHARED_SECONDARY, x),
    )
    return PositionMenu(slots=slots, drugs=_drugs(scenario))


def menu_at_share(slots, x: float) -> tuple[PositionSlot, ...]:
    """Re-forecast a primary/secondary menu so the secondary slot has share ``x``."""
    kinds = [s.kind for s in slots]
    if kinds.count(SlotKind.SHARED_PRIMARY) != 1 or kinds.count(SlotKind.SHARED_SECONDARY) != 1:
        raise ScenarioValidationError(
            [("menu.slots", "a share override needs exactly one SharedPrimary and one SharedSecondary slot")]
        )
    if any(k is SlotKind.EXCLUSIVE for k in kinds):
        raise ScenarioValidationError([("menu.slots", "a share override cannot apply to an Exclusive slot")])
    if not 0.0 <= x <= 1.0:
        raise ScenarioValidationError([("share", f"must be in [0, 1], got {x!r}")])
    share = {SlotKind.SHARED_PRIMARY: 1.0 - x, SlotKind.SHARED_SECONDARY: x, SlotKind.DUMMY: 0.0}
    return tuple(PositionSlot(s.kind, share[s.kind]) for s in slots)


def _secondary_share(slots) -> float:
    return math.fsum(s.expected_share for s in slots if s.kind is SlotKind.SHARED_SECONDARY)


def compare_menus(
    scenario: MarketScenario,
    x: float | None = None,
    slots=None,
    oracle: bool = False,
) -> MenuComparison:
    """Solve the exclusive-with-dummy menu and a shared menu; keep the cheaper.

    ``slots`` defaults to the scenario's own menu, or else a primary and a
    secondary shared slot. ``x`` overrides the secondary slot's share. Equal
    costs go to the shared structure.
    """
    if slots is None:
        slots = scenario.menu
    if slots is None:
        if x is None:
            raise ScenarioValidationError([("menu", "no menu in scenario and no share given")])
        shared = shared_menu(scenario, x)
    else:
        if x is not None:
            slots = menu_at_share(slots, x)
        shared = PositionMenu(slots=tuple(slots), drugs=_drugs(scenario))
        x = _secondary_share(shared.slots)
    return _compare(scenario, shared, x, oracle)


def _compare(scenario: MarketScenario, shared: PositionMenu, x: float, oracle: bool):
    solve = brute_force_min if oracle else solve_min_cost
    t, z = scenario.total_units, scenario.list_price
    excl_menu = exclusive_menu(scenario)
    excl_matrix = build_cost_matrix(excl_menu, t, z)
    shared_matrix = build_cost_matrix(shared, t, z)
    excl = solve(excl_matrix)
    sh = solve(shared_matrix)
    if sh.total_cost <= excl.total_cost + TIE_RTOL * scenario.market_value:
        chosen = Position.SHARED
    else:
        chosen = Position.EXCLUSIVE
    return MenuComparison(x, chosen, excl, sh, excl_matrix, shared_matrix, excl_menu, shared)


def sweep_menus(scenario: MarketScenario) -> list[MenuChoice]:
    """Cheaper structure at every grid share of the scenario."""
    out = []
    for x in share_grid(scenario.analysis.share_grid_step):
        cmp = _compare(scenario, shared_menu(scenario, x), x, oracle=False)
        cost = cmp.shared.total_cost if cmp.chosen is Position.SHARED else cmp.exclusive.total_cost
        out.append(MenuChoice(x, cmp.chosen, cost))
    return out


def crossover_share(choices: list[MenuChoice]) -> float | None:
    """First grid share at which the shared structure is chosen."""
    for choice in choices:
        if choice.menu is Position.SHARED:
            return choice.x
    return None
