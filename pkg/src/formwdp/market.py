"""Benefit-cost and break-even equations for the incumbent-vs-entrant case.

Total expected benefit cost (TEBC) is what the plan pays after rebates:

* exclusive: ``T*Z*(1 - b1) - LS1``
* shared:    ``T*Z*(1 - b2)*(1 - x) + T*Z*(1 - b3)*x - LS2 - LS3``

where ``x`` is the entrant's share of ``T`` units at list price ``Z``. The
shared line is linear in ``x`` and falls by ``T*Z*(b3 - b2)`` per unit share.
"""

from __future__ import annotations

from .errors import DomainError, MissingBid, NoBreakeven
from .model import AssignmentOutcome, CostLine, MarketScenario, Position

# Relative tolerance (of T*Z) below which two benefit costs count as equal.
TIE_RTOL = 1e-9


def _check_share(x: float) -> None:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"share must be in [0, 1], got {x!r}")


def tebc_exclusive(scenario: MarketScenario) -> float:
    b1 = scenario.incumbent.pct_off_exclusive
    if b1 is None:
        raise MissingBid("incumbent has no exclusive bid")
    return scenario.market_value * (1.0 - b1) - scenario.incumbent.lump_sum_exclusive


def tebc_shared(scenario: MarketScenario, x: float) -> float:
    _check_share(x)
    tz = scenario.market_value
    b2 = scenario.incumbent.pct_off_shared
    b3 = scenario.entrant.pct_off_shared
    lumps = scenario.incumbent.lump_sum_shared + scenario.entrant.lump_sum_shared
    return tz * (1.0 - b2) * (1.0 - x) + tz * (1.0 - b3) * x - lumps


def breakeven_share(b1: float, b2: float, b3: float) -> float:
    """Entrant share at which shared and exclusive TEBC are equal (no lump sums).

    Values above 1 are returned unclamped: the shared position cannot break
    even at any attainable share.

    >>> round(breakeven_share(0.50, 0.44, 0.70), 4)
    0.2308
    """
    if b3 <= b2:
        raise NoBreakeven(f"entrant does not outbid incumbent (b3={b3!r} <= b2={b2!r})")
    if b1 < b2:
        raise DomainError(f"exclusive bid b1={b1!r} below shared bid b2={b2!r}")
    return (b1 - b2) / (b3 - b2)


def breakeven_units(
    total_units: float,
    rate_exclusive: float,
    rate_incumbent_shared: float,
    rate_entrant_shared: float,
) -> float:
    """Units the entrant must serve for a shared job to cost what an exclusive one does.

    Solves ``total*rate_exclusive == rate_entrant*u + rate_incumbent*(total - u)``.
    """
    spread = rate_incumbent_shared - rate_entrant_shared
    if spread <= 0:
        raise NoBreakeven("entrant rate must be below the incumbent's shared rate")
    return total_units * (rate_incumbent_shared - rate_exclusive) / spread


def share_grid(step: float) -> list[float]:
    """Grid ``0, step, 2*step, ..., 1`` (1 is always the last point)."""
    if not 0 < step <= 0.5:
        raise DomainError(f"grid step must be in (0, 0.5], got {step!r}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) < 1e-9:
        # k/n keeps points such as 0.28 bit-identical to their literals
        return [k / n for k in range(n + 1)]
    points = []
    k = 0
    while k * step < 1.0 - 1e-12:
        points.append(k * step)
        k += 1
    points.append(1.0)
    return points


def cost_line(scenario: MarketScenario, x: float) -> CostLine:
    tz = scenario.market_value
    excl = tebc_exclusive(scenario)
    shared = tebc_shared(scenario, x)
    return CostLine(
        x=x,
        tebc_exclusive=excl,
        tebc_shared=shared,
        gross_rebates_exclusive=tz - excl,
        gross_rebates_shared=tz - shared,
    )


def cost_curve(scenario: MarketScenario) -> list[CostLine]:
    return [cost_line(scenario, x) for x in share_grid(scenario.analysis.share_grid_step)]


def slope_per_point(scenario: MarketScenario) -> float:
    """Dollar drop in shared TEBC per percentage point of entrant share."""
    b2 = scenario.incumbent.pct_off_shared
    b3 = scenario.entrant.pct_off_shared
    return scenario.market_value * (b3 - b2) * 0.01


def equalizing_share_array(biddown_spreads, entrant_spreads) -> list[list[float]]:
    """Break-even share for every (entrant spread, incumbent bid-down) pair.

    Rows follow ``entrant_spreads`` (b3 - b2), columns ``biddown_spreads``
    (b1 - b2).
    """
    if any(s == 0 for s in entrant_spreads):
        raise NoBreakeven("entrant spread of zero has no break-even share")
    if any(s < 0 for s in entrant_spreads):
        raise NoBreakeven("negative entrant spread: entrant does not outbid incumbent")
    return [[d / s for d in biddown_spreads] for s in entrant_spreads]


def scenario_breakeven(scenario: MarketScenario) -> float:
    """Break-even entrant share for a scenario, with or without lump sums.

    Without lump sums this is the closed form. Lump sums shift both
    intercepts, so the root is bracketed on the scenario grid by the sign
    change of ``shared - exclusive`` and then solved on that (linear) segment.
    A root beyond the grid is extrapolated along the line; a shared line that
    starts at or below the exclusive cost gives 0.
    """
    if not scenario.has_lump_sums:
        return breakeven_share(
            scenario.incumbent.pct_off_exclusive,
            scenario.incumbent.pct_off_shared,
            scenario.entrant.pct_off_shared,
        )
    tol = TIE_RTOL * scenario.market_value
    curve = cost_curve(scenario)
    gaps = [line.tebc_shared - line.tebc_exclusive for line in curve]
    if gaps[0] <= tol:
        return 0.0
    for prev, line, g0, g1 in zip(curve, curve[1:], gaps, gaps[1:]):
        if g1 <= tol:
            return prev.x + g0 / (g0 - g1) * (line.x - prev.x)
    if gaps[-1] >= gaps[0]:
        raise NoBreakeven("entrant does not outbid incumbent; shared cost never falls")
    return gaps[0] / (gaps[0] - gaps[-1])


def decide_assignment(scenario: MarketScenario, x_hat: float) -> AssignmentOutcome:
    """Shared if its expected cost at ``x_hat`` is no more than the exclusive cost."""
    _check_share(x_hat)
    excl = tebc_exclusive(scenario)
    shared = tebc_shared(scenario, x_hat)
    try:
        be = scenario_breakeven(scenario)
    except DomainError:
        be = None
    if shared <= excl + TIE_RTOL * scenario.market_value:
        position, cost, verb = Position.SHARED, shared, "<="
    else:
        position, cost, verb = Position.EXCLUSIVE, excl, ">"
    rationale = f"shared TEBC {shared:,.0f} {verb} exclusive TEBC {excl:,.0f} at x={x_hat:g}"
    if be is not None:
        rationale += f"; break-even share {be:.4f}"
    return AssignmentOutcome(
        position=position,
        total_cost=cost,
        tebc_exclusive=excl,
        tebc_shared=shared,
        breakeven_share=be,
        rationale=rationale,
    )
