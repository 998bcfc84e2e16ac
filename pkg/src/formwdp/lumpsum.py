"""Average net prices under lump-sum rebates and the price-cost exclusion test.

A lump sum is booked as a reduction in revenue, so it is spread over the
units a competitor actually serves. The entrant's average net price is

    Z*(1 - b3) - LS3 / (T*x)

which is negative at small shares. (The entrant's *shared* bid b3 is used;
the exclusive bid b1 reproduces none of the tabulated entrant prices.)

A lump sum is exclusionary when, at a reasonable threshold share, the
entrant's average net price is more than ``sustainability_cutoff`` off list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateShare, DomainError, MissingBid
from .market import share_grid
from .model import MarketScenario, Position


@dataclass(frozen=True)
class NetPriceLine:
    """Per-unit prices of both competitors at entrant share ``x``.

    ``flat_price_*`` are the unit net prices ignoring lump sums, Z*(1 - b).
    """

    x: float
    avg_net_price_incumbent: float
    avg_net_price_entrant: float
    pct_off_incumbent: float
    pct_off_entrant: float
    flat_price_incumbent: float
    flat_price_entrant: float


@dataclass(frozen=True)
class ExclusionVerdict:
    threshold_share: float
    entrant_pct_off_at_threshold: float
    cutoff: float
    exclusionary: bool
    sustainable_share: float | None  # None: no grid share reaches the cutoff


def avg_net_price_incumbent(scenario: MarketScenario, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"share must be in [0, 1], got {x!r}")
    flat = scenario.list_price * (1.0 - scenario.incumbent.pct_off_shared)
    lump = scenario.incumbent.lump_sum_shared
    if lump == 0:
        return flat
    if x >= 1.0:
        raise DegenerateShare("incumbent serves no units at x=1 but owes a lump sum")
    return flat - lump / (scenario.total_units * (1.0 - x))


def avg_net_price_entrant(scenario: MarketScenario, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"share must be in [0, 1], got {x!r}")
    flat = scenario.list_price * (1.0 - scenario.entrant.pct_off_shared)
    lump = scenario.entrant.lump_sum_shared
    if lump == 0:
        return flat
    if x <= 0.0:
        raise DegenerateShare("entrant serves no units at x=0 but owes a lump sum")
    return flat - lump / (scenario.total_units * x)


def pct_off_list(scenario: MarketScenario, price: float) -> float:
    """Average net price expressed as a fraction off list (may exceed 1)."""
    return 1.0 - price / scenario.list_price


def _pct_off(scenario: MarketScenario, bid, price: float) -> float:
    # zero lump sums must give back the raw bid exactly, not 1 - (1 - b)
    return bid.pct_off_shared if bid.lump_sum_shared == 0 else pct_off_list(scenario, price)


def entrant_pct_off(scenario: MarketScenario, x: float) -> float:
    return _pct_off(scenario, scenario.entrant, avg_net_price_entrant(scenario, x))


def net_price_line(scenario: MarketScenario, x: float) -> NetPriceLine:
    inc = avg_net_price_incumbent(scenario, x)
    ent = avg_net_price_entrant(scenario, x)
    return NetPriceLine(
        x=x,
        avg_net_price_incumbent=inc,
        avg_net_price_entrant=ent,
        pct_off_incumbent=_pct_off(scenario, scenario.incumbent, inc),
        pct_off_entrant=_pct_off(scenario, scenario.entrant, ent),
        flat_price_incumbent=scenario.list_price * (1.0 - scenario.incumbent.pct_off_shared),
        flat_price_entrant=scenario.list_price * (1.0 - scenario.entrant.pct_off_shared),
    )


def net_price_table(scenario: MarketScenario, shares) -> list[NetPriceLine]:
    return [net_price_line(scenario, x) for x in shares]


def _exceeds(value: float, cutoff: float) -> bool:
    # strict "exceeds", ignoring float noise from the division
    return value > cutoff + 1e-12 * max(1.0, abs(cutoff))


def exclusion_test(scenario: MarketScenario) -> ExclusionVerdict:
    settings = scenario.analysis
    threshold = settings.threshold_share
    cutoff = settings.sustainability_cutoff
    at_threshold = entrant_pct_off(scenario, threshold)

    sustainable = None
    for x in share_grid(settings.share_grid_step):
        if x == 0.0 and scenario.entrant.lump_sum_shared > 0:
            continue
        if not _exceeds(entrant_pct_off(scenario, x), cutoff):
            sustainable = x
            break
    return ExclusionVerdict(
        threshold_share=threshold,
        entrant_pct_off_at_threshold=at_threshold,
        cutoff=cutoff,
        exclusionary=_exceeds(at_threshold, cutoff),
        sustainable_share=sustainable,
    )


def gross_rebates(scenario: MarketScenario, position: Position, x: float = 0.0) -> float:
    """Rebate dollars the plan collects under ``position`` at entrant share ``x``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"share must be in [0, 1], got {x!r}")
    tz = scenario.market_value
    inc, ent = scenario.incumbent, scenario.entrant
    position = Position(position)
    if position is Position.EXCLUSIVE:
        if inc.pct_off_exclusive is None:
            raise MissingBid("incumbent has no exclusive bid")
        return tz * inc.pct_off_exclusive + inc.lump_sum_exclusive
    if position is Position.SHARED:
        unit = tz * (inc.pct_off_shared * (1.0 - x) + ent.pct_off_shared * x)
        return unit + inc.lump_sum_shared + ent.lump_sum_shared
    raise DomainError(f"gross rebates undefined for {position.value!r}")


def reconstructed_tebc_shared(scenario: MarketScenario, x: float) -> float:
    """Shared TEBC rebuilt from average net prices times units served."""
    t = scenario.total_units
    return math.fsum(
        [
            t * x * avg_net_price_entrant(scenario, x),
            t * (1.0 - x) * avg_net_price_incumbent(scenario, x),
        ]
    )

