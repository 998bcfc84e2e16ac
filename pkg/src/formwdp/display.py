"""Presentation rounding.

One rule everywhere: half away from zero, applied after snapping the value to
nine decimals past the target digit so binary noise such as
``0.09 / 0.40 * 100 == 22.499999999999996`` rounds the way the decimal
quantity would. Money tables use whole $M, shares use whole percent.
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

MILLION = 1_000_000.0


def round_half_away(value: float, ndigits: int = 0):
    """Round ``value`` half away from zero; returns ``int`` when ``ndigits == 0``."""
    snapped = Decimal(repr(round(float(value), ndigits + 9)))
    quantum = Decimal(1).scaleb(-ndigits)
    result = snapped.quantize(quantum, rounding=ROUND_HALF_UP)
    if ndigits == 0:
        return int(result)
    return float(result)


def millions(dollars: float) -> int:
    """Dollars to whole millions, as printed in benefit-cost tables."""
    return round_half_away(dollars / MILLION)


def percent(fraction: float) -> int:
    """Fraction to whole percent."""
    return round_half_away(fraction * 100.0)


def fmt_millions(dollars: float) -> str:
    return _fmt_money(millions(dollars)) + "M"


def fmt_dollars(dollars: float) -> str:
    return _fmt_money(round_half_away(dollars))


def fmt_percent(fraction: float) -> str:
    return f"{percent(fraction)}%"


def _fmt_money(whole: int) -> str:
    sign = "-" if whole < 0 else ""
    return f"{sign}${abs(whole):,}"
