"""Tables, CSV output and the SVG cost-curve chart.

Every table row carries the raw float next to its display-rounded value;
rounded columns are derived from the raw ones by :mod:`formwdp.display` only.
CSV dialect: comma, header row, LF line endings, UTF-8.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

from .display import MILLION, millions, percent, round_half_away
from .errors import DomainError, ScenarioIOError
from .lumpsum import ExclusionVerdict, exclusion_test, net_price_line
from .market import cost_curve, cost_line, equalizing_share_array, scenario_breakeven
from .model import MarketScenario

# Entrant shares used for the reference tables.
NET_PRICE_SHARES = (0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40)
COST_TABLE_SHARES = (0.10, 0.15, 0.20, 0.25, 0.28, 0.30, 0.35)
DEFAULT_BIDDOWN_PP = (3, 10, 1)
DEFAULT_SPREAD_PP = (20, 55, 5)

CURVE_COLUMNS = [
    "x",
    "tebc_exclusive",
    "tebc_shared",
    "gross_rebates_exclusive",
    "gross_rebates_shared",
    "tebc_exclusive_usd",
    "tebc_shared_usd",
    "gross_rebates_exclusive_usd",
    "gross_rebates_shared_usd",
]


def _num(value: float) -> str:
    return repr(float(value))


def pp_range(start: float, stop: float, step: float) -> list[float]:
    """Inclusive range of percentage points, e.g. ``(20, 55, 5)``."""
    if step <= 0:
        raise DomainError(f"range step must be positive, got {step!r}")
    n = int(math.floor((stop - start) / step + 1e-9))
    if n < 0:
        raise DomainError(f"empty range {start}..{stop}")
    return [start + k * step for k in range(n + 1)]


def curve_rows(scenario: MarketScenario, shares=None) -> list[dict]:
    lines = cost_curve(scenario) if shares is None else [cost_line(scenario, x) for x in shares]
    rows = []
    for line in lines:
        rows.append(
            {
                "x": _num(line.x),
                "tebc_exclusive": millions(line.tebc_exclusive),
                "tebc_shared": millions(line.tebc_shared),
                "gross_rebates_exclusive": millions(line.gross_rebates_exclusive),
                "gross_rebates_shared": millions(line.gross_rebates_shared),
                "tebc_exclusive_usd": _num(line.tebc_exclusive),
                "tebc_shared_usd": _num(line.tebc_shared),
                "gross_rebates_exclusive_usd": _num(line.gross_rebates_exclusive),
                "gross_rebates_shared_usd": _num(line.gross_rebates_shared),
            }
        )
    return rows


def benefit_cost_rows(scenarios, shares=COST_TABLE_SHARES) -> list[dict]:
    rows = []
    for scenario in scenarios:
        for x in shares:
            line = cost_line(scenario, x)
            rows.append(
                {
                    "scenario": scenario.name,
                    "entrant_share": _num(x),
                    "incumbent_share": _num(1.0 - x),
                    "tebc_exclusive_musd": millions(line.tebc_exclusive),
                    "tebc_shared_musd": millions(line.tebc_shared),
                    "tebc_exclusive_usd": _num(line.tebc_exclusive),
                    "tebc_shared_usd": _num(line.tebc_shared),
                }
            )
    return rows


def gross_rebate_rows(scenarios, shares=COST_TABLE_SHARES) -> list[dict]:
    rows = []
    for scenario in scenarios:
        for x in shares:
            line = cost_line(scenario, x)
            rows.append(
                {
                    "scenario": scenario.name,
                    "entrant_share": _num(x),
                    "incumbent_share": _num(1.0 - x),
                    "gross_rebates_exclusive_musd": millions(line.gross_rebates_exclusive),
                    "gross_rebates_shared_musd": millions(line.gross_rebates_shared),
                    "gross_rebates_exclusive_usd": _num(line.gross_rebates_exclusive),
                    "gross_rebates_shared_usd": _num(line.gross_rebates_shared),
                }
            )
    return rows


def net_price_rows(scenarios, shares=NET_PRICE_SHARES) -> list[dict]:
    rows = []
    for scenario in scenarios:
        for x in shares:
            line = net_price_line(scenario, x)
            rows.append(
                {
                    "scenario": scenario.name,
                    "entrant_share": _num(x),
                    "incumbent_share": _num(1.0 - x),
                    "avg_net_price_entrant": round_half_away(line.avg_net_price_entrant),
                    "avg_net_price_incumbent": round_half_away(line.avg_net_price_incumbent),
                    "pct_off_entrant": percent(line.pct_off_entrant),
                    "pct_off_incumbent": percent(line.pct_off_incumbent),
                    "avg_net_price_entrant_raw": _num(line.avg_net_price_entrant),
                    "avg_net_price_incumbent_raw": _num(line.avg_net_price_incumbent),
                    "pct_off_entrant_raw": _num(line.pct_off_entrant),
                    "pct_off_incumbent_raw": _num(line.pct_off_incumbent),
                }
            )
    return rows


def rebate_menu_rows(scenarios) -> list[dict]:
    rows = []
    for scenario in scenarios:
        z = scenario.list_price
        for drug, bid in (("incumbent", scenario.incumbent), ("entrant", scenario.entrant)):
            excl = bid.pct_off_exclusive
            rows.append(
                {
                    "scenario": scenario.name,
                    "drug": drug,
                    "list_price": round_half_away(z),
                    "pct_off_exclusive": "" if excl is None else round_half_away(excl * 100, 1),
                    "pct_off_shared": round_half_away(bid.pct_off_shared * 100, 1),
                    "net_unit_price_exclusive": "" if excl is None else round_half_away(z * (1 - excl)),
                    "net_unit_price_shared": round_half_away(z * (1 - bid.pct_off_shared)),
                    "lump_sum_exclusive_musd": millions(bid.lump_sum_exclusive),
                    "lump_sum_shared_musd": millions(bid.lump_sum_shared),
                    "pct_off_exclusive_raw": "" if excl is None else _num(excl),
                    "pct_off_shared_raw": _num(bid.pct_off_shared),
                    "lump_sum_exclusive_usd": _num(bid.lump_sum_exclusive),
                    "lump_sum_shared_usd": _num(bid.lump_sum_shared),
                }
            )
    return rows


def equalize_rows(biddowns_pp, spreads_pp) -> list[dict]:
    """Long-format equalizing-share array; inputs in percentage points."""
    grid = equalizing_share_array([d / 100 for d in biddowns_pp], [s / 100 for s in spreads_pp])
    rows = []
    for spread, row in zip(spreads_pp, grid):
        for biddown, share in zip(biddowns_pp, row):
            rows.append(
                {
                    "entrant_spread_pp": _pp(spread),
                    "biddown_spread_pp": _pp(biddown),
                    "share_pct": percent(share),
                    "share_raw": _num(share),
                }
            )
    return rows


def equalize_grid(biddowns_pp, spreads_pp) -> list[list[int]]:
    grid = equalizing_share_array([d / 100 for d in biddowns_pp], [s / 100 for s in spreads_pp])
    return [[percent(v) for v in row] for row in grid]


def _pp(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def to_csv(rows: list[dict], columns=None) -> str:
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ScenarioIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


@dataclass(frozen=True)
class ReportBundle:
    cost_table: list[dict]
    net_price_table: list[dict]
    equalize_array: list[dict]
    verdict: ExclusionVerdict


def build_report(scenario: MarketScenario) -> ReportBundle:
    return ReportBundle(
        cost_table=curve_rows(scenario),
        net_price_table=net_price_rows([scenario]),
        equalize_array=equalize_rows(pp_range(*DEFAULT_BIDDOWN_PP), pp_range(*DEFAULT_SPREAD_PP)),
        verdict=exclusion_test(scenario),
    )


TABLE_FILES = {
    "rebate_menu.csv": rebate_menu_rows,
    "net_prices.csv": net_price_rows,
    "benefit_costs.csv": benefit_cost_rows,
    "gross_rebates.csv": gross_rebate_rows,
}


def write_tables(scenarios, out_dir) -> list[Path]:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ScenarioIOError(f"cannot create {out}: {exc.strerror or exc}") from exc
    written = []
    for filename, fn in TABLE_FILES.items():
        write_text(out / filename, to_csv(fn(scenarios)))
        written.append(out / filename)
    eq = equalize_rows(pp_range(*DEFAULT_BIDDOWN_PP), pp_range(*DEFAULT_SPREAD_PP))
    write_text(out / "equalize.csv", to_csv(eq))
    written.append(out / "equalize.csv")
    return written


# --- SVG ---------------------------------------------------------------

SVG_W, SVG_H = 800, 500
_LEFT, _RIGHT, _TOP, _BOTTOM = 90, 30, 40, 60
_Y_TICK = 500 * MILLION


def cost_curve_svg(scenario: MarketScenario) -> str:
    """Flat exclusive line, descending shared line, break-even marker."""
    lines = cost_curve(scenario)
    values = [v for ln in lines for v in (ln.tebc_exclusive, ln.tebc_shared)]
    y_lo = min(0.0, math.floor(min(values) / _Y_TICK) * _Y_TICK)
    y_hi = max(_Y_TICK, math.ceil(max(values) / _Y_TICK) * _Y_TICK)
    plot_w = SVG_W - _LEFT - _RIGHT
    plot_h = SVG_H - _TOP - _BOTTOM

    def px(x):
        return _LEFT + x * plot_w

    def py(y):
        return _TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    def pts(attr):
        return " ".join(f"{px(ln.x):.2f},{py(getattr(ln, attr)):.2f}" for ln in lines)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SVG_W} {SVG_H}" '
        f'width="{SVG_W}" height="{SVG_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SVG_W}" height="{SVG_H}" fill="white"/>',
        f'<text x="{SVG_W / 2:.2f}" y="22" text-anchor="middle" font-size="15">'
        f"Total expected benefit cost vs. entrant share{_title(scenario)}</text>",
        f'<line class="axis" x1="{_LEFT}" y1="{py(y_lo):.2f}" x2="{_LEFT}" y2="{_TOP}" stroke="black"/>',
        f'<line class="axis" x1="{_LEFT}" y1="{py(y_lo):.2f}" x2="{SVG_W - _RIGHT}" '
        f'y2="{py(y_lo):.2f}" stroke="black"/>',
    ]
    for k in range(11):
        x = k / 10
        out.append(
            f'<line class="tick" x1="{px(x):.2f}" y1="{py(y_lo):.2f}" x2="{px(x):.2f}" '
            f'y2="{py(y_lo) + 5:.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{px(x):.2f}" y="{py(y_lo) + 20:.2f}" text-anchor="middle">{k * 10}%</text>'
        )
    n_ticks = round((y_hi - y_lo) / _Y_TICK)
    for k in range(n_ticks + 1):
        y = y_lo + k * _Y_TICK
        out.append(
            f'<line class="tick" x1="{_LEFT - 5}" y1="{py(y):.2f}" x2="{_LEFT}" y2="{py(y):.2f}" stroke="black"/>'
        )
        out.append(
            f'<text x="{_LEFT - 8}" y="{py(y) + 4:.2f}" text-anchor="end">${millions(y):,}M</text>'
        )
    out.append(
        f'<text x="{_LEFT + plot_w / 2:.2f}" y="{SVG_H - 15}" text-anchor="middle">'
        "Entrant market share</text>"
    )
    out.append(
        f'<text x="20" y="{_TOP + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 20 {_TOP + plot_h / 2:.2f})">Total benefit cost ($M)</text>'
    )
    out.append(
        f'<polyline class="exclusive" points="{pts("tebc_exclusive")}" fill="none" '
        'stroke="#1f4e9c" stroke-width="2"/>'
    )
    out.append(
        f'<polyline class="shared" points="{pts("tebc_shared")}" fill="none" '
        'stroke="#c0392b" stroke-width="2"/>'
    )
    try:
        be = scenario_breakeven(scenario)
    except DomainError:
        be = None
    if be is not None and 0.0 <= be <= 1.0:
        bx, by = px(be), py(lines[0].tebc_exclusive)
        out.append(f'<circle class="breakeven" cx="{bx:.2f}" cy="{by:.2f}" r="5" fill="black"/>')
        out.append(
            f'<text x="{bx + 8:.2f}" y="{by - 8:.2f}">break-even {percent(be)}%</text>'
        )
    else:
        out.append(f'<text x="{px(0.6):.2f}" y="{_TOP + 15}">break-even unreachable</text>')
    legend_y = _TOP + 15
    out.append(f'<text x="{px(0.02):.2f}" y="{legend_y}" fill="#1f4e9c">exclusive</text>')
    out.append(f'<text x="{px(0.02):.2f}" y="{legend_y + 16}" fill="#c0392b">shared</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _title(scenario: MarketScenario) -> str:
    return f" ({escape(scenario.name)})" if scenario.name else ""
