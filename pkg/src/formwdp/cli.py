"""Command-line front end.

    formwdp breakeven -s humira-no-lump
    formwdp curve -s humira-no-lump --out out/
    formwdp equalize
    formwdp exclusion -s humira-lump
    formwdp solve -s humira-menu --share 0.10 [--oracle]
    formwdp tables --out out/

``-s`` takes a scenario file path or a bundled scenario name. Exit codes:
0 success, 1 domain error, 2 invalid input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from pathlib import Path

from . import display, report
from .display import fmt_millions, fmt_percent, percent
from .errors import (
    DomainError,
    NoBreakeven,
    ScenarioIOError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .lumpsum import exclusion_test, net_price_table
from .market import scenario_breakeven, slope_per_point, tebc_exclusive, tebc_shared
from .model import MarketScenario, Position
from .scenario_io import resolve_scenario
from .solver import compare_menus

GRID_ENV = "FORMWDP_GRID_STEP"

EXIT_OK, EXIT_DOMAIN, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3


def load(ref: str) -> MarketScenario:
    scenario = resolve_scenario(ref)
    step = os.environ.get(GRID_ENV)
    if step:
        try:
            value = float(step)
        except ValueError:
            raise ScenarioValidationError([(GRID_ENV, f"not a number: {step!r}")]) from None
        try:
            analysis = dataclasses.replace(scenario.analysis, share_grid_step=value)
        except ScenarioValidationError as exc:
            raise ScenarioValidationError([(GRID_ENV, m) for _, m in exc.problems]) from None
        scenario = dataclasses.replace(scenario, analysis=analysis)
    return scenario


def _one_scenario(args) -> MarketScenario:
    refs = args.scenario or []
    if len(refs) != 1:
        raise ScenarioValidationError([("--scenario", "exactly one scenario is required")])
    return load(refs[0])


def _emit(text: str, out) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


# --- commands ----------------------------------------------------------


def cmd_breakeven(args, out) -> int:
    scenario = _one_scenario(args)
    be = scenario_breakeven(scenario)
    slope = slope_per_point(scenario)
    excl = tebc_exclusive(scenario)
    intercept = tebc_shared(scenario, 0.0)
    method = "grid sign change, lump sums" if scenario.has_lump_sums else "closed form"
    if args.format == "csv":
        rows = [
            {
                "scenario": scenario.name,
                "breakeven_pct": percent(be),
                "breakeven_share": repr(be),
                "reachable": be <= 1.0,
                "slope_per_point_usd": repr(slope),
                "tebc_exclusive_usd": repr(excl),
                "tebc_shared_at_zero_usd": repr(intercept),
            }
        ]
        _emit(report.to_csv(rows), out)
        return EXIT_OK
    unreachable = "" if be <= 1.0 else ", unreachable"
    lines = [
        f"scenario: {scenario.name or args.scenario[0]}",
        f"TEBC exclusive: {fmt_millions(excl)}",
        f"TEBC shared at zero entrant share: {fmt_millions(intercept)}",
        f"slope per point of entrant share: ${slope / display.MILLION:,.2f}M",
        f"break-even entrant share: {fmt_percent(be)}",
        f"  raw {be!r} ({method}{unreachable})",
    ]
    _emit("\n".join(lines), out)
    return EXIT_OK


def cmd_curve(args, out) -> int:
    scenario = _one_scenario(args)
    csv_text = report.to_csv(report.curve_rows(scenario), report.CURVE_COLUMNS)
    csv_path, svg_path = args.csv, args.svg
    if args.out:
        out_dir = Path(args.out)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ScenarioIOError(f"cannot create {out_dir}: {exc.strerror or exc}") from exc
        csv_path = csv_path or out_dir / "cost_curve.csv"
        svg_path = svg_path or out_dir / "cost_curve.svg"
    if csv_path:
        report.write_text(csv_path, csv_text)
        _emit(f"wrote {csv_path}", out)
    if svg_path:
        report.write_text(svg_path, report.cost_curve_svg(scenario))
        _emit(f"wrote {svg_path}", out)
    if csv_path or svg_path:
        return EXIT_OK
    if args.format == "csv":
        _emit(csv_text, out)
        return EXIT_OK
    lines = [f"{'x':>5} {'exclusive':>10} {'shared':>10}   ($M)"]
    for row in report.curve_rows(scenario):
        lines.append(
            f"{percent(float(row['x'])):>4}% {row['tebc_exclusive']:>10,} {row['tebc_shared']:>10,}"
        )
    _emit("\n".join(lines), out)
    return EXIT_OK


def cmd_equalize(args, out) -> int:
    biddowns = report.pp_range(*args.biddown)
    spreads = report.pp_range(*args.spread)
    if any(s == 0 for s in spreads):
        raise NoBreakeven("an entrant spread of zero has no break-even share")
    grid = report.equalize_grid(biddowns, spreads)
    if args.format == "csv" or args.out:
        rows = [
            {"entrant_spread_pp": report._pp(s), **{report._pp(d): v for d, v in zip(biddowns, row)}}
            for s, row in zip(spreads, grid)
        ]
        text = report.to_csv(rows)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            path = Path(args.out) / "equalize.csv"
            report.write_text(path, text)
            _emit(f"wrote {path}", out)
        else:
            _emit(text, out)
        return EXIT_OK
    head = "entrant spread \\ incumbent bid-down"
    lines = [head, " " * 8 + "".join(f"{report._pp(d) + '%':>6}" for d in biddowns)]
    for s, row in zip(spreads, grid):
        lines.append(f"{report._pp(s) + '%':>8}" + "".join(f"{str(v) + '%':>6}" for v in row))
    _emit("\n".join(lines), out)
    return EXIT_OK


def cmd_exclusion(args, out) -> int:
    scenario = _one_scenario(args)
    verdict = exclusion_test(scenario)
    rows = net_price_table(scenario, report.NET_PRICE_SHARES)
    if args.format == "csv":
        _emit(report.to_csv(report.net_price_rows([scenario])), out)
    else:
        def row(label, fn):
            return f"{label:<34}" + "".join(f"{fn(r):>8}" for r in rows)

        money = display.fmt_dollars
        lines = [
            row("entrant share", lambda r: fmt_percent(r.x)),
            row("incumbent share", lambda r: fmt_percent(1 - r.x)),
            row("entrant avg net price, lump sums", lambda r: money(r.avg_net_price_entrant)),
            row("entrant net price, no lump sums", lambda r: money(r.flat_price_entrant)),
            row("entrant % off list, lump sums", lambda r: fmt_percent(r.pct_off_entrant)),
            row("incumbent avg net price, lump sums", lambda r: money(r.avg_net_price_incumbent)),
            row("incumbent net price, no lump sums", lambda r: money(r.flat_price_incumbent)),
            row("incumbent % off list, lump sums", lambda r: fmt_percent(r.pct_off_incumbent)),
        ]
        _emit("\n".join(lines), out)
    threshold = fmt_percent(verdict.threshold_share)
    at = fmt_percent(verdict.entrant_pct_off_at_threshold)
    cutoff = fmt_percent(verdict.cutoff)
    if verdict.exclusionary:
        line = f"EXCLUSIONARY at {threshold} threshold ({at} off list > {cutoff} cutoff)"
    else:
        line = f"not exclusionary at {threshold} threshold ({at} off list ≤ {cutoff} cutoff)"
    sustainable = (
        "none on grid"
        if verdict.sustainable_share is None
        else fmt_percent(verdict.sustainable_share)
    )
    if args.format != "csv":
        _emit(line, out)
        _emit(f"sustainable share: {sustainable}", out)
    else:
        sys.stderr.write(line + "\n")
    return EXIT_OK


def _describe(label: str, outcome, matrix, slots) -> list[str]:
    lines = [label]
    for i, j in enumerate(outcome.assignment):
        share = slots[j].expected_share
        lines.append(
            f"  {matrix.row_labels[i]:<10} -> {matrix.col_labels[j]:<16}"
            f" {fmt_percent(share):>5}  {fmt_millions(outcome.slot_costs[i]):>8}"
        )
    lines.append(f"  total: {fmt_millions(outcome.total_cost)}")
    return lines


def cmd_solve(args, out) -> int:
    scenario = _one_scenario(args)
    if scenario.menu is None and args.share is None:
        raise ScenarioValidationError([("menu", "scenario has no menu; give one or pass --share")])
    cmp = compare_menus(scenario, x=args.share, oracle=args.oracle)
    chosen = cmp.shared if cmp.chosen is Position.SHARED else cmp.exclusive
    lines = _describe(
        f"shared menu (entrant share {fmt_percent(cmp.x)}):",
        cmp.shared,
        cmp.shared_matrix,
        cmp.shared_menu.slots,
    )
    lines += _describe(
        "exclusive menu:", cmp.exclusive, cmp.exclusive_matrix, cmp.exclusive_menu.slots
    )
    solver_name = "brute-force oracle" if args.oracle else "Hungarian"
    lines.append(
        f"chosen: {cmp.chosen.value}, total expected cost {fmt_millions(chosen.total_cost)}"
        f" ({solver_name})"
    )
    _emit("\n".join(lines), out)
    return EXIT_OK


def cmd_tables(args, out) -> int:
    refs = args.scenario or ["humira-no-lump", "humira-lump"]
    scenarios = [load(ref) for ref in refs]
    out_dir = args.out or "."
    for path in report.write_tables(scenarios, out_dir):
        _emit(f"wrote {path}", out)
    return EXIT_OK


# --- argument parsing --------------------------------------------------


def _common(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("-s", "--scenario", action="append", default=s,
                        help="scenario JSON path or bundled name (humira-no-lump, humira-lump, humira-menu)")
    parser.add_argument("--out", default=s, help="output directory")
    parser.add_argument("--format", choices=("text", "csv"), default=s)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formwdp",
        description="Formulary position assignment: break-even shares, cost curves, "
        "lump-sum price-cost test and winner determination.",
    )
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("breakeven", help="break-even entrant share, slope and intercepts")
    _common(p)
    p.set_defaults(func=cmd_breakeven)

    p = sub.add_parser("curve", help="cost curve CSV and SVG chart")
    _common(p)
    p.add_argument("--csv", help="CSV output path")
    p.add_argument("--svg", help="SVG output path")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("equalize", help="array of equalizing entrant shares")
    _common(p)
    p.add_argument("--biddown", nargs=3, type=float, metavar=("START", "STOP", "STEP"),
                   default=report.DEFAULT_BIDDOWN_PP, help="incumbent bid-down spreads, in points")
    p.add_argument("--spread", nargs=3, type=float, metavar=("START", "STOP", "STEP"),
                   default=report.DEFAULT_SPREAD_PP, help="entrant-incumbent shared spreads, in points")
    p.set_defaults(func=cmd_equalize)

    p = sub.add_parser("exclusion", help="net-price table and exclusion verdict")
    _common(p)
    p.set_defaults(func=cmd_exclusion)

    p = sub.add_parser("solve", help="winner determination over the scenario menu")
    _common(p)
    p.add_argument("--share", type=float, help="override the entrant (secondary slot) share")
    p.add_argument("--oracle", action="store_true", help="use brute-force enumeration")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tables", help="CSV tables of rebate menus, net prices, costs and rebates")
    _common(p)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None, out=None, err=None) -> int:
    if out is None:
        out = sys.stdout
        if hasattr(out, "reconfigure"):
            out.reconfigure(encoding="utf-8")
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    for name, default in (("scenario", None), ("out", None), ("format", "text")):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.func(args, out)
    except (ScenarioParseError, ScenarioValidationError) as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_INVALID
    except DomainError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except KeyError as exc:
        err.write(f"invalid input: {exc.args[0]}\n")
        return EXIT_INVALID
    except OSError as exc:
        err.write(f"I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
