"""Scenario files: strict JSON load/write and the bundled Humira scenarios.

Layout (``schema_version`` 1; money in dollars, shares as fractions)::

    {
      "schema_version": 1,
      "name": "...", "description": "...", "source": "...",
      "market":    {"total_units": 3500000, "list_price": 1731},
      "incumbent": {"pct_off_exclusive": 0.5, "pct_off_shared": 0.44,
                    "lump_sum_exclusive": 0, "lump_sum_shared": 0},
      "entrant":   {"pct_off_shared": 0.7, "lump_sum_shared": 0},
      "analysis":  {"share_grid_step": 0.01, "threshold_share": 0.2,
                    "sustainability_cutoff": 0.8},
      "menu":      {"slots": [{"kind": "SharedPrimary", "expected_share": 0.75}, ...]}
    }

``analysis``, ``menu``, the metadata strings and lump sums are optional.
Unknown keys are rejected.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import ScenarioIOError, ScenarioParseError, ScenarioValidationError
from .model import AnalysisSettings, DrugBid, MarketScenario, PositionSlot, SlotKind

SCHEMA_VERSION = 1
BUNDLED = ("humira-no-lump", "humira-lump", "humira-menu")

_TOP_KEYS = {"schema_version", "name", "description", "source", "market", "incumbent",
             "entrant", "analysis", "menu"}
_MARKET_KEYS = {"total_units", "list_price"}
_INCUMBENT_KEYS = {"pct_off_exclusive", "pct_off_shared", "lump_sum_exclusive", "lump_sum_shared"}
_ENTRANT_KEYS = {"pct_off_shared", "lump_sum_shared"}
_ANALYSIS_KEYS = {"share_grid_step", "threshold_share", "sustainability_cutoff"}
_SLOT_KEYS = {"kind", "expected_share"}


class _Collector:
    """Gathers ``(path, message)`` problems while walking a document."""

    def __init__(self):
        self.problems: list[tuple[str, str]] = []

    def add(self, path, message):
        self.problems.append((path, message))

    def obj(self, doc, key, path, allowed, required=True):
        value = doc.get(key)
        if value is None:
            if required:
                self.add(path, "required object missing")
            return None
        if not isinstance(value, dict):
            self.add(path, f"must be an object, got {type(value).__name__}")
            return None
        for extra in sorted(set(value) - allowed):
            self.add(f"{path}.{extra}", "unknown field")
        return value

    def build(self, factory, path, **kwargs):
        try:
            return factory(**kwargs)
        except ScenarioValidationError as exc:
            self.problems.extend((f"{path}.{p}" if path else p, m) for p, m in exc.problems)
            return None
        except (TypeError, ValueError) as exc:
            self.add(path, str(exc))
            return None


def _missing(c: _Collector, doc: dict, path: str, keys) -> bool:
    absent = [k for k in keys if k not in doc]
    for k in absent:
        c.add(f"{path}.{k}", "required field missing")
    return bool(absent)


def _known(doc: dict, allowed) -> dict:
    return {k: v for k, v in doc.items() if k in allowed}


def scenario_from_dict(doc) -> MarketScenario:
    c = _Collector()
    if not isinstance(doc, dict):
        raise ScenarioValidationError([("$", "top level must be a JSON object")])
    for extra in sorted(set(doc) - _TOP_KEYS):
        c.add(extra, "unknown field")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        c.add("schema_version", f"must be {SCHEMA_VERSION}, got {version!r}")
    meta = {}
    for key in ("name", "description", "source"):
        value = doc.get(key, "")
        if not isinstance(value, str):
            c.add(key, "must be a string")
        else:
            meta[key] = value

    market = c.obj(doc, "market", "market", _MARKET_KEYS)
    if market is not None and not _missing(c, market, "market", ("total_units", "list_price")):
        for key in ("total_units", "list_price"):
            value = market[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
                c.add(f"market.{key}", f"must be a number > 0, got {value!r}")

    incumbent = entrant = None
    inc_doc = c.obj(doc, "incumbent", "incumbent", _INCUMBENT_KEYS)
    if inc_doc is not None and not _missing(c, inc_doc, "incumbent", ("pct_off_exclusive", "pct_off_shared")):
        incumbent = c.build(DrugBid, "incumbent", **_known(inc_doc, _INCUMBENT_KEYS))

    ent_doc = doc.get("entrant")
    if isinstance(ent_doc, dict) and "pct_off_exclusive" in ent_doc:
        c.add("entrant.pct_off_exclusive", "entrant exclusive bids are not modeled")
        ent_doc = {k: v for k, v in ent_doc.items() if k != "pct_off_exclusive"}
        doc = {**doc, "entrant": ent_doc}
    ent_doc = c.obj(doc, "entrant", "entrant", _ENTRANT_KEYS)
    if ent_doc is not None and not _missing(c, ent_doc, "entrant", ("pct_off_shared",)):
        entrant = c.build(DrugBid, "entrant", **_known(ent_doc, _ENTRANT_KEYS))

    analysis = AnalysisSettings()
    an_doc = c.obj(doc, "analysis", "analysis", _ANALYSIS_KEYS, required=False)
    if an_doc is not None:
        analysis = c.build(AnalysisSettings, "analysis", **_known(an_doc, _ANALYSIS_KEYS))

    menu = None
    menu_doc = c.obj(doc, "menu", "menu", {"slots"}, required=False)
    if menu_doc is not None:
        menu = _slots(c, menu_doc.get("slots"))

    if c.problems:
        raise ScenarioValidationError(c.problems)
    scenario = c.build(
        MarketScenario,
        "",
        total_units=market["total_units"],
        list_price=market["list_price"],
        incumbent=incumbent,
        entrant=entrant,
        analysis=analysis,
        menu=menu,
        **meta,
    )
    if c.problems:
        raise ScenarioValidationError(c.problems)
    return scenario


def _slots(c: _Collector, raw):
    if not isinstance(raw, list) or not raw:
        c.add("menu.slots", "must be a non-empty list")
        return None
    slots = []
    for i, item in enumerate(raw):
        path = f"menu.slots[{i}]"
        if not isinstance(item, dict):
            c.add(path, "must be an object")
            continue
        for extra in sorted(set(item) - _SLOT_KEYS):
            c.add(f"{path}.{extra}", "unknown field")
        kind = item.get("kind")
        try:
            kind = SlotKind(kind)
        except ValueError:
            choices = ", ".join(k.value for k in SlotKind)
            c.add(f"{path}.kind", f"must be one of {choices}, got {kind!r}")
            continue
        slot = c.build(PositionSlot, path, kind=kind, expected_share=item.get("expected_share", 0.0))
        if slot is not None:
            slots.append(slot)
    return tuple(slots)


def scenario_to_dict(scenario: MarketScenario) -> dict:
    inc, ent, an = scenario.incumbent, scenario.entrant, scenario.analysis
    doc = {"schema_version": SCHEMA_VERSION}
    for key in ("name", "description", "source"):
        if getattr(scenario, key):
            doc[key] = getattr(scenario, key)
    doc["market"] = {"total_units": scenario.total_units, "list_price": scenario.list_price}
    doc["incumbent"] = {
        "pct_off_exclusive": inc.pct_off_exclusive,
        "pct_off_shared": inc.pct_off_shared,
        "lump_sum_exclusive": inc.lump_sum_exclusive,
        "lump_sum_shared": inc.lump_sum_shared,
    }
    doc["entrant"] = {"pct_off_shared": ent.pct_off_shared, "lump_sum_shared": ent.lump_sum_shared}
    doc["analysis"] = {
        "share_grid_step": an.share_grid_step,
        "threshold_share": an.threshold_share,
        "sustainability_cutoff": an.sustainability_cutoff,
    }
    if scenario.menu is not None:
        doc["menu"] = {
            "slots": [{"kind": s.kind.value, "expected_share": s.expected_share} for s in scenario.menu]
        }
    return doc


def loads_scenario(text: str) -> MarketScenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from exc
    return scenario_from_dict(doc)


def load_scenario(path) -> MarketScenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioIOError(f"cannot read scenario {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f"{path} is not UTF-8 text") from exc
    return loads_scenario(text)


def dumps_scenario(scenario: MarketScenario) -> str:
    return json.dumps(scenario_to_dict(scenario), indent=2) + "\n"


def write_scenario(scenario: MarketScenario, path) -> None:
    try:
        Path(path).write_text(dumps_scenario(scenario), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise ScenarioIOError(f"cannot write scenario {path}: {exc.strerror or exc}") from exc


def bundled_path(name: str):
    """Traversable for a bundled scenario, e.g. ``"humira-lump"``."""
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in BUNDLED:
        raise KeyError(f"no bundled scenario {name!r}; choose from {', '.join(BUNDLED)}")
    return resources.files("formwdp").joinpath("data").joinpath(f"{stem}.json")


def bundled_scenario(name: str) -> MarketScenario:
    return loads_scenario(bundled_path(name).read_text(encoding="utf-8"))


def resolve_scenario(ref: str) -> MarketScenario:
    """Load ``ref`` as a file path, falling back to a bundled scenario name."""
    path = Path(ref)
    if not path.exists():
        stem = ref[:-5] if ref.endswith(".json") else ref
        if stem in BUNDLED:
            return bundled_scenario(stem)
    return load_scenario(path)
