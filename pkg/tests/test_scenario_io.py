import json
import os

import pytest
from hypothesis import HealthCheck, given, settings

from formwdp.errors import ScenarioIOError, ScenarioParseError, ScenarioValidationError
from formwdp.scenario_io import (
    bundled_path,
    bundled_scenario,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_from_dict,
    scenario_to_dict,
    write_scenario,
)
from strategies import scenarios


def base_doc():
    return json.loads(bundled_path("humira-no-lump").read_text())


class TestBundled:
    def test_no_lump(self, no_lump):
        assert no_lump.total_units == 3.5e6 and no_lump.list_price == 1731
        assert no_lump.incumbent.pct_off_exclusive == 0.50
        assert no_lump.incumbent.pct_off_shared == 0.44
        assert no_lump.entrant.pct_off_shared == 0.70

    def test_lump(self, lump):
        assert (lump.incumbent.pct_off_exclusive, lump.incumbent.pct_off_shared) == (0.253, 0.126)
        assert lump.entrant.pct_off_shared == 0.30
        assert lump.incumbent.lump_sum_exclusive == 1500e6
        assert lump.incumbent.lump_sum_shared == 1200e6
        assert lump.entrant.lump_sum_shared == 850e6

    def test_defaults_applied(self):
        doc = base_doc()
        del doc["analysis"]
        s = scenario_from_dict(doc)
        assert (s.analysis.share_grid_step, s.analysis.threshold_share,
                s.analysis.sustainability_cutoff) == (0.01, 0.20, 0.80)

    def test_unknown_bundle(self):
        with pytest.raises(KeyError):
            bundled_scenario("nope")


class TestValidation:
    def test_out_of_range(self):
        doc = base_doc()
        doc["entrant"]["pct_off_shared"] = 1.2
        with pytest.raises(ScenarioValidationError) as exc:
            scenario_from_dict(doc)
        assert exc.value.paths == ["entrant.pct_off_shared"]

    @pytest.mark.parametrize(
        "mutate, path",
        [
            (lambda d: d["market"].update(total_units=0), "market.total_units"),
            (lambda d: d["market"].update(list_price=-1), "market.list_price"),
            (lambda d: d["incumbent"].update(lump_sum_shared=-5), "incumbent.lump_sum_shared"),
            (lambda d: d["incumbent"].update(pct_off_exclusive="half"), "incumbent.pct_off_exclusive"),
            (lambda d: d["incumbent"].pop("pct_off_shared"), "incumbent.pct_off_shared"),
            (lambda d: d["entrant"].update(pct_off_exclusive=0.9), "entrant.pct_off_exclusive"),
            (lambda d: d["entrant"].update(colour="red"), "entrant.colour"),
            (lambda d: d.update(extra=1), "extra"),
            (lambda d: d.update(schema_version=2), "schema_version"),
            (lambda d: d["analysis"].update(share_grid_step=0.6), "analysis.share_grid_step"),
            (lambda d: d["analysis"].update(threshold_share=1.0), "analysis.threshold_share"),
            (lambda d: d["analysis"].update(sustainability_cutoff=0), "analysis.sustainability_cutoff"),
            (lambda d: d.update(menu={"slots": [{"kind": "Top", "expected_share": 1}]}), "menu.slots[0].kind"),
            (lambda d: d.update(menu={"slots": [{"kind": "SharedPrimary", "expected_share": 0.5}]}), "menu.slots"),
            (lambda d: d.pop("market"), "market"),
        ],
    )
    def test_one_error_per_field(self, mutate, path):
        doc = base_doc()
        mutate(doc)
        with pytest.raises(ScenarioValidationError) as exc:
            scenario_from_dict(doc)
        assert exc.value.paths == [path]
        assert path in str(exc.value)

    def test_several_fields(self):
        doc = base_doc()
        doc["entrant"]["pct_off_shared"] = 2
        doc["market"]["list_price"] = 0
        with pytest.raises(ScenarioValidationError) as exc:
            scenario_from_dict(doc)
        assert sorted(exc.value.paths) == ["entrant.pct_off_shared", "market.list_price"]

    def test_parse_error_position(self):
        with pytest.raises(ScenarioParseError) as exc:
            loads_scenario('{\n  "schema_version": 1,\n  "market": {,}\n}')
        assert exc.value.line == 3 and exc.value.column is not None


class TestRoundTrip:
    @pytest.mark.parametrize("name", ["humira-no-lump", "humira-lump", "humira-menu"])
    def test_bundled(self, name, tmp_path):
        s = bundled_scenario(name)
        write_scenario(s, tmp_path / "s.json")
        assert load_scenario(tmp_path / "s.json") == s

    def test_unwritable(self, no_lump, tmp_path):
        with pytest.raises(ScenarioIOError):
            write_scenario(no_lump, tmp_path / "missing-dir" / "s.json")

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioIOError):
            load_scenario(tmp_path / "nope.json")

    @settings(max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(scenarios())
    def test_property(self, s):
        assert loads_scenario(dumps_scenario(s)) == s
        assert scenario_from_dict(json.loads(json.dumps(scenario_to_dict(s)))) == s
