import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formwdp.errors import DegenerateShare, MissingBid
from formwdp.lumpsum import (
    avg_net_price_entrant,
    avg_net_price_incumbent,
    exclusion_test,
    gross_rebates,
    net_price_table,
    reconstructed_tebc_shared,
)
from formwdp.market import share_grid, tebc_shared
from formwdp.model import AnalysisSettings, DrugBid, MarketScenario, Position
from strategies import scenarios

M = 1e6


def with_entrant_lump(s, ls3, **analysis):
    return MarketScenario(
        total_units=s.total_units,
        list_price=s.list_price,
        incumbent=s.incumbent,
        entrant=DrugBid(s.entrant.pct_off_shared, lump_sum_shared=ls3),
        analysis=AnalysisSettings(**analysis) if analysis else s.analysis,
    )


class TestNetPrices:
    def test_incumbent(self, lump, no_lump):
        assert round(avg_net_price_incumbent(lump, 0.10)) == 1132
        assert round(avg_net_price_incumbent(lump, 0.40)) == 941
        for x in (0.1, 0.5, 1.0):
            assert round(avg_net_price_incumbent(no_lump, x)) == 969

    def test_entrant(self, lump, no_lump):
        assert abs(avg_net_price_entrant(lump, 0.20) - (-3)) <= 1
        assert round(avg_net_price_entrant(lump, 0.10)) == -1217
        for x in (0.0, 0.3, 1.0):
            assert round(avg_net_price_entrant(no_lump, x)) == 519

    def test_entrant_uses_shared_bid(self, lump):
        # with b3 the 35% cell is $518; the exclusive bid would give $599
        assert round(avg_net_price_entrant(lump, 0.35)) == 518

    def test_degenerate(self, lump):
        with pytest.raises(DegenerateShare):
            avg_net_price_entrant(lump, 0.0)
        with pytest.raises(DegenerateShare):
            avg_net_price_incumbent(lump, 1.0)

    def test_table_percentages(self, lump):
        rows = {r.x: r for r in net_price_table(lump, [0.10, 0.20, 0.35])}
        assert round(rows[0.10].pct_off_entrant * 100) == 170
        assert round(rows[0.20].pct_off_entrant * 100) == 100
        assert round(rows[0.35].pct_off_entrant * 100) == 70

    def test_pct_definition(self, lump):
        for r in net_price_table(lump, [0.1, 0.25, 0.4]):
            assert r.pct_off_entrant == pytest.approx(1 - r.avg_net_price_entrant / lump.list_price)
            assert r.pct_off_incumbent == pytest.approx(
                1 - r.avg_net_price_incumbent / lump.list_price
            )


class TestExclusion:
    def test_humira_lump(self, lump):
        v = exclusion_test(lump)
        assert v.exclusionary
        assert round(v.entrant_pct_off_at_threshold * 100) == 100
        assert v.threshold_share == 0.20 and v.cutoff == 0.80

    def test_zero_lump_not_exclusionary(self, lump):
        v = exclusion_test(with_entrant_lump(lump, 0.0))
        assert not v.exclusionary
        # the lump scenario's own entrant bid is 30% off
        assert v.entrant_pct_off_at_threshold == 0.30

    def test_no_lump_scenario(self, no_lump):
        v = exclusion_test(no_lump)
        assert not v.exclusionary and v.entrant_pct_off_at_threshold == 0.70

    def test_sustainable_share_is_first_grid_point_under_cutoff(self, lump):
        # independent: solve Z(1-b3) - LS3/(T x) = (1 - cutoff) Z for x
        z, t = lump.list_price, lump.total_units
        exact = 850e6 / (t * (z * (1 - 0.30) - 0.20 * z))
        assert exact == pytest.approx(0.2806, abs=1e-4)
        v = exclusion_test(lump)
        assert v.sustainable_share == 0.29

    def test_sustainable_none_on_grid(self, lump):
        v = exclusion_test(with_entrant_lump(lump, 10e9))
        assert v.sustainable_share is None

    def test_cutoff_boundary_not_exclusionary(self):
        # Z(1-b3) - LS3/(T x) = 200 -> exactly 80% off list at x = 0.5
        s = MarketScenario(
            total_units=1000.0,
            list_price=1000.0,
            incumbent=DrugBid(0.4, 0.5),
            entrant=DrugBid(0.5, lump_sum_shared=150_000.0),
            analysis=AnalysisSettings(threshold_share=0.5),
        )
        v = exclusion_test(s)
        assert v.entrant_pct_off_at_threshold == pytest.approx(0.8, abs=1e-15)
        assert not v.exclusionary

    def test_degenerate_threshold(self, lump):
        with pytest.raises(Exception):
            AnalysisSettings(threshold_share=0.0)


class TestGrossRebates:
    def test_examples(self, no_lump, lump):
        assert round(gross_rebates(no_lump, Position.SHARED, 0.20) / M) == 2981
        assert round(gross_rebates(lump, Position.SHARED, 0.20) / M) == 3024
        for x in (0.0, 0.5, 1.0):
            assert round(gross_rebates(no_lump, Position.EXCLUSIVE, x) / M) == 3029

    def test_accepts_strings(self, no_lump):
        assert gross_rebates(no_lump, "Exclusive") == gross_rebates(no_lump, Position.EXCLUSIVE)

    def test_missing_bid(self, no_lump):
        s = MarketScenario.__new__(MarketScenario)
        object.__setattr__(s, "total_units", 1.0)
        object.__setattr__(s, "list_price", 1.0)
        object.__setattr__(s, "incumbent", DrugBid(0.2))
        object.__setattr__(s, "entrant", DrugBid(0.3))
        with pytest.raises(MissingBid):
            gross_rebates(s, Position.EXCLUSIVE)


# --- properties ----------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(scenarios())
def test_monotone_net_prices(s):
    grid = [x for x in share_grid(0.01) if 0 < x < 1]
    ent = [avg_net_price_entrant(s, x) for x in grid]
    inc = [avg_net_price_incumbent(s, x) for x in grid]
    if s.entrant.lump_sum_shared > 0:
        assert all(b > a for a, b in zip(ent, ent[1:]))
    else:
        assert len(set(ent)) == 1
    if s.incumbent.lump_sum_shared > 0:
        assert all(b < a for a, b in zip(inc, inc[1:]))
    else:
        assert len(set(inc)) == 1


@settings(max_examples=200, deadline=None)
@given(scenarios(lumps=False))
def test_zero_lump_reduction(s):
    for line in net_price_table(s, share_grid(0.01)):
        assert line.pct_off_incumbent == s.incumbent.pct_off_shared
        assert line.pct_off_entrant == s.entrant.pct_off_shared


@settings(max_examples=200, deadline=None)
@given(scenarios())
def test_reconstruction(s):
    for x in share_grid(s.analysis.share_grid_step):
        if (x == 0 and s.entrant.lump_sum_shared > 0) or (x == 1 and s.incumbent.lump_sum_shared > 0):
            continue
        expected = tebc_shared(s, x)
        assert reconstructed_tebc_shared(s, x) == pytest.approx(
            expected, rel=1e-6, abs=1e-6 * s.market_value
        )


@settings(max_examples=200, deadline=None)
@given(scenarios(), st.floats(0, 5e9), st.floats(0, 5e9), st.floats(0.05, 0.95))
def test_verdict_monotone_in_lump_sum(s, a, b, threshold):
    lo, hi = sorted((a, b))
    v_lo = exclusion_test(with_entrant_lump(s, lo, threshold_share=threshold))
    v_hi = exclusion_test(with_entrant_lump(s, hi, threshold_share=threshold))
    if v_lo.exclusionary:
        assert v_hi.exclusionary
