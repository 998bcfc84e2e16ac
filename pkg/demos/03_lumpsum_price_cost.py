# Lump-sum rebates and a price-cost test
#
# Lump sums are spread over the units each drug actually serves, so an
# entrant with a small share can face a negative average net price.

from formwdp import bundled_scenario, exclusion_test, net_price_table
from formwdp.display import fmt_dollars, fmt_percent
from formwdp.report import NET_PRICE_SHARES

scenario = bundled_scenario("humira-lump")

for line in net_price_table(scenario, NET_PRICE_SHARES):
    print(
        f"x={fmt_percent(line.x):>4}  entrant {fmt_dollars(line.avg_net_price_entrant):>7}"
        f" ({fmt_percent(line.pct_off_entrant)} off)"
        f"  incumbent {fmt_dollars(line.avg_net_price_incumbent):>7}"
    )

verdict = exclusion_test(scenario)
print("exclusionary:", verdict.exclusionary)
print("entrant at threshold:", fmt_percent(verdict.entrant_pct_off_at_threshold), "off list")
print("first sustainable grid share:", fmt_percent(verdict.sustainable_share))
