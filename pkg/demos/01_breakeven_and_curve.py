# Break-even entrant share for a two-drug class
#
# A plan can give one drug an exclusive spot, or list both and steer a share
# x of patients to the cheaper entrant. Shared wins once x passes the
# break-even share (b1 - b2) / (b3 - b2).

from pathlib import Path

from formwdp import bundled_scenario, cost_curve, scenario_breakeven, slope_per_point, tebc_exclusive
from formwdp.display import fmt_millions, fmt_percent
from formwdp.report import cost_curve_svg

scenario = bundled_scenario("humira-no-lump")
print(scenario.name)

# Exclusive cost is flat; shared cost falls linearly with x.
print("exclusive TEBC:", fmt_millions(tebc_exclusive(scenario)))
print("slope per point:", f"${slope_per_point(scenario) / 1e6:.2f}M")

x_hat = scenario_breakeven(scenario)
print("break-even share:", fmt_percent(x_hat), f"(raw {x_hat:.5f})")

# A few points along the curve
for line in cost_curve(scenario)[10:41:5]:
    print(f"  x={line.x:.2f}  shared {fmt_millions(line.tebc_shared)}")

# Write the chart next to this file
out = Path("cost_curve.svg")
out.write_text(cost_curve_svg(scenario), encoding="utf-8")
print("wrote", out)
