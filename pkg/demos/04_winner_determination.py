# Winner determination as a min-cost assignment
#
# Drugs are rows, formulary slots are columns. The exclusive menu has one
# real slot plus a dummy; the shared menu has a primary and a secondary.

from formwdp import bundled_scenario, solve_min_cost
from formwdp.display import fmt_millions, fmt_percent
from formwdp.solver import compare_menus, crossover_share, sweep_menus

scenario = bundled_scenario("humira-menu")
result = compare_menus(scenario)

for label, matrix, outcome in (
    ("exclusive", result.exclusive_matrix, result.exclusive),
    ("shared", result.shared_matrix, result.shared),
):
    print(label, "cost matrix ($M):")
    print((matrix.entries / 1e6).round(1))
    print("  total", fmt_millions(outcome.total_cost), "assignment", outcome.assignment)

print("chosen:", result.chosen.value)

# The solver also works on a plain matrix
print(solve_min_cost([[4, 1, 3], [2, 0, 5], [3, 2, 2]]).assignment)

# Sweeping the secondary share finds the switch point on the grid
cross = crossover_share(sweep_menus(scenario))
print("solver crossover:", fmt_percent(cross))
