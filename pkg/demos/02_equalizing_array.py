# Bid spreads that equalize expected benefit costs
#
# Only the spreads matter: how far the incumbent bids down for exclusivity
# (b1 - b2) and how far the entrant undercuts (b3 - b2).

import numpy as np

from formwdp import equalizing_share_array
from formwdp.display import percent

biddowns = np.arange(3, 11) / 100
spreads = np.arange(20, 56, 5) / 100

grid = equalizing_share_array(biddowns, spreads)

print("spread | " + " ".join(f"{d * 100:4.0f}" for d in biddowns))
for s, row in zip(spreads, grid):
    print(f"  {s * 100:3.0f}% | " + " ".join(f"{percent(v):4d}" for v in row))

# A wider entrant spread means a smaller share is enough
print("column at 3pp bid-down:", [percent(r[0]) for r in grid])
