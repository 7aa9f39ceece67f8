"""Which shift coefficients give a causal symbol?

Run with ``python3 demos/03_causality_region.py``.

Without a shift the second-order symbol is degenerate.  We scan a coarse
(lam, mu, nu) grid at a fluid at rest and report the largest characteristic
speed along the three axes.
"""

import numpy as np

from bdnk_lab.characteristics import causal_region, causality_point, causality_scan, unit_directions
from bdnk_lab.dissipation import DissipationCoeffs
from bdnk_lab.fluid import MasslessIdealEos, rest_state

eos = MasslessIdealEos()
state = rest_state(1.0, 0.0)
base = DissipationCoeffs(eta=0.03, kappa=0.03)
dirs = unit_directions(3)

landau = causality_point(state, eos, base, dirs[0])
print(f"no shift: degenerate={landau.degenerate}, finite roots={landau.roots.size}")

values = [0.1, 0.3, 0.6, 0.9]
grid = [(lam, mu, nu) for lam in values for mu in values for nu in values]
points = causality_scan(state, eos, base, grid, dirs)
region = set(causal_region(points))
print(f"causal triples: {len(region)} of {len(grid)}")

worst = {}
for p in points:
    worst[(p.lam, p.mu, p.nu)] = max(worst.get((p.lam, p.mu, p.nu), 0.0), p.max_abs_speed)
print("\nmax |speed| for lam = 0.3 (rows mu, columns nu)")
print("      " + " ".join(f"{v:6.1f}" for v in values))
for mu in values:
    row = " ".join(f"{worst[(0.3, mu, nu)]:6.3f}" + ("*" if (0.3, mu, nu) not in region else " ")
                   for nu in values)
    print(f"{mu:5.1f} {row}")
print("(* marks a non-causal triple)")
print(f"\nspread of speeds over directions at the default triple: "
      f"{np.ptp([causality_point(state, eos, base.with_shift(0.3, 0.3, 0.3), d).max_abs_speed for d in dirs]):.1e}")
