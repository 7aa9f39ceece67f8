"""How small is the entropy the shift adds?

Run with ``python3 demos/02_excess_entropy_scaling.py``.

The shift coefficients are scaled by eps.  The extra entropy production
falls off like eps^3, while on nearly ideal gradients (ideal part plus eps
times a perturbation) the shift itself is O(eps) and its entropy O(eps^2).
"""

import numpy as np

from bdnk_lab.analysis import make_eulerian_gradient, random_coeffs, scaling_study
from bdnk_lab.fluid import MasslessIdealEos, rest_state

rng = np.random.default_rng(2)
eos = MasslessIdealEos()
state = rest_state(0.9, -0.2, velocity=(0.1, 0.4, 0.0))
coeffs = random_coeffs(rng)
G = rng.normal(size=(5, 4))
ideal = make_eulerian_gradient(state, eos, rng.normal(size=(5, 4))).G
eps = [1e-1, 1e-2, 1e-3, 1e-4]

for title, table in [
    ("shift coefficients ~ eps", scaling_study(state, eos, coeffs, G, eps, "coefficients")),
    ("ideal gradient + eps perturbation", scaling_study(state, eos, coeffs, ideal, eps, "mixed", G_pert=G)),
]:
    print(title)
    print(f"  {'eps':>8} {'Q excess':>12} {'|dpsi|':>12}")
    for e, q, d in zip(table.eps, table.Q_tilde, table.dpsi_norm):
        print(f"  {e:8.0e} {q:12.4e} {d:12.4e}")
    print(f"  slope of Q excess: {table.slope:.4f}, slope of |dpsi|: {table.dpsi_slope:.4f}\n")
