"""Which gradients does the shifted dissipation tensor see?

Run with ``python3 demos/01_equilibria_and_eulerian_gradients.py``.

We pick one moving fluid state and look at three kinds of gradient: an
equilibrium (Killing-type) gradient, a gradient on which the ideal fluid
equations hold exactly, and a generic one.
"""

import numpy as np

from bdnk_lab.analysis import make_eulerian_gradient, make_lte_gradient, random_antisymmetric
from bdnk_lab.dissipation import (
    DissipationCoeffs,
    apply,
    delta_B,
    entropy_production,
    landau_tensor,
    shift_vector,
)
from bdnk_lab.fluid import MasslessIdealEos, rest_state

rng = np.random.default_rng(1)
eos = MasslessIdealEos()
state = rest_state(1.2, 0.3, velocity=(0.3, -0.1, 0.2))
coeffs = DissipationCoeffs(eta=0.1, zeta=0.05, kappa=0.1, lam=0.4, mu=0.2, nu=0.7)

gradients = {
    "equilibrium": make_lte_gradient(state, random_antisymmetric(rng)).G,
    "ideal-flow": make_eulerian_gradient(state, eos, rng.normal(size=(5, 4))).G,
    "generic": rng.normal(size=(5, 4)),
}

print(f"{'gradient':<12} {'|B_L.G|':>10} {'|dB.G|':>10} {'|dpsi|':>10} {'Q total':>10} {'Q excess':>10}")
for name, G in gradients.items():
    G = G / np.linalg.norm(G)
    total, excess = entropy_production(state, eos, coeffs, G)
    print(
        f"{name:<12} {np.linalg.norm(apply(landau_tensor(state, eos, coeffs), G)):10.2e}"
        f" {np.linalg.norm(apply(delta_B(state, eos, coeffs), G)):10.2e}"
        f" {np.linalg.norm(shift_vector(state, eos, coeffs, G)):10.2e}"
        f" {total:10.2e} {excess:10.2e}"
    )

# Equilibria are invisible to both tensors.  Ideal-flow gradients still feel
# the viscous part but not the shift: the shift only ever acts through the
# residual of the ideal equations.
