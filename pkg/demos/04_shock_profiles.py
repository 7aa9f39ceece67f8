"""Weak shocks have smooth profiles, and they approach the classical viscous ones.

Run with ``python3 demos/04_shock_profiles.py`` (about half a minute).

For each amplitude we build a standing shock about a sonic state, integrate
the shifted profile and the Landau-Lifshitz profile, and measure the
Hausdorff distance between the two orbits.  The distance shrinks with the
amplitude.
"""

import numpy as np

from bdnk_lab.dissipation import DissipationCoeffs
from bdnk_lab.fluid import MasslessIdealEos
from bdnk_lab.shock import hugoniot_continuation, profile_solve, profile_validate, sonic_base_state

eos = MasslessIdealEos()
coeffs = DissipationCoeffs(eta=0.03, kappa=0.03, lam=0.3, mu=0.3, nu=0.3)
sonic = sonic_base_state(eos)
print(f"sonic state boosted to v = {sonic.velocity:.12f} (|v| = 1/sqrt 3 = {1 / np.sqrt(3):.12f})\n")

print(f"{'alpha':>6} {'RH res':>9} {'ODE res':>9} {'ends':>9} {'Hausdorff':>10} {'width':>8} {'entropy':>9}")
for alpha in (0.08, 0.04, 0.02):
    shock = hugoniot_continuation(sonic, eos, alpha)
    shifted = profile_solve(shock, eos, coeffs)
    landau = profile_solve(shock, eos, coeffs, landau=True)
    rep = profile_validate(shifted, shock, eos, coeffs, landau)
    coord = shifted.acoustic_coordinate(shock)
    jump = coord[-1] - coord[0]
    # width: distance in s over which the orbit covers the middle 80 percent of the jump
    lo, hi = np.interp([coord[0] + 0.1 * jump, coord[0] + 0.9 * jump], coord, shifted.s)
    print(f"{alpha:6.2f} {shock.rh_residual:9.1e} {shifted.max_ode_residual:9.1e}"
          f" {max(shifted.start_residual, shifted.end_residual):9.1e} {rep.hausdorff:10.3e}"
          f" {hi - lo:8.2f} {rep.entropy_integral:9.2e}")

# Halving alpha roughly doubles the width: weak shocks are wide and the two
# theories look more and more alike on that scale.
