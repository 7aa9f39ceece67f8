"""Dissipative relativistic fluids with Eulerian gradient shifts: a pointwise numerical laboratory."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .dissipation import (
    DissipationCoeffs,
    entropy_production,
    landau_tensor,
    shifted_tensor,
)
from .fluid import BarotropicRadiationEos, MasslessIdealEos, make_eos, rest_state
from .shock import (
    hugoniot_continuation,
    profile_solve,
    profile_validate,
    sonic_base_state,
)

__all__ = [
    "BarotropicRadiationEos",
    "DissipationCoeffs",
    "MasslessIdealEos",
    "__version__",
    "entropy_production",
    "hugoniot_continuation",
    "landau_tensor",
    "make_eos",
    "profile_solve",
    "profile_validate",
    "rest_state",
    "shifted_tensor",
    "sonic_base_state",
]
