from __future__ import annotations

import time

import numpy as np
import pytest

from bdnk_lab.dissipation import DissipationCoeffs
from bdnk_lab.fluid import BarotropicRadiationEos, MasslessIdealEos
from bdnk_lab.shock import (
    ProfileOptions,
    hugoniot_continuation,
    profile_solve,
    profile_validate,
    sonic_base_state,
)

ALPHAS = (0.08, 0.04, 0.02)
DEFAULT_COEFFS = DissipationCoeffs(eta=0.03, kappa=0.03, lam=0.3, mu=0.3, nu=0.3)


@pytest.fixture(scope="session")
def massless():
    return MasslessIdealEos()


@pytest.fixture(scope="session")
def barotropic():
    return BarotropicRadiationEos()


@pytest.fixture(params=["massless", "barotropic"])
def eos(request):
    return request.getfixturevalue(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def coeffs():
    return DEFAULT_COEFFS


class ShockRun:
    """One amplitude of the sequence: shock, both profiles and the validation report."""

    def __init__(self, eos, sonic, alpha, coeffs, opts):
        t0 = time.perf_counter()
        self.alpha = alpha
        self.shock = hugoniot_continuation(sonic, eos, alpha)
        self.shifted = profile_solve(self.shock, eos, coeffs, opts)
        self.landau = profile_solve(self.shock, eos, coeffs, opts, landau=True)
        self.report = profile_validate(self.shifted, self.shock, eos, coeffs, self.landau, opts)
        self.seconds = time.perf_counter() - t0


class ShockSequence:
    def __init__(self, eos, coeffs=DEFAULT_COEFFS, alphas=ALPHAS):
        t0 = time.perf_counter()
        self.eos = eos
        self.coeffs = coeffs
        self.opts = ProfileOptions()
        self.sonic = sonic_base_state(eos)
        self.runs = [ShockRun(eos, self.sonic, a, coeffs, self.opts) for a in alphas]
        self.seconds = time.perf_counter() - t0


@pytest.fixture(scope="session")
def massless_sequence(massless):
    return ShockSequence(massless)


@pytest.fixture(scope="session")
def barotropic_sequence(barotropic):
    return ShockSequence(barotropic)
