"""End-to-end acceptance checks, one test per claim, at the contractual tolerances.

Each test also enforces its runtime budget so a regression in speed is a failure.
"""

from __future__ import annotations

import itertools
import time

import numpy as np
import pytest

from bdnk_lab.analysis import (
    eos_suite,
    eulerian_suite,
    explicit_shift_suite,
    identity_suite,
    lte_suite,
    slope_suite,
    symmetry_suite,
)
from bdnk_lab.characteristics import causality_point, profile_spectrum, unit_directions
from bdnk_lab.cli import main
from bdnk_lab.fluid import rest_state


def _assert_claims(claims):
    failed = [(c.name, c.value, c.tolerance, c.detail) for c in claims if not c.passed]
    assert not failed, failed


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


def test_thermodynamic_consistency_and_godunov_structure(massless, rng):
    with Timer() as t:
        claims = eos_suite(massless, rng, n=1000, tol_thermo=1e-12, tol_sym=1e-10, tol_fd=1e-6)
    _assert_claims(claims)
    assert t.seconds < 5.0


def test_equilibria_are_annihilated(massless, rng):
    with Timer() as t:
        claims = lte_suite(massless, rng, n=100, tol=1e-11)
    _assert_claims(claims)
    assert t.seconds < 5.0


def test_excess_production_vanishes_on_eulerian_and_is_cubic(massless, rng):
    with Timer() as t:
        claims = eulerian_suite(massless, rng, n=100, tol_q=1e-20)
        slopes, tables = slope_suite(massless, rng, eps_list=(1e-1, 1e-2, 1e-3, 1e-4), tol=0.05)
    _assert_claims(claims + slopes)
    assert abs(tables["coefficients"].slope - 3.0) < 0.05
    assert t.seconds < 10.0


def test_gradient_shift_identity_and_linear_shift(massless, rng):
    with Timer() as t:
        claims = identity_suite(massless, rng, n=1000, tol=1e-10)
        _slopes, tables = slope_suite(massless, rng, tol_dpsi=0.02)
    _assert_claims(claims)
    assert abs(tables["mixed"].dpsi_slope - 1.0) < 0.02
    assert t.seconds < 5.0


def test_explicit_shift_tensors_match_contraction(massless, rng):
    with Timer() as t:
        (res,) = explicit_shift_suite(massless, rng, n=1000, tol=1e-9)
    assert res.passed, res
    assert res.detail["sign"] in (1.0, -1.0)
    assert t.seconds < 5.0


def test_contracted_symbols_are_symmetric(massless, rng):
    with Timer() as t:
        claims = symmetry_suite(massless, rng, n=100, tol=1e-10)
    _assert_claims(claims)
    assert t.seconds < 5.0


def _profile_checks(seq, require_landau_trend):
    for run in seq.runs:
        assert run.shock.rh_residual < 1e-10
        assert run.shock.lax
        prof = run.shifted
        assert max(prof.start_residual, prof.end_residual) < 1e-6, run.alpha
        assert prof.max_ode_residual < 1e-8, run.alpha
        # the trajectory leaves psi- and arrives at psi+
        assert run.report.oriented, run.alpha
        assert np.linalg.norm(prof.psi[0] - run.shock.minus) < np.linalg.norm(prof.psi[0] - run.shock.plus)
        assert run.report.passed, (run.alpha, run.report.failures)
    if require_landau_trend:
        d = [run.report.hausdorff for run in seq.runs]
        assert all(b < a for a, b in itertools.pairwise(d)), d


def test_shock_profiles_small_amplitude(massless_sequence, massless):
    seq = massless_sequence
    c = seq.coeffs
    # the triple passes the causality scan at the base state of the shock
    base = rest_state(1.0, 0.0)
    for i, n in enumerate(unit_directions(3)):
        assert causality_point(base, massless, c, n, i).causal
    _profile_checks(seq, require_landau_trend=True)
    spectrum = profile_spectrum(seq.sonic.state, massless, c, seq.runs[0].shock.xi)
    assert spectrum.zero_simple and spectrum.all_real, spectrum.values
    assert seq.seconds < 120.0


def test_barotropic_counterpart(barotropic, barotropic_sequence, rng):
    with Timer() as t:
        claims = lte_suite(barotropic, rng, n=100, tol=1e-11)
        claims += eulerian_suite(barotropic, rng, n=100, tol_q=1e-20)
        slopes, _ = slope_suite(barotropic, rng, tol=0.05)
    _assert_claims(claims + slopes)
    _profile_checks(barotropic_sequence, require_landau_trend=False)
    assert t.seconds + barotropic_sequence.seconds < 60.0


@pytest.mark.parametrize("command", ["verify", "causality-scan", "profile"])
def test_identical_config_and_seed_give_identical_csv(tmp_path, command):
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        assert main([command, "--out", str(out), "--seed", "7", "--quiet"]) == 0
    csvs = sorted(p.name for p in outs[0].glob("*.csv"))
    assert csvs
    for name in csvs:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name
