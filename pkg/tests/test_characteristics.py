import numpy as np
import pytest

from bdnk_lab.characteristics import (
    HyperbolicityError,
    acoustic_extremality_check,
    causal_region,
    causality_point,
    causality_scan,
    characteristic_roots,
    euler_characteristics,
    flux_symbol,
    profile_spectrum,
    symbols,
    unit_directions,
)
from bdnk_lab.dissipation import DissipationCoeffs
from bdnk_lab.fluid import random_state, rest_state
from bdnk_lab.shock import XI, sonic_base_state
from bdnk_lab.tensor_core import SingularPencilError

C = DissipationCoeffs(eta=0.03, kappa=0.03, lam=0.3, mu=0.3, nu=0.3)


def _rest(eos, theta=1.0):
    return rest_state(theta, None if eos.barotropic else 0.0)


def test_radiation_sound_speed(eos, rng):
    for _ in range(5):
        ch = euler_characteristics(random_state(rng, eos), eos)
        assert ch.sound_speed == pytest.approx(1 / np.sqrt(3), abs=1e-10)


def test_rest_frame_speeds_symmetric(eos):
    sp = euler_characteristics(_rest(eos), eos).speeds
    assert np.allclose(sp, -sp[::-1], atol=1e-12)
    assert np.allclose(sp[1:-1], 0.0, atol=1e-12)


def test_contact_speed_is_fluid_velocity(massless):
    v = (0.35, 0.2, -0.1)
    ch = euler_characteristics(rest_state(1.0, 0.0, v), massless, (1.0, 0.0, 0.0))
    # contact speeds sit between the acoustic ones and equal u^1/u^0
    assert np.min(np.abs(ch.speeds[1:-1] - 0.35)) < 1e-10


def test_complex_speeds_raise(massless, monkeypatch):
    import bdnk_lab.characteristics as ch

    fake = ch.gen_eig(np.array([[0.0, -1.0], [1.0, 0.0]]), np.eye(2))
    monkeypatch.setattr(ch, "gen_eig", lambda *a, **k: fake)
    with pytest.raises(HyperbolicityError):
        euler_characteristics(_rest(massless), massless)


def test_symbols_symmetric(eos, rng):
    for _ in range(20):
        st = random_state(rng, eos, max_speed=0.6)
        pair = symbols(st, eos, C, rng.normal(size=4))
        assert pair.symmetry_defect() < 1e-10


def test_acoustic_extremality(eos):
    sonic = sonic_base_state(eos)
    ok, _w = acoustic_extremality_check(sonic.state, eos, XI)
    assert ok
    assert acoustic_extremality_check(sonic.state, eos, -XI)[0]
    with pytest.raises(ValueError):
        acoustic_extremality_check(_rest(eos), eos, XI)


def test_flux_symbol_odd_in_xi(massless, rng):
    st = random_state(rng, massless)
    xi = rng.normal(size=4)
    assert np.array_equal(flux_symbol(st, massless, -xi), -flux_symbol(st, massless, xi))


def test_profile_spectrum_at_sonic_state(eos):
    sonic = sonic_base_state(eos)
    sp = profile_spectrum(sonic.state, eos, C, XI)
    assert sp.zero_simple and sp.all_real
    assert abs(sp.values[sp.zero_index]) < 1e-8 * np.max(np.abs(sp.values))


def test_profile_spectrum_zero_survives_scaling(massless):
    sonic = sonic_base_state(massless)
    scaled = DissipationCoeffs(**{k: 3.0 * v for k, v in C.as_dict().items() if k != "eps"})
    sp = profile_spectrum(sonic.state, massless, scaled, XI)
    assert sp.zero_simple


def test_profile_spectrum_real_near_sonic(massless, rng):
    sonic = sonic_base_state(massless)
    for _ in range(10):
        c = DissipationCoeffs(0.03, 0.0, 0.03, *rng.uniform(0.1, 0.9, size=3))
        state = sonic.state + 1e-3 * rng.normal(size=5)
        assert profile_spectrum(state, massless, c, XI).all_real


def test_profile_spectrum_singular_symbol(massless):
    with pytest.raises(SingularPencilError, match="perturb"):
        profile_spectrum(_rest(massless), massless, DissipationCoeffs(eta=0.1), XI)


def test_pure_landau_is_degenerate(eos):
    _, degenerate, _ = characteristic_roots(_rest(eos), eos, DissipationCoeffs(eta=0.1, kappa=0.1), (1, 0, 0))
    assert degenerate
    assert not causality_point(_rest(eos), eos, DissipationCoeffs(eta=0.1, kappa=0.1), (1, 0, 0)).causal


def test_default_triple_is_causal(eos):
    for i, n in enumerate(unit_directions(3)):
        p = causality_point(_rest(eos), eos, C, n, i)
        assert p.causal, p
        assert p.roots.size == 2 * eos.nfields


def test_rest_frame_isotropy(massless, rng):
    speeds = [causality_point(_rest(massless), massless, C, d).max_abs_speed for d in unit_directions(6, rng)]
    assert np.ptp(speeds) < 1e-8


def test_roots_continuous_in_coefficients(massless):
    def max_jump(h):
        grid = np.arange(0.3, 0.3 + 4 * h + 1e-12, h)
        s = [causality_point(_rest(massless), massless, C.with_shift(g, 0.3, 0.3), (1, 0, 0)).max_abs_speed
             for g in grid]
        return np.max(np.abs(np.diff(s)))

    coarse, fine = max_jump(0.02), max_jump(0.01)
    assert fine < 0.6 * coarse


def test_scan_shape_and_region(massless):
    grid = [(a, b, 0.3) for a in (0.1, 0.3) for b in (0.1, 0.3)]
    dirs = unit_directions(2)
    pts = causality_scan(_rest(massless), massless, C, grid, dirs)
    assert len(pts) == len(grid) * len(dirs)
    assert [p.direction_id for p in pts[:2]] == [0, 1]
    region = causal_region(pts)
    assert set(region) <= set(grid)


def test_unit_directions():
    d = unit_directions(5, np.random.default_rng(0))
    assert np.allclose(d[:3], np.eye(3))
    assert np.allclose(np.linalg.norm(d, axis=1), 1.0)
