import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdnk_lab.analysis import (
    SAMPLE_BOX,
    make_eulerian_gradient,
    random_antisymmetric,
    random_coeffs,
)
from bdnk_lab.dissipation import (
    EXPLICIT_SIGN,
    DissipationCoeffs,
    apply,
    contraction_production,
    delta_B,
    delta_symbol,
    divergence,
    entropy_production,
    excess_production,
    explicit_shift,
    landau_production,
    landau_symbol,
    landau_tensor,
    shift_matrix,
    shift_quadratic_form,
    shifted_symbol,
    shifted_tensor,
)
from bdnk_lab.fluid import (
    MasslessIdealEos,
    decode,
    flux_jacobian,
    random_state,
    rest_state,
)
from bdnk_lab.tensor_core import METRIC, field_metric

unit = st.floats(0.0, 1.0)


def _sample(rng, eos):
    return random_state(rng, eos, **SAMPLE_BOX), random_coeffs(rng), rng.normal(size=(eos.nfields, 4))


def test_coeffs_helpers():
    c = DissipationCoeffs(eta=1, lam=0.2, mu=0.4, nu=0.6)
    assert c.shift == (0.2, 0.4, 0.6) and c.has_shift
    assert c.scale_shift(0.5).shift == (0.1, 0.2, 0.3)
    assert c.landau_only().shift == (0, 0, 0) and c.landau_only().eta == 1
    with pytest.raises(ValueError):
        DissipationCoeffs(eta=np.nan)


def test_zero_gradient(eos, rng):
    s, c, _ = _sample(rng, eos)
    G = np.zeros((eos.nfields, 4))
    assert not np.any(apply(shifted_tensor(s, eos, c), G))
    assert entropy_production(s, eos, c, G) == (0.0, 0.0)


def test_rigid_rotation_is_not_dissipated(massless):
    s = rest_state(1.3, 0.2)
    G = np.zeros((5, 4))
    G[1, 2], G[2, 1] = 0.7, -0.7
    c = DissipationCoeffs(eta=1.0, zeta=1.0, kappa=1.0)
    assert np.max(np.abs(apply(landau_tensor(s, massless, c), G))) < 1e-14


def test_landau_production_matches_contraction(eos, rng):
    worst = 0.0
    for _ in range(1000):
        s, c, G = _sample(rng, eos)
        closed = landau_production(s, eos, c, G)
        worst = max(worst, abs(contraction_production(landau_tensor(s, eos, c), G) - closed) / closed)
    assert worst < 1e-10


def test_shift_matrix_structure(massless):
    assert not np.any(shift_matrix(rest_state(1.0, 0.0), DissipationCoeffs()))
    C = shift_matrix(rest_state(1.0, 0.0), DissipationCoeffs(lam=0.2, mu=0.3, nu=0.5))
    assert np.allclose(C, np.diag([-0.3, 0.5, 0.5, 0.5, 0.2]), atol=1e-15)
    assert not np.any(C[4, :4]) and not np.any(C[:4, 4])


def test_lowered_shift_matrix_symmetric(eos, rng):
    s, c, _ = _sample(rng, eos)
    C = shift_matrix(s, c, lowered=True)
    assert np.max(np.abs(C - C.T)) < 1e-14
    assert np.allclose(C, field_metric(eos.nfields) @ shift_matrix(s, c))


def test_delta_vanishes_without_shift(eos, rng):
    s, c, _ = _sample(rng, eos)
    assert not np.any(delta_B(s, eos, c.landau_only()).B)
    assert np.array_equal(shifted_tensor(s, eos, c.landau_only()).B, landau_tensor(s, eos, c).B)


def test_delta_chain_rule(eos, rng):
    for _ in range(100):
        s, c, G = _sample(rng, eos)
        J = flux_jacobian(s, eos)
        dpsi = shift_matrix(s, c, lowered=True) @ divergence(J, G)
        ref = np.einsum("abf,f->ab", J, dpsi)
        assert np.max(np.abs(apply(delta_B(s, eos, c), G) - ref)) < 1e-10 * max(1.0, np.max(np.abs(ref)))


def test_symbols_symmetric_and_closed_forms(eos, rng):
    for _ in range(50):
        s, c, _ = _sample(rng, eos)
        xi = rng.normal(size=4)
        D = delta_B(s, eos, c).symbol(xi)
        L = landau_tensor(s, eos, c).symbol(xi)
        assert np.max(np.abs(D - D.T)) < 1e-10
        assert np.max(np.abs(L - L.T)) < 1e-10
        assert np.allclose(landau_symbol(s, eos, c, xi), L, rtol=1e-10, atol=1e-10)
        assert np.allclose(delta_symbol(s, eos, c, xi), D, rtol=1e-10, atol=1e-10)
        assert np.allclose(shifted_symbol(s, eos, c, xi), L + D, rtol=1e-10, atol=1e-10)


def test_apply_linear(eos, rng):
    s, c, G1 = _sample(rng, eos)
    G2 = rng.normal(size=G1.shape)
    B = shifted_tensor(s, eos, c)
    lhs = apply(B, 2.5 * G1 - 0.75 * G2)
    rhs = 2.5 * apply(B, G1) - 0.75 * apply(B, G2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(lhs)))


def test_stress_symmetric_for_all_constructions(eos, rng):
    for _ in range(100):
        s, c, G = _sample(rng, eos)
        for B in (landau_tensor(s, eos, c), delta_B(s, eos, c), shifted_tensor(s, eos, c)):
            dT = apply(B, G)[:4]
            assert np.max(np.abs(dT - dT.T)) < 1e-10
        dT = explicit_shift(s, eos, c, G).dT
        assert np.max(np.abs(dT - dT.T)) < 1e-10


def test_explicit_shift_matches_contraction(eos, rng):
    for _ in range(200):
        s, c, G = _sample(rng, eos)
        ex = explicit_shift(s, eos, c, G).stacked()
        ref = -apply(delta_B(s, eos, c), G)
        assert np.linalg.norm(ex - EXPLICIT_SIGN * ref) <= 1e-9 * np.linalg.norm(ex)


def test_explicit_shift_transverse_heat_vector(eos, rng):
    s, c, G = _sample(rng, eos)
    _, U, _ = decode(s)
    assert abs(explicit_shift(s, eos, c, G).Q @ U) < 1e-12


def test_explicit_shift_pure_temperature_change(massless):
    s = rest_state(1.2, 0.1)
    c = DissipationCoeffs(lam=0.4, mu=0.7, nu=0.9)
    # d_t theta only: d_t psi_0 = d_t(-1/theta) = theta_t / theta^2
    G = np.zeros((5, 4))
    G[0, 0] = 0.5 / 1.2**2
    ex = explicit_shift(s, massless, c, G)
    assert np.max(np.abs(ex.Q)) < 1e-15
    assert ex.Theta != 0.0
    div = divergence(flux_jacobian(s, massless), G)
    assert ex.Theta == pytest.approx(-0.7 * (METRIC @ [1.0, 0, 0, 0]) @ div[:4], rel=1e-14)


def test_eulerian_gradients_are_invisible_to_the_shift(eos, rng):
    for _ in range(50):
        s, c, G0 = _sample(rng, eos)
        eul = make_eulerian_gradient(s, eos, G0)
        G = eul.G / np.linalg.norm(eul.G)
        ex = explicit_shift(s, eos, c, G)
        assert max(abs(ex.Theta), abs(ex.Psi), np.max(np.abs(ex.Q))) < 1e-12
        assert np.max(np.abs(ex.stacked())) < 1e-12
        total, excess = entropy_production(s, eos, c, G)
        assert abs(excess) < 1e-20
        assert total == pytest.approx(landau_production(s, eos, c, G), abs=1e-12)


def test_equilibria_annihilated(eos, rng):
    for _ in range(50):
        s, c, _ = _sample(rng, eos)
        G = np.zeros((eos.nfields, 4))
        G[:4] = random_antisymmetric(rng)
        assert np.max(np.abs(apply(landau_tensor(s, eos, c), G))) < 1e-11
        assert np.max(np.abs(apply(delta_B(s, eos, c), G))) < 1e-11


@settings(max_examples=200, deadline=None)
@given(unit, unit, unit, unit, unit, unit, st.integers(0, 2**32 - 1))
def test_production_nonnegative(eta, zeta, kappa, lam, mu, nu, seed):
    rng = np.random.default_rng(seed)
    eos = MasslessIdealEos()
    s = random_state(rng, eos, **SAMPLE_BOX)
    G = rng.normal(size=(5, 4))
    total, excess = entropy_production(s, eos, DissipationCoeffs(eta, zeta, kappa, lam, mu, nu), G)
    assert excess >= 0.0
    assert total >= excess - 1e-12 * max(1.0, total)


def test_excess_production_is_cubic_in_shift(massless, rng):
    s, c, G = _sample(rng, massless)
    eps = np.array([1e-1, 1e-2, 1e-3, 1e-4])
    Q = [excess_production(s, massless, c.scale_shift(e), G) for e in eps]
    assert np.polyfit(np.log(eps), np.log(Q), 1)[0] == pytest.approx(3.0, abs=0.05)


def test_shift_contraction_is_linear_quadratic_form(eos, rng):
    # -G.dB.G equals -D.C.D with D the divergences; this is linear in the shift
    # coefficients, so it is not the cubic closed-form excess production
    s, c, G = _sample(rng, eos)
    D = divergence(flux_jacobian(s, eos), G)
    C = shift_matrix(s, c, lowered=True)
    assert shift_quadratic_form(s, eos, c, G) == pytest.approx(-D @ C @ D, rel=1e-10)
    ratio = shift_quadratic_form(s, eos, c.scale_shift(0.1), G) / shift_quadratic_form(s, eos, c, G)
    assert ratio == pytest.approx(0.1, rel=1e-12)


def test_eps_scales_whole_tensor(massless, rng):
    s, c, G = _sample(rng, massless)
    c2 = DissipationCoeffs(**{**c.as_dict(), "eps": 0.25})
    assert np.allclose(apply(shifted_tensor(s, massless, c2), G), 0.25 * apply(shifted_tensor(s, massless, c), G))
