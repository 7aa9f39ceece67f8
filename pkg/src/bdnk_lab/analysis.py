"""Gradient families and pointwise verification studies.

A gradient is an array ``G[c, delta] = d psi_c / d x^delta`` at a single
state.  The special families are

* Eulerian: the perfect-fluid divergences ``T^{a beta c} G_{c beta}`` vanish;
* local thermodynamic equilibrium (LTE): rows ``0..3`` antisymmetric, row 4 zero.

Studies return plain tables and :class:`ClaimResult` records so that the
command line front end can serialise them unchanged.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .characteristics import flux_symbol
from .dissipation import (
    DissipationCoeffs,
    apply,
    contraction_production,
    delta_B,
    divergence,
    excess_production,
    explicit_shift,
    landau_tensor,
    shift_matrix,
    shifted_tensor,
)
from .fluid import consistency_defects, flux_jacobian, fluxes, random_state
from .tensor_core import fd_jacobian

log = logging.getLogger(__name__)

#: sampling box used by the suites; absolute tolerances assume moderate magnitudes
SAMPLE_BOX = {"theta_range": (0.5, 1.5), "psi_range": (-1.0, 1.0), "max_speed": 0.6}


@dataclass(frozen=True)
class GradientField:
    """A gradient at ``state`` with the recipe that produced it and its constraint defect."""

    state: np.ndarray
    G: np.ndarray
    kind: str
    defect: float
    rank: int | None = None

    @property
    def kernel_dimension(self):
        return None if self.rank is None else self.G.size - self.rank


@dataclass(frozen=True)
class ClaimResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        return {"name": self.name, "value": self.value, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


def claim(name, value, tolerance, passed=None, **detail):
    value = float(value)
    ok = bool(value < tolerance) if passed is None else bool(passed)
    return ClaimResult(name, value, float(tolerance), ok, detail)


# ---------------------------------------------------------------- families


def divergence_map(state, eos):
    """Matrix ``M[a, (c, delta)] = T^{a delta c}`` so that ``M @ G.ravel() = div T``."""
    J = flux_jacobian(state, eos)
    return np.transpose(J, (0, 2, 1)).reshape(J.shape[0], -1)


def make_lte_gradient(state, Omega, nfields=5, tol=1e-12):
    """LTE gradient with ``G[0:4] = Omega`` and ``G[4] = 0``.

    ``Omega`` must be antisymmetric; a defect above ``tol`` (relative to its
    largest entry) raises ``ValueError``.
    """
    Omega = np.asarray(Omega, dtype=float)
    if Omega.shape != (4, 4):
        raise ValueError(f"Omega must be 4x4, got {Omega.shape}")
    scale = max(1.0, float(np.max(np.abs(Omega))))
    defect = float(np.max(np.abs(Omega + Omega.T)))
    if defect > tol * scale:
        raise ValueError(f"Omega is not antisymmetric (defect {defect:.3e})")
    G = np.zeros((nfields, 4))
    G[:4] = Omega
    return GradientField(np.asarray(state, dtype=float), G, "lte", defect)


def random_antisymmetric(rng, scale=1.0):
    X = rng.uniform(-scale, scale, size=(4, 4))
    return np.triu(X, 1) - np.triu(X, 1).T


def make_eulerian_gradient(state, eos, G0):
    """Orthogonal projection of ``G0`` onto the kernel of the divergence map.

    Rank deficiency of the map is logged and recorded in ``rank``; the
    least-squares projection is still returned.
    """
    M = divergence_map(state, eos)
    G0 = np.asarray(G0, dtype=float)
    g = G0.ravel()
    # orthonormal row-space basis from the SVD; normal equations would square the conditioning
    _U, sv, Vt = linalg.svd(M, full_matrices=False)
    rank = int(np.sum(sv > sv[0] * max(M.shape) * np.finfo(float).eps))
    if rank < M.shape[0]:
        log.warning("divergence map has rank %d < %d at %s", rank, M.shape[0], state)
    R = Vt[:rank]
    for _ in range(2):  # second pass removes the rounding left by the first
        g = g - R.T @ (R @ g)
    G = g.reshape(G0.shape)
    defect = float(np.max(np.abs(M @ g)))
    return GradientField(np.asarray(state, dtype=float), G, "eulerian", defect, rank)


def mixed_gradient(euler: GradientField, G_pert, eps):
    """``G_euler + eps G_pert``."""
    G = euler.G + eps * np.asarray(G_pert, dtype=float)
    return GradientField(euler.state, G, "mixed", float("nan"))


# ---------------------------------------------------------------- identities


def shift_response(state, eos, coeffs, G):
    """``(Delta psi)^a = S^{a beta c} G_{c beta}`` with ``S = C T``, contracted in one step."""
    S = np.einsum("ab,bdc->adc", shift_matrix(state, coeffs), flux_jacobian(state, eos))
    return np.einsum("adc,cd->a", S, np.asarray(G, dtype=float))


def verify_equivalence_identity(state, eos, coeffs, G):
    """``|S . G - C . div T(G)|`` computed along two contraction orders (exact identity)."""
    direct = shift_response(state, eos, coeffs, G)
    staged = shift_matrix(state, coeffs) @ divergence(flux_jacobian(state, eos), G)
    return float(np.linalg.norm(direct - staged))


def symbol_symmetry_check(state, eos, coeffs, xi):
    """``max |xi_b xi_d (B~^{a b c d} - B~^{c b a d})|`` from the full tensor."""
    B = shifted_tensor(state, eos, coeffs).B
    xi = np.asarray(xi, dtype=float)
    S = np.einsum("abcd,b,d->ac", B, xi, xi)
    return float(np.max(np.abs(S - S.T)))


def explicit_shift_discrepancy(state, eos, coeffs, G):
    """Explicit shift tensors against ``-(dB . G)``.

    Returns ``(explicit, contracted)`` stacked as ``(nfields, 4)`` arrays.
    """
    ex = explicit_shift(state, eos, coeffs, G).stacked()
    return ex, -apply(delta_B(state, eos, coeffs), G)


def best_sign(explicit, contracted):
    """Global constant ``c`` minimising ``|explicit - c contracted|`` and the relative error."""
    X, Y = np.ravel(explicit), np.ravel(contracted)
    c = float(X @ Y / (Y @ Y)) if Y @ Y > 0 else 1.0
    return c, float(np.linalg.norm(X - c * Y) / max(np.linalg.norm(X), 1e-300))


# ---------------------------------------------------------------- scaling


@dataclass
class ScalingTable:
    eps: np.ndarray
    Q_tilde: np.ndarray
    dpsi_norm: np.ndarray
    slope_running: np.ndarray
    slope: float | None  # least squares slope of log Q~ vs log eps
    dpsi_slope: float | None
    dropped: list

    def rows(self):
        return np.column_stack([self.eps, self.Q_tilde, self.dpsi_norm, self.slope_running])

    header = ("eps", "Q_tilde", "dpsi_norm", "slope_running")


def _fit_slope(x, y):
    x, y = np.asarray(x), np.asarray(y)
    good = (x > 0) & (y > 0)
    if good.sum() < 2:
        return None
    return float(np.polyfit(np.log(x[good]), np.log(y[good]), 1)[0])


def scaling_study(state, eos, coeffs, G, eps_list, mode="coefficients", G_pert=None, floor=1e-24):
    """Excess entropy production ``Q~`` and ``|Delta psi|`` along ``eps_list``.

    ``mode``:

    ``"coefficients"``
        ``(lam, mu, nu) -> eps (lam, mu, nu)`` at fixed ``G``.
    ``"mixed"``
        fixed coefficients, ``G + eps G_pert`` (``G`` should be Eulerian).
    ``"gradient"``
        fixed coefficients, ``eps G``.

    Points with ``Q~ < 1e-300`` are dropped with a warning.  No slope is
    reported when every ``Q~`` is below ``floor`` (Eulerian input).
    """
    eps_list = np.asarray(sorted(eps_list, reverse=True), dtype=float)
    if eps_list.size < 4:
        raise ValueError("need at least four eps values")
    G = np.asarray(G, dtype=float)
    Qs, norms, kept, dropped = [], [], [], []
    for eps in eps_list:
        if mode == "coefficients":
            c, g = coeffs.scale_shift(eps), G
        elif mode == "mixed":
            c, g = coeffs, G + eps * np.asarray(G_pert, dtype=float)
        elif mode == "gradient":
            c, g = coeffs, eps * G
        else:
            raise ValueError(f"unknown mode {mode!r}")
        Q = excess_production(state, eos, c, g)
        if Q < 1e-300:
            warnings.warn(f"Q~ underflow at eps={eps:g}; point dropped", RuntimeWarning, stacklevel=2)
            dropped.append(float(eps))
            continue
        kept.append(eps)
        Qs.append(Q)
        norms.append(np.linalg.norm(shift_matrix(state, c) @ divergence(flux_jacobian(state, eos), g)))
    eps_arr, Q_arr, n_arr = np.array(kept), np.array(Qs), np.array(norms)
    running = np.full(eps_arr.size, np.nan)
    with np.errstate(divide="ignore", invalid="ignore"):
        running[1:] = np.diff(np.log(np.abs(Q_arr))) / np.diff(np.log(eps_arr))
    vanishing = bool(np.all(Q_arr < floor))
    slope = None if vanishing else _fit_slope(eps_arr, Q_arr)
    if vanishing:
        running[:] = np.nan
    return ScalingTable(eps_arr, Q_arr, n_arr, running, slope, _fit_slope(eps_arr, n_arr), dropped)


# ---------------------------------------------------------------- suites


def random_coeffs(rng, landau=True):
    """Transport coefficients in ``(0, 1]``; Landau coefficients zero unless ``landau``."""
    lam, mu, nu = 1.0 - rng.uniform(0.0, 1.0, size=3)
    base = 1.0 - rng.uniform(0.0, 1.0, size=3) if landau else np.zeros(3)
    return DissipationCoeffs(*base, lam, mu, nu)


def _states(rng, eos, n):
    return [random_state(rng, eos, **SAMPLE_BOX) for _ in range(n)]


def eos_suite(eos, rng, n=1000, tol_thermo=1e-12, tol_sym=1e-10, tol_fd=1e-6):
    """Thermodynamic consistency, Jacobian symmetry and analytic-vs-FD Jacobians."""
    states = _states(rng, eos, n)
    defects = consistency_defects(eos, states)
    sym = fd = 0.0
    for st in states:
        J = flux_jacobian(st, eos)
        sym = max(sym, float(np.max(np.abs(J - np.transpose(J, (2, 1, 0))))))
    for st in states[: min(n, 200)]:
        J = flux_jacobian(st, eos)
        Jfd = fd_jacobian(lambda z: fluxes(z, eos), st, 1e-6)
        fd = max(fd, float(np.max(np.abs(Jfd - J)) / np.max(np.abs(J))))
    out = [
        claim("n = p_psi / theta (relative)", defects["n"], tol_thermo) if not eos.barotropic else None,
        claim("rho + p = theta p_theta (relative)", defects["rho_plus_p"], tol_thermo),
        claim("pressure derivatives match finite differences (relative)", defects["fd_derivative"], tol_fd),
        claim("flux Jacobian symmetry defect", sym, tol_sym),
        claim("analytic vs finite-difference flux Jacobian (relative)", fd, tol_fd),
    ]
    return [c for c in out if c is not None]


def lte_suite(eos, rng, n=100, tol=1e-11):
    """Equilibria are annihilated by ``B_L`` and ``B~`` and are Eulerian."""
    worst = {"shifted": 0.0, "landau": 0.0, "divergence": 0.0, "projection": 0.0}
    for st in _states(rng, eos, n):
        c = random_coeffs(rng)
        lte = make_lte_gradient(st, random_antisymmetric(rng), eos.nfields)
        worst["shifted"] = max(worst["shifted"], np.linalg.norm(apply(shifted_tensor(st, eos, c), lte.G)))
        worst["landau"] = max(worst["landau"], np.linalg.norm(apply(landau_tensor(st, eos, c), lte.G)))
        worst["divergence"] = max(worst["divergence"], np.linalg.norm(divergence(flux_jacobian(st, eos), lte.G)))
        proj = make_eulerian_gradient(st, eos, lte.G)
        worst["projection"] = max(worst["projection"], float(np.max(np.abs(proj.G - lte.G))))
    return [
        claim("|B~ . G_LTE|", worst["shifted"], tol),
        claim("|B_L . G_LTE|", worst["landau"], tol),
        claim("|div T(G_LTE)| (equilibria are Eulerian)", worst["divergence"], tol),
        claim("LTE gradients unchanged by Eulerian projection", worst["projection"], tol),
    ]


def eulerian_suite(eos, rng, n=100, tol_q=1e-20, tol_db=1e-11, tol_constraint=1e-12):
    """``Q~`` and ``dB . G`` vanish on projected Eulerian gradients of unit norm."""
    q_max = db_max = con = 0.0
    kdims = set()
    for st in _states(rng, eos, n):
        c = random_coeffs(rng)
        eul = make_eulerian_gradient(st, eos, rng.normal(size=(eos.nfields, 4)))
        G = eul.G / np.linalg.norm(eul.G)  # both claims are homogeneous in G; fix the scale
        q_max = max(q_max, abs(excess_production(st, eos, c, G)))
        db_max = max(db_max, np.linalg.norm(apply(delta_B(st, eos, c), G)))
        con = max(con, eul.defect)
        kdims.add(eul.kernel_dimension)
    expected = eos.nfields * 4 - eos.nfields
    return [
        claim("Q~ on Eulerian gradients", q_max, tol_q),
        claim("|dB . G| on Eulerian gradients", db_max, tol_db),
        claim("Eulerian constraint defect", con, tol_constraint),
        claim("divergence-map kernel dimension", float(max(kdims)), 0.0, passed=kdims == {expected},
              expected=expected, observed=sorted(kdims)),
    ]


def slope_suite(eos, rng, eps_list=(1e-1, 1e-2, 1e-3, 1e-4), tol=0.05, tol_dpsi=0.02):
    """Log-log slopes: ``Q~`` cubic in the shift coefficients, quadratic in the gradient
    perturbation, ``|Delta psi|`` linear on mixed gradients."""
    st = random_state(rng, eos, **SAMPLE_BOX)
    c = random_coeffs(rng)
    G = rng.normal(size=(eos.nfields, 4))
    eul = make_eulerian_gradient(st, eos, rng.normal(size=(eos.nfields, 4)))
    coeff = scaling_study(st, eos, c, G, eps_list, "coefficients")
    mixed = scaling_study(st, eos, c, eul.G, eps_list, "mixed", G_pert=G)
    euler = scaling_study(st, eos, c, eul.G, eps_list, "gradient")
    return [
        claim("slope of Q~ with (lam, mu, nu) ~ eps", abs(coeff.slope - 3.0), tol, slope=coeff.slope),
        claim("slope of Q~ on mixed gradients", abs(mixed.slope - 2.0), tol, slope=mixed.slope),
        claim("slope of |Delta psi| on mixed gradients", abs(mixed.dpsi_slope - 1.0), tol_dpsi,
              slope=mixed.dpsi_slope),
        claim("Q~ on the Eulerian family", float(np.max(np.abs(euler.Q_tilde))), 1e-24),
    ], {"coefficients": coeff, "mixed": mixed, "eulerian": euler}


def identity_suite(eos, rng, n=1000, tol=1e-10):
    worst = 0.0
    for st in _states(rng, eos, n):
        G = rng.normal(size=(eos.nfields, 4))
        worst = max(worst, verify_equivalence_identity(st, eos, random_coeffs(rng), G))
    return [claim("|S . G - C . div T(G)|", worst, tol)]


def explicit_shift_suite(eos, rng, n=1000, tol=1e-9):
    """Explicit ``(Theta, Q, Psi)`` tensors against ``-(dB . G)`` up to one global constant."""
    X, Y = [], []
    for st in _states(rng, eos, n):
        ex, con = explicit_shift_discrepancy(st, eos, random_coeffs(rng), rng.normal(size=(eos.nfields, 4)))
        X.append(ex.ravel())
        Y.append(con.ravel())
    c, _ = best_sign(np.concatenate(X), np.concatenate(Y))
    sign = float(np.sign(c)) if c != 0 else 1.0
    rel = max(float(np.linalg.norm(x - sign * y) / max(np.linalg.norm(x), 1e-300)) for x, y in zip(X, Y))
    return [claim("explicit shift tensors vs -(dB . G), relative", rel, tol, sign=sign, fitted_constant=c)]


def symmetry_suite(eos, rng, n=100, tol=1e-10):
    worst_a = worst_b = 0.0
    for st in _states(rng, eos, n):
        xi = rng.normal(size=4)
        worst_a = max(worst_a, float(np.max(np.abs((A := flux_symbol(st, eos, xi)) - A.T))))
        worst_b = max(worst_b, symbol_symmetry_check(st, eos, random_coeffs(rng), xi))
    return [claim("A(xi) symmetry defect", worst_a, tol), claim("B~(xi) symmetry defect", worst_b, tol)]


def production_comparison(state, eos, coeffs, G):
    """Closed-form ``Q~`` next to the contraction ``-G . dB . G`` of the shift part."""
    return excess_production(state, eos, coeffs, G), contraction_production(delta_B(state, eos, coeffs), G)
