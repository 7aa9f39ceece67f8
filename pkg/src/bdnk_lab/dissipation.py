"""Dissipation tensors: Landau-Lifshitz, the Eulerian gradient shift, entropy production.

Gradients are arrays ``G[c, delta] = d psi_c / d x^delta`` of shape
``(nfields, 4)``.  A dissipation tensor ``B[a, beta, c, delta]`` acts by
``Delta T^{a beta} = B^{a beta c delta} G_{c delta}`` (see :meth:`DissipationTensor.apply`).

With this sign the pointwise entropy production of a tensor is
``-G_{a beta} Delta T^{a beta}``, which is non-negative for the Landau tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .fluid import eos_point, flux_jacobian
from .tensor_core import METRIC, METRIC_INV, field_metric

#: sign relating the explicit (Theta, Q, Psi) tensors to the contraction ``delta_B . G``:
#: ``explicit = EXPLICIT_SIGN * (-(delta_B . G))``
EXPLICIT_SIGN = 1.0


@dataclass(frozen=True)
class DissipationCoeffs:
    """Transport coefficients, shift coefficients and the overall factor ``eps``."""

    eta: float = 0.0
    zeta: float = 0.0
    kappa: float = 0.0
    lam: float = 0.0
    mu: float = 0.0
    nu: float = 0.0
    eps: float = 1.0

    def __post_init__(self):
        values = (self.eta, self.zeta, self.kappa, self.lam, self.mu, self.nu, self.eps)
        if not all(np.isfinite(values)):
            raise ValueError(f"coefficients must be finite: {self}")

    @property
    def shift(self):
        return (self.lam, self.mu, self.nu)

    @property
    def has_shift(self):
        return any(c != 0.0 for c in self.shift)

    def with_shift(self, lam, mu, nu):
        return replace(self, lam=lam, mu=mu, nu=nu)

    def scale_shift(self, factor):
        """Scale ``(lam, mu, nu)`` by ``factor``; the Landau coefficients are kept."""
        return replace(self, lam=self.lam * factor, mu=self.mu * factor, nu=self.nu * factor)

    def landau_only(self):
        return self.with_shift(0.0, 0.0, 0.0)

    def as_dict(self):
        return {k: getattr(self, k) for k in ("eta", "zeta", "kappa", "lam", "mu", "nu", "eps")}


@dataclass(frozen=True)
class DissipationTensor:
    B: np.ndarray
    kind: str

    def apply(self, G):
        return apply(self, G)

    def symbol(self, xi):
        """Contracted symbol ``xi_beta xi_delta B^{a beta c delta}``."""
        xi = np.asarray(xi, dtype=float)
        return np.einsum("abcd,b,d->ac", self.B, xi, xi)

    def __add__(self, other):
        return DissipationTensor(self.B + other.B, f"{self.kind}+{other.kind}")


def apply(B, G):
    """Exact contraction ``B^{a beta c delta} G_{c delta}``."""
    return np.einsum("abcd,cd->ab", B.B, np.asarray(G, dtype=float))


def _local(state, eos):
    pt, U = eos_point(state, eos)
    Pi = METRIC_INV + np.outer(U, U)
    return pt, U, Pi


def landau_tensor(state, eos, coeffs) -> DissipationTensor:
    """Landau-Lifshitz coefficient field ``B_L``.

    ``Delta T_L = -eta sigma - zeta Pi div U`` with
    ``sigma^{ab} = Pi^{ag} Pi^{bd} (d_d U_g + d_g U_d) - 2/3 Pi^{ab} div U`` and
    ``Delta N_L = -(kappa / h^2) Pi grad psi``.  In Godunov variables
    ``d_delta U_gamma = theta Pi_gamma^alpha G_{alpha delta}``.
    """
    pt, _U, Pi = _local(state, eos)
    theta = pt.theta
    nf = eos.nfields
    B = np.zeros((nf, 4, nf, 4))
    shear = (
        np.einsum("ac,bd->abcd", Pi, Pi)
        + np.einsum("ad,bc->abcd", Pi, Pi)
        - (2.0 / 3.0) * np.einsum("ab,cd->abcd", Pi, Pi)
    )
    bulk = np.einsum("ab,cd->abcd", Pi, Pi)
    B[:4, :, :4, :] = -theta * (coeffs.eta * shear + coeffs.zeta * bulk)
    if nf == 5:
        B[4, :, 4, :] = -(coeffs.kappa / pt.h**2) * Pi
    return DissipationTensor(coeffs.eps * B, "landau")


def shift_matrix(state, coeffs, lowered=False):
    """Shift matrix ``C^a_b`` (mixed), or ``C_{ab}`` when ``lowered``.

    ``C^alpha_beta = mu/theta^2 U^alpha U_beta + nu/theta Pi^alpha_beta``,
    ``C^4_4 = lam`` and no mixing between the two blocks.
    """
    from .fluid import decode

    theta, U, psi = decode(state)
    nf = 4 if psi is None else 5
    U_low = METRIC @ U
    C = np.zeros((nf, nf))
    C[:4, :4] = coeffs.mu / theta**2 * np.outer(U, U_low) + coeffs.nu / theta * (
        np.eye(4) + np.outer(U, U_low)
    )
    if nf == 5:
        C[4, 4] = coeffs.lam
    if lowered:
        return field_metric(nf) @ C
    return C


def divergence(J, G):
    """Perfect-fluid divergences ``d_beta T^{a beta} = T^{a beta c} G_{c beta}``."""
    return np.einsum("abc,cb->a", J, np.asarray(G, dtype=float))


def delta_B(state, eos, coeffs) -> DissipationTensor:
    """Shift part ``dB^{a beta c delta} = T^{a beta f} C_{fg} T^{g delta c}``."""
    J = flux_jacobian(state, eos)
    C = shift_matrix(state, coeffs, lowered=True)
    B = np.einsum("abf,fg,gdc->abcd", J, C, J)
    return DissipationTensor(coeffs.eps * B, "delta")


def shifted_tensor(state, eos, coeffs) -> DissipationTensor:
    """``B~ = B_L + dB``."""
    total = landau_tensor(state, eos, coeffs) + delta_B(state, eos, coeffs)
    return DissipationTensor(total.B, f"shifted(lam={coeffs.lam:g}, mu={coeffs.mu:g}, nu={coeffs.nu:g})")


def landau_symbol(state, eos, coeffs, xi):
    """``xi_beta xi_delta B_L^{a beta c delta}`` assembled directly (no rank-4 tensor)."""
    pt, _U, Pi = _local(state, eos)
    xi = np.asarray(xi, dtype=float)
    v = Pi @ xi
    xx = float(xi @ v)
    nf = eos.nfields
    S = np.zeros((nf, nf))
    vv = np.outer(v, v)
    S[:4, :4] = -pt.theta * (coeffs.eta * (xx * Pi + vv / 3.0) + coeffs.zeta * vv)
    if nf == 5:
        S[4, 4] = -(coeffs.kappa / pt.h**2) * xx
    return coeffs.eps * S


def delta_symbol(state, eos, coeffs, xi):
    """``xi_beta xi_delta dB^{a beta c delta} = A(xi) C A(xi)`` with ``A(xi) = xi_beta T^{a beta c}``."""
    A = np.einsum("abc,b->ac", flux_jacobian(state, eos), np.asarray(xi, dtype=float))
    C = shift_matrix(state, coeffs, lowered=True)
    return coeffs.eps * (A @ C @ A)


def shifted_symbol(state, eos, coeffs, xi):
    return landau_symbol(state, eos, coeffs, xi) + delta_symbol(state, eos, coeffs, xi)


def shift_vector(state, eos, coeffs, G):
    """Gradient shift ``(Delta psi)^a = C^a_b d_beta T^{b beta}``."""
    return shift_matrix(state, coeffs) @ divergence(flux_jacobian(state, eos), G)


@dataclass(frozen=True)
class ExplicitShift:
    """Scalars, heat vector and tensors of the explicit shift construction."""

    Theta: float
    Psi: float
    Q: np.ndarray  # Q_gamma, lowered, transverse to U
    q: np.ndarray  # (rho + p) Q^gamma, the vector entering the tensors
    R: float
    P: float
    N: float
    dT: np.ndarray
    dN: np.ndarray | None

    def stacked(self):
        if self.dN is None:
            return self.dT
        return np.vstack([self.dT, self.dN])


def explicit_shift(state, eos, coeffs, G) -> ExplicitShift:
    """Shift tensors built from ``Theta``, ``Q_gamma`` and ``Psi``.

    ``Theta = -mu U_e D^e``, ``Q_g = nu Pi_ge D^e``, ``Psi = lam D^4`` with
    ``D`` the perfect-fluid divergences; then ``R = rho_t Theta + rho_s Psi``
    (likewise ``P``, ``N``) and::

        -dT = U U R + (q U + U q) + Pi P,     -dN = U N + q / h

    where ``q = (rho + p) Q^gamma``.
    """
    pt, U, Pi = _local(state, eos)
    D = divergence(flux_jacobian(state, eos), G)
    U_low = METRIC @ U
    Pi_low = METRIC @ Pi @ METRIC
    Theta = -coeffs.mu * float(U_low @ D[:4])
    Q = coeffs.nu * (Pi_low @ D[:4])
    Psi = coeffs.lam * float(D[4]) if eos.nfields == 5 else 0.0
    q = pt.enthalpy_density * (METRIC_INV @ Q)
    R = pt.rho_t * Theta + pt.rho_s * Psi
    P = pt.p_t * Theta + pt.p_s * Psi
    dT = -(np.outer(U, U) * R + np.outer(q, U) + np.outer(U, q) + Pi * P)
    if eos.nfields == 5:
        N = pt.n_t * Theta + pt.n_s * Psi
        dN = -(U * N + q / pt.h)
    else:
        N = 0.0
        dN = None
    scale = coeffs.eps * EXPLICIT_SIGN
    return ExplicitShift(Theta, Psi, Q, q, R, P, N, scale * dT, None if dN is None else scale * dN)


def landau_production(state, eos, coeffs, G):
    """``eta/(2 theta) |sigma|^2 + zeta/theta (div U)^2 + kappa/h^2 |grad psi|^2``."""
    pt, _U, Pi = _local(state, eos)
    theta = pt.theta
    G = np.asarray(G, dtype=float)
    # Pi^{a e} G_{e d} Pi^{d b}: projected velocity gradient over theta
    grad = theta * Pi @ G[:4] @ Pi
    div = np.trace(grad @ METRIC)
    sigma = grad + grad.T - (2.0 / 3.0) * Pi * div
    sig2 = np.einsum("ab,ac,bd,cd->", sigma, METRIC, METRIC, sigma)
    Q = coeffs.eta / (2.0 * theta) * sig2 + coeffs.zeta / theta * div**2
    if eos.nfields == 5:
        gpsi = G[4]
        Q += coeffs.kappa / pt.h**2 * float(gpsi @ Pi @ gpsi)
    return coeffs.eps * Q


def excess_production(state, eos, coeffs, G):
    """``mu theta^-2 Theta^2 + lam Psi^2 + nu / (theta (rho + p)) |q|^2``."""
    pt, _, _ = _local(state, eos)
    ex = explicit_shift(state, eos, coeffs, G)
    q_low = METRIC @ ex.q
    q2 = float(q_low @ ex.q)
    Q = coeffs.mu * ex.Theta**2 / pt.theta**2 + coeffs.lam * ex.Psi**2
    Q += coeffs.nu / (pt.theta * pt.enthalpy_density) * q2
    return coeffs.eps * Q


def entropy_production(state, eos, coeffs, G):
    """Return ``(Q_total, Q_excess)``; ``Q_total`` is the Landau part plus the excess."""
    excess = excess_production(state, eos, coeffs, G)
    return landau_production(state, eos, coeffs, G) + excess, excess


def contraction_production(tensor, G):
    """Entropy production ``-G_{a beta} (B . G)^{a beta}`` of a dissipation tensor."""
    G = np.asarray(G, dtype=float)
    return -float(np.sum(G * apply(tensor, G)))


def shift_quadratic_form(state, eos, coeffs, G):
    """``-G . dB . G = -D^f C_{fg} D^g``: contraction of the shift part with the gradient."""
    return contraction_production(delta_B(state, eos, coeffs), G)
