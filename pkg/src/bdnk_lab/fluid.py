"""Equations of state, Godunov-variable states and perfect-fluid fluxes.

A state is a plain float array ``psi`` of length 5 (or 4 for barotropic
fluids) holding the Godunov variables with *lowered* Greek index::

    psi[0:4] = U_alpha / theta,      psi[4] = g / theta

Fluxes are stacked as ``T[a, beta]`` with ``T[4, :] = N^beta``.  All fluxes
derive from the generating potential ``X^beta = p psi^beta``::

    T^{a beta}   = dX^beta / dpsi_a
    T^{a beta c} = d^2 X^beta / dpsi_a dpsi_c
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import METRIC, METRIC_INV, TensorInputError, lower


class StateDomainError(ValueError):
    """The state is not timelike or lies outside the equation-of-state domain."""


@dataclass(frozen=True)
class EosPoint:
    """Pressure and its first and second partial derivatives in ``(theta, psi)``."""

    theta: float
    psi: float
    p: float
    p_t: float
    p_s: float = 0.0
    p_tt: float = 0.0
    p_ts: float = 0.0
    p_ss: float = 0.0

    @property
    def enthalpy_density(self):
        """``rho + p = theta p_theta``."""
        return self.theta * self.p_t

    @property
    def rho(self):
        return self.theta * self.p_t - self.p

    @property
    def n(self):
        return self.p_s / self.theta

    @property
    def h(self):
        """Enthalpy per particle ``(rho + p) / n``."""
        return self.enthalpy_density / self.n

    @property
    def rho_t(self):
        return self.theta * self.p_tt

    @property
    def rho_s(self):
        return self.theta * self.p_ts - self.p_s

    @property
    def n_t(self):
        return self.p_ts / self.theta - self.p_s / self.theta**2

    @property
    def n_s(self):
        return self.p_ss / self.theta


class Eos:
    """Base class for equations of state ``p(theta, psi)``.

    Subclasses implement :meth:`derivatives`.  :meth:`energy_density` and
    :meth:`number_density` default to the thermodynamic identities and may be
    overridden by closed forms, which :func:`consistency_defects` then checks.
    """

    barotropic = False
    name = "eos"

    def __init__(self, theta_bounds=(1e-3, 1e3), psi_bounds=(-10.0, 10.0)):
        self.theta_bounds = tuple(float(b) for b in theta_bounds)
        self.psi_bounds = tuple(float(b) for b in psi_bounds)

    @property
    def nfields(self):
        return 4 if self.barotropic else 5

    def check_domain(self, theta, psi=0.0):
        lo, hi = self.theta_bounds
        if not lo <= theta <= hi:
            raise StateDomainError(f"theta = {theta!r} outside [{lo}, {hi}]")
        if not self.barotropic:
            lo, hi = self.psi_bounds
            if not lo <= psi <= hi:
                raise StateDomainError(f"psi = {psi!r} outside [{lo}, {hi}]")

    def derivatives(self, theta, psi=0.0) -> EosPoint:
        raise NotImplementedError

    def pressure(self, theta, psi=0.0):
        return self.derivatives(theta, psi).p

    def energy_density(self, theta, psi=0.0):
        return self.derivatives(theta, psi).rho

    def number_density(self, theta, psi=0.0):
        return self.derivatives(theta, psi).n

    def params(self):
        return {}


class MasslessIdealEos(Eos):
    """Massless ideal gas ``p = p0 theta^4 exp(psi)``."""

    name = "massless_ideal"

    def __init__(self, p0=1.0, **bounds):
        if p0 <= 0:
            raise ValueError("p0 must be positive")
        super().__init__(**bounds)
        self.p0 = float(p0)

    def derivatives(self, theta, psi=0.0):
        p = self.p0 * theta**4 * np.exp(psi)
        return EosPoint(
            theta=theta,
            psi=psi,
            p=p,
            p_t=4.0 * p / theta,
            p_s=p,
            p_tt=12.0 * p / theta**2,
            p_ts=4.0 * p / theta,
            p_ss=p,
        )

    def energy_density(self, theta, psi=0.0):
        return 3.0 * self.pressure(theta, psi)

    def number_density(self, theta, psi=0.0):
        return self.pressure(theta, psi) / theta

    def params(self):
        return {"p0": self.p0}


class BarotropicRadiationEos(Eos):
    """Barotropic radiation fluid ``p = a theta^4``; four Godunov fields."""

    barotropic = True
    name = "barotropic_radiation"

    def __init__(self, a=1.0, **bounds):
        if a <= 0:
            raise ValueError("a must be positive")
        super().__init__(**bounds)
        self.a = float(a)

    def derivatives(self, theta, psi=0.0):
        p = self.a * theta**4
        return EosPoint(theta=theta, psi=0.0, p=p, p_t=4.0 * p / theta, p_tt=12.0 * p / theta**2)

    def energy_density(self, theta, psi=0.0):
        return 3.0 * self.pressure(theta)

    def params(self):
        return {"a": self.a}


EOS_REGISTRY = {
    MasslessIdealEos.name: MasslessIdealEos,
    BarotropicRadiationEos.name: BarotropicRadiationEos,
}


def make_eos(name, **params):
    try:
        cls = EOS_REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown eos {name!r}; choose from {sorted(EOS_REGISTRY)}") from None
    return cls(**params)


# ---------------------------------------------------------------- states


def encode(theta, U, psi=None):
    """Godunov state from temperature, contravariant velocity and ``psi``."""
    if theta <= 0:
        raise StateDomainError("theta must be positive")
    head = lower(U) / theta
    if psi is None:
        return head
    return np.append(head, float(psi))


def decode(state):
    """Return ``(theta, U^alpha, psi)``; ``psi`` is ``None`` for barotropic states."""
    state = np.asarray(state, dtype=float)
    if state.shape not in ((4,), (5,)):
        raise TensorInputError(f"state must have 4 or 5 entries, got shape {state.shape}")
    up = METRIC_INV @ state[:4]
    norm = float(state[:4] @ up)
    if not norm < 0.0:
        raise StateDomainError(f"psi_alpha not timelike: psi_a psi^a = {norm!r}")
    theta = (-norm) ** -0.5
    U = theta * up
    if U[0] <= 0:
        raise StateDomainError("psi^alpha must be future directed")
    psi = float(state[4]) if state.shape == (5,) else None
    return theta, U, psi


def rest_state(theta, psi=None, velocity=(0.0, 0.0, 0.0)):
    """State with the given temperature, ``psi`` and 3-velocity."""
    v = np.asarray(velocity, dtype=float)
    gamma = 1.0 / np.sqrt(1.0 - v @ v)
    return encode(theta, gamma * np.concatenate(([1.0], v)), psi)


def random_state(rng, eos, theta_range=(0.5, 2.0), psi_range=(-1.0, 1.0), max_speed=0.8):
    """Random admissible state, velocity uniform in direction with |v| <= max_speed."""
    theta = rng.uniform(*theta_range)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    v = rng.uniform(0.0, max_speed) * direction
    psi = None if eos.barotropic else rng.uniform(*psi_range)
    return rest_state(theta, psi, v)


def eos_point(state, eos):
    theta, U, psi = decode(state)
    psi = 0.0 if psi is None else psi
    eos.check_domain(theta, psi)
    return eos.derivatives(theta, psi), U


# ---------------------------------------------------------------- fluxes


def perfect_fluid_tensors(state, eos):
    """``(T^{alpha beta}, N^beta)``; ``N`` is ``None`` for barotropic fluids."""
    pt, U = eos_point(state, eos)
    T = pt.enthalpy_density * np.outer(U, U) + pt.p * METRIC_INV
    N = None if eos.barotropic else pt.n * U
    return T, N


def fluxes(state, eos):
    """Stacked fluxes ``T[a, beta]`` of shape ``(nfields, 4)``."""
    T, N = perfect_fluid_tensors(state, eos)
    if N is None:
        return T
    return np.vstack([T, N])


def generating_potential(state, eos):
    """``X^beta = p psi^beta``."""
    pt, U = eos_point(state, eos)
    return pt.p * U / pt.theta


def flux_jacobian(state, eos):
    """Analytic ``T^{a beta c} = dT^{a beta}/dpsi_c``, shape ``(nf, 4, nf)``.

    Uses ``dtheta/dpsi_c = theta^2 U^c`` and ``dU^a/dpsi_c = theta Pi^{ac}``.
    """
    pt, U = eos_point(state, eos)
    theta = pt.theta
    Pi = METRIC_INV + np.outer(U, U)
    w = pt.enthalpy_density
    nf = eos.nfields
    J = np.zeros((nf, 4, nf))

    UUU = np.einsum("a,b,c->abc", U, U, U)
    sym = (
        np.einsum("ac,b->abc", Pi, U)
        + np.einsum("bc,a->abc", Pi, U)
        + np.einsum("ab,c->abc", Pi, U)
    )
    J[:4, :, :4] = ((pt.p_t + theta * pt.p_tt) * theta**2 - w * theta) * UUU + w * theta * sym
    if nf == 5:
        mixed = theta * pt.p_ts * np.outer(U, U) + pt.p_s * METRIC_INV
        J[:4, :, 4] = mixed
        J[4, :, :4] = mixed
        J[4, :, 4] = pt.p_ss * U / theta
    return J


def sound_speed_squared(state, eos):
    """Analytic ``dp/drho`` at fixed entropy per particle (closed-form oracle)."""
    pt, _ = eos_point(state, eos)
    if eos.barotropic:
        return pt.p_t / pt.rho_t
    # adiabat d(s/n) = 0 with entropy density s = p_theta - psi n (dp = s dtheta + n dg)
    psi = pt.psi
    n = pt.n
    s = pt.p_t - psi * n
    s_t = pt.p_tt - psi * pt.n_t
    s_s = pt.p_ts - n - psi * pt.n_s
    sig_t = (s_t * n - s * pt.n_t) / n**2
    sig_s = (s_s * n - s * pt.n_s) / n**2
    dpsi = -sig_t / sig_s
    dp = pt.p_t + pt.p_s * dpsi
    drho = pt.rho_t + pt.rho_s * dpsi
    return dp / drho


def consistency_defects(eos, states):
    """Max relative defects of ``n = p_psi/theta`` and ``rho + p = theta p_theta``.

    Also compares the analytic first derivatives against central differences
    of :meth:`Eos.pressure`, so an evaluator with wrong derivatives is caught.
    """
    dn = drho = dderiv = 0.0
    for s in states:
        theta, _, psi = decode(s)
        psi = 0.0 if psi is None else psi
        pt = eos.derivatives(theta, psi)
        rho = eos.energy_density(theta, psi)
        drho = max(drho, abs(rho + pt.p - theta * pt.p_t) / abs(rho + pt.p))
        h = 1e-6 * theta
        fd_t = (eos.pressure(theta + h, psi) - eos.pressure(theta - h, psi)) / (2 * h)
        dderiv = max(dderiv, abs(fd_t - pt.p_t) / abs(pt.p_t))
        if not eos.barotropic:
            n = eos.number_density(theta, psi)
            dn = max(dn, abs(n - pt.p_s / theta) / abs(n))
            fd_s = (eos.pressure(theta, psi + 1e-6) - eos.pressure(theta, psi - 1e-6)) / 2e-6
            dderiv = max(dderiv, abs(fd_s - pt.p_s) / abs(pt.p_s))
    return {"n": dn, "rho_plus_p": drho, "fd_derivative": dderiv}


__all__ = [
    "METRIC",
    "BarotropicRadiationEos",
    "Eos",
    "EosPoint",
    "MasslessIdealEos",
    "StateDomainError",
    "consistency_defects",
    "decode",
    "encode",
    "flux_jacobian",
    "fluxes",
    "generating_potential",
    "make_eos",
    "perfect_fluid_tensors",
    "random_state",
    "rest_state",
    "sound_speed_squared",
]
