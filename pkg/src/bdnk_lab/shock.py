"""Standing shocks: sonic base states, Rankine-Hugoniot pairs and dissipation profiles.

All computations use the standing-shock frame with normal ``xi = e^1``.
A profile ``psi(s)`` solves the travelling-wave reduction of
``d_beta (T^{a beta} + B~^{a beta c delta} d_delta psi_c) = 0``::

    B~^{a1c1}(psi) psi_c' = q^a - T^{a1}(psi)

which is the profile equation ``Bp psi' = T - q`` written with
``Bp = -B~^{a1c1}`` (dissipation sign fixed by non-negative Landau entropy
production, see :mod:`bdnk_lab.dissipation`).
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, optimize
from scipy.spatial.distance import directed_hausdorff

from .characteristics import euler_characteristics
from .dissipation import entropy_production, landau_symbol, shifted_symbol
from .fluid import StateDomainError, flux_jacobian, fluxes, rest_state
from .tensor_core import DET_FLOOR, fd_jacobian, scaled_det

log = logging.getLogger(__name__)

XI = np.array([0.0, 1.0, 0.0, 0.0])


class ShockError(RuntimeError):
    """Base class for shock construction failures."""


class BracketingError(ShockError):
    pass


class ContinuationError(ShockError):
    pass


class NoConnectionError(ShockError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class SingularSymbolError(ShockError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


def normal_flux(state, eos, xi=XI):
    """``xi_beta T^{a beta}``."""
    return fluxes(state, eos) @ xi


def normal_jacobian(state, eos, xi=XI):
    """``xi_beta T^{a beta c}``, the contracted symbol ``A(xi)``."""
    return np.einsum("abc,b->ac", flux_jacobian(state, eos), xi)


def acoustic_speed(state, eos, family=-1):
    """Lab-frame speed of the acoustic family along ``e^1`` (``-1`` slow, ``+1`` fast)."""
    speeds = euler_characteristics(state, eos).speeds
    return float(speeds[0] if family < 0 else speeds[-1])


# ---------------------------------------------------------------- sonic state


@dataclass(frozen=True)
class SonicState:
    state: np.ndarray
    r: np.ndarray  # unit kernel vector of A
    velocity: float
    kernel_residual: float
    family: int


def sonic_base_state(eos, theta=1.0, psi=0.0, family=-1, xtol=1e-15):
    """Boost ``(theta, psi)`` along ``e^1`` until the acoustic speed of ``family`` vanishes."""
    psi = None if eos.barotropic else psi
    sign = 1.0 if family < 0 else -1.0

    def speed(v):
        return acoustic_speed(rest_state(theta, psi, (sign * v, 0.0, 0.0)), eos, family)

    lo, hi = 0.0, 0.999
    f_lo, f_hi = speed(lo), speed(hi)
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketingError(f"acoustic speed does not change sign on v in [{lo}, {hi}]: {f_lo}, {f_hi}")
    v = optimize.brentq(speed, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    state = rest_state(theta, psi, (sign * v, 0.0, 0.0))
    A = normal_jacobian(state, eos)
    w, vecs = linalg.eigh(A)
    k = int(np.argmin(np.abs(w)))
    r = vecs[:, k]
    # orient r so that the acoustic speed increases along +r
    dspeed = acoustic_speed(state + 1e-6 * r, eos, family) - acoustic_speed(state - 1e-6 * r, eos, family)
    if dspeed < 0:
        r = -r
    return SonicState(state, r, sign * v, float(np.linalg.norm(A @ r)), family)


def kernel_dimension(A, tol=1e-8):
    s = linalg.svdvals(A)
    return int(np.sum(s <= tol * s[0]))


# ---------------------------------------------------------------- Hugoniot


@dataclass
class ShockData:
    minus: np.ndarray
    plus: np.ndarray
    q: np.ndarray
    amplitude: float
    family: int
    base: np.ndarray
    xi: np.ndarray = field(default_factory=lambda: XI.copy())
    rh_residual: float = 0.0
    speed_minus: float = 0.0
    speed_plus: float = 0.0
    lax: bool = True

    @property
    def nfields(self):
        return self.minus.size

    def reflected(self):
        """The same shock described with normal ``-xi``: end states swap, ``q`` flips."""
        return ShockData(self.plus.copy(), self.minus.copy(), -self.q, self.amplitude, self.family,
                         self.base.copy(), -self.xi, self.rh_residual, -self.speed_plus,
                         -self.speed_minus, self.lax)


def _pair(base, r, W, scale, alpha, unknowns):
    c, w = unknowns[0], unknowns[1:]
    m = base + scale * c * r
    d = alpha * scale * (r + W @ w)
    return m + 0.5 * d, m - 0.5 * d, m, d


def _solve_pair(eos, base, r, W, scale, alpha, guess, tol=1e-11, maxiter=30):
    x = guess.copy()
    for _ in range(maxiter):
        p1, p2, _, _ = _pair(base, r, W, scale, alpha, x)
        F = (normal_flux(p1, eos) - normal_flux(p2, eos)) / (alpha * scale)
        A1, A2 = normal_jacobian(p1, eos), normal_jacobian(p2, eos)
        J = np.empty((r.size, r.size))
        J[:, 0] = (A1 - A2) @ r / alpha
        J[:, 1:] = 0.5 * (A1 + A2) @ W
        dx = linalg.solve(J, -F)
        x = x + dx
        if np.max(np.abs(dx)) < tol:
            return x
    raise ContinuationError(f"Newton did not converge at alpha = {alpha}")


def hugoniot_continuation(sonic: SonicState, eos, alpha, max_alpha=0.2, step=0.01, retries=5) -> ShockData:
    """Shock pair of amplitude ``alpha`` about the sonic state.

    The end states are ``m +- d/2`` with midpoint ``m = psi* + c |psi*| r``
    and jump ``d = alpha |psi*| (r + w)``, ``w`` orthogonal to ``r``; i.e.
    ``alpha`` is the jump's projection on the unit acoustic direction,
    relative to ``|psi*|``.  ``(c, w)`` are found by Newton continuation in
    ``alpha`` on ``(T^{a1}(psi_1) - T^{a1}(psi_2)) / alpha = 0``.
    """
    base, r = sonic.state, sonic.r
    if alpha < 0:
        raise ValueError("amplitude must be non-negative")
    if alpha > max_alpha:
        raise ValueError(f"amplitude {alpha} exceeds the cap {max_alpha}")
    q_star = normal_flux(base, eos)
    if alpha == 0:
        return ShockData(base.copy(), base.copy(), q_star, 0.0, sonic.family, base.copy())
    n = r.size
    W = linalg.null_space(r[None, :])
    scale = float(np.linalg.norm(base))
    x = np.zeros(n)
    done, h, failures = 0.0, min(step, alpha), 0
    while done < alpha:
        a = min(alpha, done + h)
        try:
            x_new = _solve_pair(eos, base, r, W, scale, a, x)
        except (ContinuationError, StateDomainError, linalg.LinAlgError):
            failures += 1
            if failures > retries:
                raise ContinuationError(
                    f"continuation failed near alpha = {a} after {retries} step halvings"
                ) from None
            h *= 0.5
            continue
        x, done = x_new, a
    p1, p2, _, _ = _pair(base, r, W, scale, alpha, x)
    s1, s2 = acoustic_speed(p1, eos, sonic.family), acoustic_speed(p2, eos, sonic.family)
    # Lax orientation: the family speed is positive upstream (psi-) and negative downstream.
    if s1 < s2:
        p1, p2, s1, s2 = p2, p1, s2, s1
    f1, f2 = normal_flux(p1, eos), normal_flux(p2, eos)
    q = 0.5 * (f1 + f2)
    rh = float(max(np.max(np.abs(f1 - q)), np.max(np.abs(f2 - q))))
    lax = s1 > 0 > s2
    if not lax:
        warnings.warn(f"shock at alpha={alpha} is not a Lax shock: speeds {s1}, {s2}", stacklevel=2)
    return ShockData(p1, p2, q, float(alpha), sonic.family, base.copy(), rh_residual=rh,
                     speed_minus=s1, speed_plus=s2, lax=lax)


# ---------------------------------------------------------------- profiles


@dataclass(frozen=True)
class ProfileOptions:
    """Shooting and integration settings.

    ``delta0`` is the initial offset from the rest point relative to
    ``alpha |psi*|``; ``trust_factor`` likewise scales the trust-ball radius.
    """

    delta0: float = 1e-4
    tol_end: float = 1e-6
    rtol: float = 1e-11
    atol: float = 1e-13
    trust_factor: float = 10.0
    s_max: float = 1e6
    method: str = "Radau"
    jac_step: float = 1e-7
    fd_step: float = 1e-2  # residual-check difference step, relative to the local step size


@dataclass
class ProfileSolution:
    s: np.ndarray
    psi: np.ndarray  # (len(s), nfields)
    residual_norm: np.ndarray
    start_residual: float  # |psi(s_first) - psi-|
    end_residual: float  # |psi(s_last) - psi+|
    max_ode_residual: float
    direction: str  # "forward", "backward" or "constant"
    theory: str  # "shifted" or "landau"
    diagnostics: dict = field(default_factory=dict)
    orbit: object = None  # dense interpolant s -> psi

    def acoustic_coordinate(self, shock: ShockData):
        """Projection of ``psi(s) - m`` on the unit jump direction, ``m`` the jump midpoint."""
        jump = _unit(shock.plus - shock.minus)
        return (self.psi - 0.5 * (shock.minus + shock.plus)) @ jump

    def sample(self, n=4000):
        """``n`` points of the dense orbit, uniform in ``s``."""
        if self.orbit is None:
            return np.repeat(self.psi[:1], n, axis=0)
        return self.orbit(np.linspace(self.s[0], self.s[-1], n)).T

    def rows(self):
        """CSV rows ``s, psi_0.., residual_norm``."""
        return np.column_stack([self.s, self.psi, self.residual_norm])

    def header(self):
        return ["s"] + [f"psi_{i}" for i in range(self.psi.shape[1])] + ["residual_norm"]


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _slot_projector(nf):
    P4 = np.eye(nf)
    if nf == 5:
        P4[4, 4] = 0.0
    return P4


def profile_symbol(state, eos, coeffs, xi=XI):
    """``xi_beta xi_delta B~^{a beta c delta}``; the profile equation reads ``B psi' = q - xi.T``."""
    return shifted_symbol(state, eos, coeffs, xi)


def _shifted_rhs(eos, coeffs, q, xi):
    def rhs(_, y):
        return linalg.solve(profile_symbol(y, eos, coeffs, xi), q - normal_flux(y, eos, xi))

    return rhs


def _landau_rhs(eos, coeffs, q, xi, sign=1.0):
    """Index-1 reduction of the singular Landau profile equation.

    ``B_L`` has kernel ``k = (psi_0..psi_3, 0)``, so ``B_L psi' = F`` fixes
    ``psi'`` only modulo ``k`` and needs ``g = k . F = 0``.  The bordered
    system ``(B_L + c k grad_g^T / |k|^2) psi' = F`` adds
    ``grad_g . psi' = g / c``: on ``g = 0`` that is the hidden constraint,
    and with ``c`` of sign ``-sign`` the surface ``g = 0`` attracts in the
    integration direction.
    """
    P4 = _slot_projector(q.size)

    def rhs(_, y):
        B = landau_symbol(y, eos, coeffs, xi)
        A = normal_jacobian(y, eos, xi)
        F = q - normal_flux(y, eos, xi)
        k = P4 @ y
        grad_g = P4 @ F - A.T @ k
        c = -sign * np.linalg.norm(B, 2) / np.linalg.norm(A, 2)
        return linalg.solve(B + c * np.outer(k, grad_g) / (k @ k), F)

    return rhs


def _project_constraint(y, eos, q, xi, tol=1e-15, maxiter=20):
    """Newton-move ``y`` along ``k`` onto the Landau constraint ``k . (q - xi.T) = 0``."""
    P4 = _slot_projector(q.size)
    for _ in range(maxiter):
        k = P4 @ y
        F = q - normal_flux(y, eos, xi)
        slope = (P4 @ F - normal_jacobian(y, eos, xi).T @ k) @ k
        step = -float(k @ F) / slope
        y = y + step * k
        if abs(step) < tol:
            break
    return y


def linearization(state, eos, coeffs, xi=XI, landau=False):
    """Eigenpairs of the profile equation linearised at a rest point, sorted by modulus.

    Shifted theory: ``-B^{-1} A``.  Landau theory: finite eigenvalues of the
    pencil ``(-A, B_L)``; the infinite one carried by ``ker B_L`` is dropped.
    """
    A = normal_jacobian(state, eos, xi)
    if landau:
        B = landau_symbol(state, eos, coeffs, xi)
        alpha, beta = linalg.eig(-A, B, right=False, homogeneous_eigvals=True)
        w, v = linalg.eig(-A, B)
        drop = int(np.argmin(np.abs(beta) / np.maximum(np.abs(alpha), 1e-300)))
        keep = np.arange(w.size) != drop
        w, v = w[keep], v[:, keep]
    else:
        w, v = linalg.eig(-A, profile_symbol(state, eos, coeffs, xi))
    order = np.argsort(np.abs(w))
    return w[order], v[:, order]


@dataclass(frozen=True)
class RestPointSpectra:
    """Slow (centre) and fast rates of the linearised profile equation at both end states."""

    slow_minus: float
    slow_plus: float
    fast_minus: np.ndarray
    fast_plus: np.ndarray
    v_minus: np.ndarray
    v_plus: np.ndarray

    @property
    def oriented(self):
        """``psi-`` repels and ``psi+`` attracts along the slow direction."""
        return self.slow_minus > 0 > self.slow_plus

    @property
    def direction(self):
        if not self.oriented:
            return None
        if np.all(self.fast_minus < 0):
            return "forward"
        if np.all(self.fast_plus > 0):
            return "backward"
        return "mixed"

    def as_dict(self):
        return {
            "slow_minus": self.slow_minus,
            "slow_plus": self.slow_plus,
            "fast_minus": self.fast_minus.tolist(),
            "fast_plus": self.fast_plus.tolist(),
        }


def rest_point_spectra(shock: ShockData, eos, coeffs, landau=False) -> RestPointSpectra:
    """Split each end-state spectrum into the slow mode and the fast modes.

    The slow mode is the eigenvector best aligned with the jump; at small
    amplitude it is the continuation of the acoustic kernel of ``A``.
    """
    jump = _unit(shock.plus - shock.minus)
    parts = []
    for state in (shock.minus, shock.plus):
        w, v = linearization(state, eos, coeffs, shock.xi, landau)
        if np.max(np.abs(w.imag)) > 1e-8 * np.max(np.abs(w)):
            raise NoConnectionError(f"complex rest-point spectrum {w}", state)
        V = np.real(v)
        k = int(np.argmax(np.abs(jump @ V) / np.linalg.norm(V, axis=0)))
        parts.append((float(w[k].real), np.delete(w.real, k), _unit(V[:, k])))
    (sm, fm, vm), (sp, fp, vp) = parts
    return RestPointSpectra(sm, sp, fm, fp, vm, vp)


def _check_symbol(state, eos, coeffs, xi, det_floor=DET_FLOOR):
    if scaled_det(profile_symbol(state, eos, coeffs, xi)) < det_floor:
        raise SingularSymbolError(
            f"the profile symbol is singular at {state} for (lam, mu, nu) = {coeffs.shift}; "
            "perturb the coefficient triple",
            state,
        )


class _Orbit:
    """Dense orbit ``s -> psi``: the IVP interpolant plus the linear tail at the departure end.

    Beyond ``edge`` (on the departure side) ``psi = rest + exp(rate (s - edge)) offset``.
    """

    def __init__(self, sol, sign, s0, rest, offset, rate, edge):
        self._sol, self._sign, self._s0 = sol, sign, s0
        self._rest, self._offset, self._rate, self._edge = rest, offset, rate, edge

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s)
        out = np.empty((self._rest.size, flat.size))
        tail = (flat < self._edge) if self._sign > 0 else (flat > self._edge)
        if not tail.all():
            out[:, ~tail] = self._sol.sol(self._sign * (flat[~tail] + self._s0))
        decay = np.exp(self._rate * (flat[tail] - self._edge))
        out[:, tail] = self._rest[:, None] + np.outer(self._offset, decay)
        return out[:, 0] if s.ndim == 0 else out


def _tail(rest, offset, rate, edge, sign, tol, n=24):
    """Samples of the linearised departure ``rest + exp(rate (s - edge)) offset`` down to ``tol``."""
    ratio = np.linalg.norm(offset) / tol
    if ratio <= 1.0:
        return np.empty(0), np.empty((0, rest.size))
    span = np.log(ratio) / abs(rate)
    ds = np.linspace(span, 0.0, n + 1)[:-1]
    s = edge - ds if sign > 0 else (edge + ds)[::-1]
    return s, rest + np.outer(np.exp(rate * (s - edge)), offset)


def profile_solve(shock: ShockData, eos, coeffs, opts: ProfileOptions | None = None, landau=False):
    """Heteroclinic dissipation profile from ``shock.minus`` to ``shock.plus``.

    Shoots along the slow eigendirection from the end state where it is the
    only direction leaving (in integration time): forward from ``psi-`` when
    all fast modes there are stable, backward from ``psi+`` when all fast
    modes there are unstable.  ``landau=True`` solves the Landau-Lifshitz
    profile, whose symbol is singular, through an index-1 reduction.

    ``s`` is shifted so that ``s = 0`` is where the orbit crosses the jump
    midpoint in the acoustic coordinate.

    Raises
    ------
    NoConnectionError
        Trust-ball exit, wrong slow-mode signs (not a Lax/entropy
        orientation), a fast dichotomy that admits no shooting direction, or
        failure to reach the far end state.
    SingularSymbolError
        The symbol is singular at the sonic state or along the trajectory.
    """
    opts = opts or ProfileOptions()
    theory = "landau" if landau else "shifted"
    xi = np.asarray(shock.xi, dtype=float)
    if shock.amplitude == 0.0:
        return ProfileSolution(np.zeros(1), shock.base[None, :].copy(), np.zeros(1), 0.0, 0.0, 0.0,
                               "constant", theory)
    if not landau:
        _check_symbol(shock.base, eos, coeffs, xi)
    spectra = rest_point_spectra(shock, eos, coeffs, landau)
    direction = spectra.direction
    if direction is None:
        raise NoConnectionError(
            f"slow rates have the wrong signs (Lax/entropy violation?): {spectra.as_dict()}", shock.minus
        )
    if direction == "mixed":
        raise NoConnectionError(
            f"fast modes split at both end states, no shooting direction; perturb the coefficients: "
            f"{spectra.as_dict()}",
            shock.minus,
        )

    jump = shock.plus - shock.minus
    scale = float(np.linalg.norm(shock.base))
    if direction == "forward":
        start, target, v, sign = shock.minus, shock.plus, spectra.v_minus, 1.0
    else:
        start, target, v, sign = shock.plus, shock.minus, spectra.v_plus, -1.0
    if sign * (v @ jump) < 0:
        v = -v
    if landau:
        rhs = _landau_rhs(eos, coeffs, shock.q, xi, sign)
    else:
        rhs = _shifted_rhs(eos, coeffs, shock.q, xi)
    y0 = start + opts.delta0 * shock.amplitude * scale * v
    if landau:
        y0 = _project_constraint(y0, eos, shock.q, xi)
    mid = 0.5 * (shock.minus + shock.plus)
    radius = opts.trust_factor * shock.amplitude * scale

    def arrived(_, y):
        return np.linalg.norm(y - target) - 0.5 * opts.tol_end

    def escaped(_, y):
        return radius - np.linalg.norm(y - mid)

    arrived.terminal = escaped.terminal = True

    def fun(t, y):
        return sign * rhs(t, y)

    def jac(t, y):
        # central differences: scipy's adaptive one-sided Jacobian stalls Radau on this system
        return fd_jacobian(lambda z: fun(t, z), y, opts.jac_step)

    extra = {"jac": jac} if opts.method in ("Radau", "BDF", "LSODA") else {}
    try:
        sol = integrate.solve_ivp(fun, (0.0, opts.s_max), y0, method=opts.method, rtol=opts.rtol,
                                  atol=opts.atol, events=(arrived, escaped), dense_output=True, **extra)
    except (linalg.LinAlgError, StateDomainError) as exc:
        raise SingularSymbolError(f"profile equation broke down along the trajectory: {exc}") from None
    if sol.t_events[1].size:
        raise NoConnectionError("trajectory left the trust ball: no connection found", sol.y_events[1][0])
    if sol.status == -1:
        raise NoConnectionError(f"integration failed: {sol.message}", sol.y[:, -1])
    if not sol.t_events[0].size:
        raise NoConnectionError(f"far end state not reached by s = {opts.s_max}", sol.y[:, -1])

    t, Y = sol.t, sol.y.T
    if sign < 0:
        t, Y = t[::-1], Y[::-1]
    s = sign * t
    # close the departure gap with the linearised slow solution (accurate to O(delta0^2))
    rate = spectra.slow_minus if sign > 0 else spectra.slow_plus
    edge = s[0] if sign > 0 else s[-1]
    s_tail, Y_tail = _tail(start, y0 - start, rate, edge, sign, 0.5 * opts.tol_end)
    if sign > 0:
        s, Y = np.concatenate([s_tail, s]), np.vstack([Y_tail, Y])
    else:
        s, Y = np.concatenate([s, s_tail]), np.vstack([Y, Y_tail])
    coord = (Y - mid) @ _unit(jump)
    if np.all(np.diff(coord) > 0):
        s0 = float(np.interp(0.0, coord, s))
    else:
        s0 = float(s[np.argmin(np.abs(coord))])
    s = s - s0
    orbit = _Orbit(sol, sign, s0, start, y0 - start, rate, edge - s0)
    res = _ode_residuals(s, orbit, eos, coeffs, shock.q, xi, landau, opts.fd_step)
    diagnostics = dict(spectra.as_dict(), nfev=int(sol.nfev), njev=int(sol.njev), nsteps=int(sol.t.size),
                       tail_samples=int(s_tail.size))
    return ProfileSolution(
        s=s,
        psi=Y,
        residual_norm=res,
        start_residual=float(np.linalg.norm(Y[0] - shock.minus)),
        end_residual=float(np.linalg.norm(Y[-1] - shock.plus)),
        max_ode_residual=float(np.max(res)),
        direction=direction,
        theory=theory,
        diagnostics=diagnostics,
        orbit=orbit,
    )


def _ode_residuals(s, orbit, eos, coeffs, q, xi, landau, rel_step):
    """``|B psi' - (q - xi.T)|`` at each sample.

    ``psi'`` is a fourth-order difference of the dense interpolant, so it
    does not reuse the right-hand side the integrator evaluated.
    """
    res = np.zeros(s.size)
    gaps = np.diff(s)
    lo, hi = s[0], s[-1]
    for i, si in enumerate(s):
        h = rel_step * min(gaps[max(i - 1, 0)], gaps[min(i, gaps.size - 1)])
        if si - 2 * h < lo or si + 2 * h > hi:
            d = 1.0 if si - 2 * h < lo else -1.0
            p = orbit(si + d * h * np.arange(5))
            dpsi = d * (-25 * p[:, 0] + 48 * p[:, 1] - 36 * p[:, 2] + 16 * p[:, 3] - 3 * p[:, 4]) / (12 * h)
        else:
            p = orbit(si + h * np.array([-2.0, -1.0, 1.0, 2.0]))
            dpsi = (p[:, 0] - 8 * p[:, 1] + 8 * p[:, 2] - p[:, 3]) / (12 * h)
        y = orbit(si)
        B = landau_symbol(y, eos, coeffs, xi) if landau else profile_symbol(y, eos, coeffs, xi)
        res[i] = np.linalg.norm(B @ dpsi - (q - normal_flux(y, eos, xi)))
    return res


# ---------------------------------------------------------------- validation


def hausdorff_distance(a: ProfileSolution, b: ProfileSolution, n=4000):
    """Symmetric Hausdorff distance between two orbits sampled densely in ``s``."""
    A, B = a.sample(n), b.sample(n)
    return max(directed_hausdorff(A, B)[0], directed_hausdorff(B, A)[0])


@dataclass
class ProfileReport:
    oriented: bool
    monotone: bool
    start_residual: float
    end_residual: float
    flux_residual_start: float
    flux_residual_end: float
    max_ode_residual: float
    integrated_residual: float
    entropy_integral: float
    contraction_integral: float
    interior_rest_points: int
    hausdorff: float | None = None
    passed: bool = False
    failures: list = field(default_factory=list)

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def profile_validate(profile: ProfileSolution, shock: ShockData, eos, coeffs, landau_profile=None,
                     opts: ProfileOptions | None = None) -> ProfileReport:
    """Check a computed profile.

    Orientation (``psi-`` is the alpha-limit, ``psi+`` the omega-limit),
    endpoint and flux residuals, ODE residual, the integral of the entropy
    production ``Q`` along the orbit, and optionally the Hausdorff distance to
    a Landau profile of the same shock.  ``contraction_integral`` integrates
    ``-G . B~ . G`` instead and is reported for information only.
    """
    opts = opts or ProfileOptions()
    xi = np.asarray(shock.xi, dtype=float)
    Y, s = profile.psi, profile.s
    d_minus = np.linalg.norm(Y - shock.minus, axis=1)
    d_plus = np.linalg.norm(Y - shock.plus, axis=1)
    oriented = bool(d_minus[0] < d_plus[0] and d_plus[-1] < d_minus[-1]) or profile.direction == "constant"
    coord = profile.acoustic_coordinate(shock)
    monotone = bool(np.all(np.diff(coord) >= 0))
    # relative to |q|: flux magnitudes are O(p), so an absolute bound would depend on units
    flux = np.array([np.linalg.norm(normal_flux(y, eos, xi) - shock.q) for y in Y]) / np.linalg.norm(shock.q)
    Q = np.zeros(s.size)
    C = np.zeros(s.size)
    if profile.direction != "constant":
        for i, y in enumerate(Y):
            B = profile_symbol(y, eos, coeffs, xi) if profile.theory == "shifted" else None
            F = shock.q - normal_flux(y, eos, xi)
            if B is None:
                dpsi = _landau_rhs(eos, coeffs, shock.q, xi)(0.0, y)
            else:
                dpsi = linalg.solve(B, F)
            G = np.outer(dpsi, xi)
            Q[i] = entropy_production(y, eos, coeffs, G)[0]
            C[i] = -float(dpsi @ (B if B is not None else landau_symbol(y, eos, coeffs, xi)) @ dpsi)
    # a second rest point would show up as an interior local minimum of |q - xi.T|
    interior = 0
    if flux.size > 2:
        dips = (flux[1:-1] < flux[:-2]) & (flux[1:-1] < flux[2:]) & (flux[1:-1] < 10 * opts.tol_end)
        interior = int(np.sum(dips))
    rep = ProfileReport(
        oriented=oriented,
        monotone=monotone,
        start_residual=profile.start_residual,
        end_residual=profile.end_residual,
        flux_residual_start=float(flux[0]),
        flux_residual_end=float(flux[-1]),
        max_ode_residual=profile.max_ode_residual,
        integrated_residual=float(integrate.trapezoid(profile.residual_norm, s)) if s.size > 1 else 0.0,
        entropy_integral=float(integrate.trapezoid(Q, s)) if s.size > 1 else 0.0,
        contraction_integral=float(integrate.trapezoid(C, s)) if s.size > 1 else 0.0,
        interior_rest_points=interior,
    )
    if landau_profile is not None:
        rep.hausdorff = hausdorff_distance(profile, landau_profile)
    checks = {
        "orientation (psi- is the alpha-limit)": oriented,
        "both ends within tol_end": max(rep.start_residual, rep.end_residual) <= opts.tol_end,
        "relative flux residual at both ends < 10 tol_end": max(flux[0], flux[-1]) < 10 * opts.tol_end,
        "entropy production integral >= 0": rep.entropy_integral >= 0.0,
        "no interior rest point": interior == 0,
    }
    rep.failures = [k for k, ok in checks.items() if not ok]
    rep.passed = not rep.failures
    return rep


@dataclass
class TrendRow:
    alpha: float
    distance: float
    ratio: float  # distance / previous distance (nan for the first row)


def landau_trend(sonic: SonicState, eos, coeffs, alphas, opts=None, mapper=map):
    """Hausdorff distance between shifted and Landau profiles along ``alphas``.

    Returns ``(rows, decreasing)`` where ``decreasing`` says the distance
    strictly decreases along the sequence.
    """
    tasks = [(sonic, eos, coeffs, a, opts) for a in alphas]
    dists = list(mapper(_trend_task, tasks))
    rows, prev = [], None
    for a, d in zip(alphas, dists):
        rows.append(TrendRow(float(a), float(d), float("nan") if prev is None else d / prev))
        prev = d
    decreasing = all(r.ratio < 1.0 for r in rows[1:])
    return rows, decreasing


def _trend_task(task):
    sonic, eos, coeffs, alpha, opts = task
    shock = hugoniot_continuation(sonic, eos, alpha)
    shifted = profile_solve(shock, eos, coeffs, opts)
    landau = profile_solve(shock, eos, coeffs, opts, landau=True)
    return hausdorff_distance(shifted, landau)
