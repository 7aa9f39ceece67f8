"""Characteristic speeds, contracted symbols and causality scans."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .dissipation import shifted_tensor
from .fluid import decode, flux_jacobian, rest_state
from .tensor_core import DET_FLOOR, SingularPencilError, gen_eig, sym_eig

log = logging.getLogger(__name__)


class HyperbolicityError(ArithmeticError):
    """The Euler pencil has complex characteristic speeds."""


@dataclass(frozen=True)
class SymbolPair:
    A: np.ndarray
    B: np.ndarray

    def symmetry_defect(self):
        return max(np.max(np.abs(self.A - self.A.T)), np.max(np.abs(self.B - self.B.T)))


def flux_symbol(state, eos, xi):
    """``A^{ac}(xi) = xi_beta T^{a beta c}``."""
    return np.einsum("abc,b->ac", flux_jacobian(state, eos), np.asarray(xi, dtype=float))


def symbols(state, eos, coeffs, xi) -> SymbolPair:
    """``A = xi_beta T^{a beta c}`` and ``B = xi_beta xi_delta B~^{a beta c delta}``."""
    B = shifted_tensor(state, eos, coeffs).symbol(xi)
    return SymbolPair(flux_symbol(state, eos, xi), B)


@dataclass(frozen=True)
class EulerCharacteristics:
    speeds: np.ndarray  # ascending
    vectors: np.ndarray  # columns, normalised
    sound_speed: float  # rest-frame sound speed

    @property
    def acoustic_minus(self):
        return self.vectors[:, 0]

    @property
    def acoustic_plus(self):
        return self.vectors[:, -1]


def euler_characteristics(state, eos, direction=(1.0, 0.0, 0.0)) -> EulerCharacteristics:
    """Speeds along ``direction`` from the pencil ``A(n) v = s A(e_0) v``.

    ``sound_speed`` is the fast acoustic speed of the same pencil evaluated
    at the comoving (rest-frame) state.
    """
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    speeds, vecs = _euler_pencil(state, eos, n)
    theta, _, psi = decode(state)
    rest_speeds, _ = _euler_pencil(rest_state(theta, psi), eos, n)
    return EulerCharacteristics(speeds, vecs, float(rest_speeds[-1]))


def _euler_pencil(state, eos, n):
    J = flux_jacobian(state, eos)
    A_n = np.einsum("abc,b->ac", J, np.concatenate(([0.0], n)))
    res = gen_eig(A_n, J[:, 0, :])
    if res.has_complex:
        raise HyperbolicityError(f"complex characteristic speeds: {res.values}")
    vecs = res.vectors / np.linalg.norm(res.vectors, axis=0)
    return np.asarray(res.values, dtype=float), vecs


def acoustic_extremality_check(state, eos, xi, tol=1e-8):
    """Whether ``A(xi)`` is semidefinite with a one-dimensional kernel.

    Raises ``ValueError`` when the kernel is not one-dimensional.  Returns
    ``(ok, eigenvalues)``.
    """
    A = flux_symbol(state, eos, xi)
    w, _ = sym_eig(A)
    scale = np.max(np.abs(w))
    zero = np.abs(w) <= tol * scale
    if zero.sum() != 1:
        raise ValueError(f"A(xi) kernel dimension is {zero.sum()}, expected 1 (eigenvalues {w})")
    nz = w[~zero]
    ok = bool(np.all(nz > 0) or np.all(nz < 0))
    return ok, w


@dataclass(frozen=True)
class ProfileSpectrum:
    values: np.ndarray
    zero_index: int
    zero_simple: bool
    all_real: bool


def profile_spectrum(state, eos, coeffs, xi, det_floor=DET_FLOOR, zero_tol=1e-8) -> ProfileSpectrum:
    """Spectrum of ``B^{-1} A`` for the contracted symbols at ``xi``."""
    pair = symbols(state, eos, coeffs, xi)
    try:
        res = gen_eig(pair.A, pair.B, det_floor=det_floor)
    except SingularPencilError as exc:
        raise SingularPencilError(
            f"{exc}; the shift coefficients {coeffs.shift} are exceptional, perturb (lam, mu, nu)"
        ) from None
    w = res.values
    scale = np.linalg.norm(linalg.solve(pair.B, pair.A), 2)
    near = np.abs(w) <= zero_tol * scale
    idx = int(np.argmin(np.abs(w)))
    return ProfileSpectrum(np.asarray(w), idx, bool(near.sum() == 1), not res.has_complex)


# ---------------------------------------------------------------- causality


@dataclass(frozen=True)
class CausalityPoint:
    lam: float
    mu: float
    nu: float
    direction_id: int
    roots: np.ndarray
    max_abs_speed: float
    all_real: bool
    degenerate: bool

    @property
    def causal(self):
        return self.all_real and not self.degenerate and self.max_abs_speed <= 1.0 + 1e-9


def characteristic_roots(state, eos, coeffs, direction, cond_max=1e12, imag_tol=1e-7):
    """Roots ``tau`` of ``det(xi xi B~) = 0`` with ``xi = (-tau, n)``.

    The quadratic pencil ``tau^2 M2 - tau M1 + M0`` is linearised to a
    generalized eigenproblem (companion form, QZ).  Returns
    ``(finite_roots, degenerate)`` where ``degenerate`` flags a singular
    leading block (infinite roots present).
    """
    B = shifted_tensor(state, eos, coeffs).B
    n = np.concatenate(([0.0], np.asarray(direction, dtype=float)))
    n /= np.linalg.norm(n)
    e0 = np.array([1.0, 0.0, 0.0, 0.0])
    M2 = np.einsum("abcd,b,d->ac", B, e0, e0)
    M1 = np.einsum("abcd,b,d->ac", B, e0, n) + np.einsum("abcd,b,d->ac", B, n, e0)
    M0 = np.einsum("abcd,b,d->ac", B, n, n)
    m = M2.shape[0]
    eye = np.eye(m)
    Z = np.zeros((m, m))
    # P(tau) = tau^2 M2 - tau M1 + M0;  z = (v, tau v)
    L = np.block([[Z, eye], [-M0, M1]])
    R = np.block([[eye, Z], [Z, M2]])
    alpha, beta = linalg.eig(L, R, right=False, homogeneous_eigvals=True)
    scale = max(np.max(np.abs(M2)), np.max(np.abs(M0)), 1e-300)
    finite = np.abs(beta) > 1e-10 * np.maximum(np.abs(alpha), 1.0)
    roots = alpha[finite] / beta[finite]
    degenerate = bool(np.linalg.cond(M2 / scale) > cond_max) or not np.all(finite)
    roots = roots[np.argsort(roots.real)]
    mag = np.maximum(np.abs(roots), 1.0)
    all_real = bool(np.all(np.abs(roots.imag) <= imag_tol * mag))
    return roots, degenerate, all_real


def causality_point(state, eos, coeffs, direction, direction_id=0) -> CausalityPoint:
    try:
        roots, degenerate, all_real = characteristic_roots(state, eos, coeffs, direction)
    except (np.linalg.LinAlgError, ValueError) as exc:
        log.warning("indeterminate grid point %s: %s", coeffs.shift, exc)
        nan = np.array([np.nan])
        return CausalityPoint(*coeffs.shift, direction_id, nan, np.nan, False, True)
    max_abs = float(np.max(np.abs(roots))) if roots.size else np.inf
    return CausalityPoint(*coeffs.shift, direction_id, roots, max_abs, all_real, degenerate)


def unit_directions(count, rng=None):
    """``count`` unit 3-vectors: the coordinate axes first, then random ones."""
    base = [np.eye(3)[i] for i in range(min(count, 3))]
    if count > 3:
        rng = np.random.default_rng(0) if rng is None else rng
        extra = rng.normal(size=(count - 3, 3))
        base += list(extra / np.linalg.norm(extra, axis=1, keepdims=True))
    return np.array(base)


def causality_scan(state, eos, base_coeffs, grid, directions, mapper=map):
    """Scan ``(lam, mu, nu)`` triples over sampled directions.

    ``grid`` is an iterable of triples; ``mapper`` can be a parallel map.
    Returns a list of :class:`CausalityPoint` in grid-major order.
    """
    tasks = [
        (state, eos, base_coeffs.with_shift(*triple), d, i)
        for triple in grid
        for i, d in enumerate(directions)
    ]
    return list(mapper(_scan_task, tasks))


def _scan_task(task):
    return causality_point(*task)


def causal_region(points):
    """Triples that are causal along every sampled direction."""
    by_triple = {}
    for p in points:
        key = (p.lam, p.mu, p.nu)
        by_triple[key] = by_triple.get(key, True) and p.causal
    return [k for k, ok in by_triple.items() if ok]
