"""Minkowski tensor algebra, small dense eigen-solvers and finite differences.

All evaluation is pointwise.  Index conventions used throughout the package:

* Greek indices run over ``0..3`` with metric ``diag(-1, 1, 1, 1)``.
* Field slots ``a, c`` run over ``0..4``; slots ``0..3`` are energy-momentum,
  slot ``4`` is particle number.  The slot-4 "metric" entry is ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

METRIC = np.diag([-1.0, 1.0, 1.0, 1.0])
#: the metric is its own inverse in Cartesian coordinates
METRIC_INV = METRIC.copy()

SYMMETRY_TOL = 1e-9
DET_FLOOR = 1e-12


class TensorInputError(ValueError):
    """Input violates a precondition (non-unit velocity, asymmetric matrix...)."""


class SingularPencilError(np.linalg.LinAlgError):
    """The right-hand matrix of a generalized eigenproblem is singular."""


class NonFiniteEvaluation(FloatingPointError):
    """A finite-difference probe produced NaN or Inf."""

    def __init__(self, point):
        self.point = np.asarray(point)
        super().__init__(f"non-finite evaluation at probe point {self.point!r}")


def lower(v):
    """Lower (or raise) the index of a 4-vector; the metric is an involution."""
    return METRIC @ np.asarray(v, dtype=float)


def dot(u, v):
    """Minkowski inner product ``u^a v_a`` of two contravariant vectors."""
    return float(np.asarray(u) @ METRIC @ np.asarray(v))


def field_metric(nfields):
    """Metric on field slots: Minkowski on ``0..3`` and ``+1`` on slot 4."""
    g = np.eye(nfields)
    g[0, 0] = -1.0
    return g


def boost_matrix(rapidity, direction=(1.0, 0.0, 0.0)):
    """Contravariant Lorentz boost ``L^a_b`` with given rapidity along a 3-direction."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    L = np.eye(4)
    L[0, 0] = ch
    L[0, 1:] = sh * n
    L[1:, 0] = sh * n
    L[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return L


def covector_boost(L):
    """Matrix acting on covectors for a contravariant transform ``L``."""
    return np.linalg.inv(L).T


def check_unit_timelike(U, tol=1e-12):
    U = np.asarray(U, dtype=float)
    norm = dot(U, U)
    if abs(norm + 1.0) > tol or U[0] <= 0.0:
        raise TensorInputError(f"U must be future-directed unit timelike, got U.U = {norm!r}")
    return U


def projector(U):
    """Spatial projector ``Pi^{ab} = g^{ab} + U^a U^b`` (both indices up)."""
    U = check_unit_timelike(U)
    return METRIC_INV + np.outer(U, U)


def fd_jacobian(f, x, h=1e-6):
    """Central-difference Jacobian ``df_i/dx_j`` of a vector map.

    ``f`` may return an array of any shape; the result has shape
    ``f(x).shape + x.shape``.  Truncation error is ``O(h**2)``.
    """
    x = np.asarray(x, dtype=float)
    if h <= 0:
        raise ValueError("step h must be positive")
    f0 = np.asarray(f(x), dtype=float)
    if not np.all(np.isfinite(f0)):
        raise NonFiniteEvaluation(x)
    jac = np.empty(f0.shape + x.shape)
    for idx in np.ndindex(x.shape):
        xp = x.copy()
        xm = x.copy()
        xp[idx] += h
        xm[idx] -= h
        fp = np.asarray(f(xp), dtype=float)
        fm = np.asarray(f(xm), dtype=float)
        for probe, val in ((xp, fp), (xm, fm)):
            if not np.all(np.isfinite(val)):
                raise NonFiniteEvaluation(probe)
        jac[(...,) + idx] = (fp - fm) / (2.0 * h)
    return jac


def sym_eig(M, tol=SYMMETRY_TOL):
    """Eigen-decomposition of a symmetric matrix, eigenvalues ascending."""
    M = np.asarray(M, dtype=float)
    defect = np.max(np.abs(M - M.T)) if M.size else 0.0
    if defect >= tol * max(1.0, np.max(np.abs(M))):
        raise TensorInputError(f"matrix not symmetric (defect {defect:.3e})")
    w, v = linalg.eigh(0.5 * (M + M.T))
    return w, v


def scaled_det(B):
    """``|det B|`` divided by the product of column norms (Hadamard ratio, in [0, 1])."""
    norms = np.linalg.norm(B, axis=0)
    if np.any(norms == 0):
        return 0.0
    return float(abs(np.linalg.det(B / norms)))


@dataclass(frozen=True)
class GenEigResult:
    values: np.ndarray
    vectors: np.ndarray
    has_complex: bool


def gen_eig(A, B, det_floor=DET_FLOOR, imag_tol=1e-10):
    """Spectrum of ``B^{-1} A`` sorted by real part.

    Raises :class:`SingularPencilError` if the column-scaled determinant
    ``|det B| / prod_j |B e_j|`` is below ``det_floor``.  Complex pairs are
    kept and flagged.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    det = scaled_det(B)
    if det < det_floor:
        raise SingularPencilError(f"singular pencil: scaled |det B| = {det:.3e} < {det_floor:g}")
    w, v = linalg.eig(A, B)
    order = np.lexsort((w.imag, w.real))
    w, v = w[order], v[:, order]
    mag = max(1.0, np.max(np.abs(w)))
    has_complex = bool(np.any(np.abs(w.imag) > imag_tol * mag))
    if not has_complex:
        w = w.real
        v = v.real
    return GenEigResult(w, v, has_complex)
