import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdnk_lab.tensor_core import (
    METRIC,
    METRIC_INV,
    NonFiniteEvaluation,
    SingularPencilError,
    TensorInputError,
    boost_matrix,
    dot,
    fd_jacobian,
    gen_eig,
    lower,
    projector,
    sym_eig,
)

rapidities = st.floats(-2.0, 2.0, allow_nan=False)
directions = st.tuples(*[st.floats(-1, 1) for _ in range(3)]).filter(lambda d: np.linalg.norm(d) > 1e-3)


def test_metric_inverse():
    assert np.array_equal(METRIC @ METRIC_INV, np.eye(4))


@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=4))
def test_lower_raise_roundtrip(v):
    assert np.array_equal(lower(lower(v)), np.asarray(v))


def test_rest_frame_projector():
    assert np.array_equal(projector([1, 0, 0, 0]), np.diag([0.0, 1, 1, 1]))


def test_projector_matches_boosted_rest_projector():
    L = boost_matrix(0.5)
    U = L @ np.array([1.0, 0, 0, 0])
    assert np.allclose(U, [np.cosh(0.5), np.sinh(0.5), 0, 0])
    expected = L @ np.diag([0.0, 1, 1, 1]) @ L.T
    assert np.max(np.abs(projector(U) - expected)) < 1e-13


@settings(max_examples=1000, deadline=None)
@given(rapidities, directions)
def test_projector_idempotent_and_transverse(chi, n):
    U = boost_matrix(chi, n)[:, 0]
    Pi = projector(U)
    assert np.max(np.abs(Pi @ lower(U))) < 1e-12
    # mixed-index square Pi^a_c Pi^{cb}
    assert np.max(np.abs(Pi @ METRIC @ Pi - Pi)) < 1e-12


@pytest.mark.parametrize("U", [[1.0, 0.5, 0, 0], [0.0, 1.0, 0, 0], [-1.0, 0, 0, 0]])
def test_projector_rejects_non_unit_or_past_directed(U):
    with pytest.raises(TensorInputError):
        projector(U)


def test_dot_signature():
    assert dot([1, 0, 0, 0], [1, 0, 0, 0]) == -1.0
    assert dot([0, 1, 0, 0], [0, 1, 0, 0]) == 1.0


def test_fd_jacobian_identity_and_square():
    assert np.max(np.abs(fd_jacobian(lambda x: x, np.arange(5.0), h=1e-3) - np.eye(5))) < 1e-10
    J = fd_jacobian(lambda x: x**2, np.array([1.0, 2.0, 3.0]), h=1e-5)
    assert np.max(np.abs(J - np.diag([2.0, 4.0, 6.0]))) < 1e-8


def test_fd_jacobian_second_order_convergence():
    f = lambda x: np.sin(x) * np.exp(x[::-1])
    x = np.array([0.3, -0.7, 1.1])
    exact = np.diag(np.cos(x) * np.exp(x[::-1]))
    exact += np.fliplr(np.diag(np.sin(x) * np.exp(x[::-1])))
    errs = [np.max(np.abs(fd_jacobian(f, x, h) - exact)) for h in (1e-2, 5e-3)]
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.1)


def test_fd_jacobian_reports_probe_point():
    with pytest.raises(NonFiniteEvaluation) as info, np.errstate(invalid="ignore"):
        fd_jacobian(lambda x: np.log(x), np.array([1e-8, 1.0]), h=1e-6)
    assert info.value.point[0] < 0


def test_fd_jacobian_rejects_bad_step():
    with pytest.raises(ValueError):
        fd_jacobian(lambda x: x, np.ones(2), h=0.0)


def test_sym_eig_sorted():
    w, _ = sym_eig(np.diag([3.0, 1, 2, 5, 4]))
    assert np.array_equal(w, [1.0, 2, 3, 4, 5])


def test_sym_eig_reconstruction(rng):
    X = rng.normal(size=(5, 5))
    M = X + X.T
    w, v = sym_eig(M)
    assert np.max(np.abs(v @ np.diag(w) @ v.T - M)) < 1e-9
    assert np.max(np.abs(M @ v - v * w)) <= 1e-9 * np.linalg.norm(M)


def test_sym_eig_rejects_asymmetric():
    M = np.eye(5)
    M[0, 1] = 1e-3
    with pytest.raises(TensorInputError):
        sym_eig(M)


def test_gen_eig_scalar_pencil():
    res = gen_eig(np.eye(5), 2 * np.eye(5))
    assert np.allclose(res.values, 0.5) and not res.has_complex


def test_gen_eig_flags_complex_pairs():
    A = np.array([[0.0, -1.0], [1.0, 0.0]])
    res = gen_eig(A, np.eye(2))
    assert res.has_complex
    assert np.allclose(sorted(res.values.imag), [-1, 1])


def test_gen_eig_singular_pencil():
    B = np.eye(5)
    B[4, 4] = 0.0
    with pytest.raises(SingularPencilError):
        gen_eig(np.eye(5), B)
