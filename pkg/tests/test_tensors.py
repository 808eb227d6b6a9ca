import numpy as np
import pytest

from pseudocurv import catalog as cat
from pseudocurv import tensors as tc


def test_kn_of_metric_in_two_dimensions():
    f = tc.frame_from_metric(np.eye(2))
    gg = tc.kn(f.g, f.g)
    assert gg[0, 1, 1, 0] == 2.0
    assert gg[0, 1, 0, 1] == -2.0
    assert tc.gtensor(f)[0, 1, 1, 0] == 1.0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_kn_is_a_generalized_curvature_tensor(n, rng):
    A, F = tc.random_sym(n, rng), tc.random_sym(n, rng)
    T = tc.kn(A, F)
    assert tc.is_generalized_curvature(T)
    np.testing.assert_allclose(T, tc.kn(F, A), atol=1e-14)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_ricci_and_weyl_of_standard_tensors(n, rng):
    f = tc.random_frame(n, rng, negatives=1)
    g = f.g
    A = tc.random_sym(n, rng)
    assert tc.residual(tc.ricci(tc.kn(g, g), f), 2 * (n - 1) * g) < 1e-12
    assert tc.residual(tc.ricci(tc.kn(g, A), f), (n - 2) * A + tc.trace(A, f) * g) < 1e-12
    assert tc.norm(tc.weyl(tc.kn(g, A), f)) < 1e-12 * max(1.0, tc.norm(A))
    R = tc.random_curvature(n, rng)
    C = tc.weyl(R, f)
    assert tc.norm(tc.ricci(C, f)) < 1e-11 * tc.norm(R)
    assert tc.residual(tc.weyl(C, f), C) < 1e-12


@pytest.mark.parametrize("n", [4, 5, 6])
def test_weyl_of_half_kn_square_is_e_tensor(n, rng):
    f = tc.random_frame(n, rng)
    A = tc.random_sym(n, rng)
    assert tc.residual(tc.weyl(0.5 * tc.kn(A, A), f), tc.e_tensor(A, f) / (n - 2)) < 1e-11


@pytest.mark.parametrize("n", [3, 4, 5])
def test_tachibana_vanishing_cases(n, rng):
    f = tc.random_frame(n, rng)
    A = tc.random_sym(n, rng)
    assert tc.norm(tc.tachibana(f.g, tc.gtensor(f))) < 1e-13
    assert tc.norm(tc.tachibana(A, tc.kn(A, A))) < 1e-11 * max(1.0, tc.norm(A)) ** 3


def test_dot_preserves_curvature_symmetries_of_result(rng):
    f = tc.random_frame(5, rng)
    R, T = tc.random_curvature(5, rng), tc.random_curvature(5, rng)
    D = tc.dot(R, T, f)
    assert D.shape == (5,) * 6
    # antisymmetric in the last pair of derivation slots
    np.testing.assert_allclose(D, -np.swapaxes(D, 4, 5), atol=1e-12)


def test_block_weyl_is_pseudosymmetric():
    """n = 4, p = 2, tau = 1 in a Euclidean frame: Weyl.Weyl = -(1/4) Q(g, Weyl)."""
    f = tc.frame_from_metric(np.eye(4))
    W = tc.weyl(cat.fixture_block_weyl(4, 2, 1.0, f), f)
    lhs, rhs = tc.dot(W, W, f), tc.tachibana(f.g, W)
    L = float(np.sum(lhs * rhs) / np.sum(rhs * rhs))
    assert L == pytest.approx(-0.25, rel=1e-12)
    assert tc.residual(lhs, L * rhs) < 1e-12


def test_residual_metric():
    a = np.array([1.0, 0.0])
    assert tc.residual(a, a) == 0.0
    assert tc.residual(1e-3 * a, 0 * a) == pytest.approx(1e-3)  # floor of one in the denominator
    assert tc.residual(10 * a, 11 * a) == pytest.approx(1 / 11)


def test_random_frame_signature(rng):
    f = tc.random_frame(6, rng, negatives=2)
    w = np.linalg.eigvalsh(f.g)
    assert (w < 0).sum() == 2
    np.testing.assert_allclose(f.g @ f.g_inv, np.eye(6), atol=1e-10)


def test_dimension_mismatch_raises(rng):
    with pytest.raises(tc.DimensionError):
        tc.kn(np.eye(3), np.eye(4))
