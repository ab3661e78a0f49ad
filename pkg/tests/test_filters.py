import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jft.filters import (
    IdealLowPass,
    PolynomialFilter,
    Rational,
    RepresentationMismatch,
    ResponseNotEvaluable,
    Tabulated,
    UnderdeterminedFit,
    adjacency_angle,
    apply_dense,
    apply_polynomial_filter,
    apply_spectral_filter,
    eigen_grid,
    fit_polynomial_response,
    fit_sweep,
    ideal_lowpass_response,
    polynomial_operator_dense,
    response_error,
    spectral_operator,
    uniform_grid,
)
from jft.graph import Representation, representation_matrix
from jft.transforms import joint_basis

from conftest import path_graph, random_graph


def one(lam_T, lam_G):
    return np.ones(np.broadcast(lam_T, lam_G).shape, dtype=complex)


def zero(lam_T, lam_G):
    return np.zeros(np.broadcast(lam_T, lam_G).shape, dtype=complex)


# -- exact spectral filtering ----------------------------------------------


def test_identity_and_zero_responses(rng):
    g = random_graph(6, 0.4, rng)
    jb = joint_basis(g, 5)
    X = rng.standard_normal((6, 5))
    assert np.abs(apply_spectral_filter(X, one, jb) - X).max() < 1e-10
    assert np.abs(apply_spectral_filter(X, zero, jb)).max() < 1e-14


def test_dc_indicator_projects_onto_mean(rng):
    g = random_graph(7, 0.3, rng, connected=True)
    T = 4
    jb = joint_basis(g, T)

    def dc(lam_T, lam_G):
        return ((np.abs(lam_T) < 1e-9) & (np.abs(lam_G) < 1e-9)).astype(complex)

    X = rng.standard_normal((7, T))
    ones = np.ones(7 * T) / np.sqrt(7 * T)
    expected = (np.outer(ones, ones) @ X.T.ravel()).reshape(T, 7).T
    np.testing.assert_allclose(apply_spectral_filter(X, dc, jb), expected, atol=1e-10)
    np.testing.assert_allclose(expected, np.full_like(X, X.mean()), atol=1e-12)


def test_tabulated_response_lookup(p3):
    jb = joint_basis(p3, 2)
    lT, lG = eigen_grid(jb)
    TT, GG = np.meshgrid(lT, lG, indexing="ij")
    tab = Tabulated(TT.ravel(), GG.ravel(), (TT + GG).ravel())
    X = np.arange(6.0).reshape(3, 2)
    pf = PolynomialFilter([[0, 1], [1, 0]])
    np.testing.assert_allclose(apply_spectral_filter(X, tab, jb), apply_polynomial_filter(X, pf, p3), atol=1e-10)
    with pytest.raises(ResponseNotEvaluable):
        tab(0.5, 0.5)


# -- ideal low-pass --------------------------------------------------------


@pytest.mark.parametrize(
    "theta, lam_G, expected",
    [
        (0.0, 0.0, 1.0),
        (np.pi / 3, 1.0, 1.0),
        (np.pi, 0.2, 1.0),
        (3 * np.pi / 2, 0.5, 0.0),
        (np.pi / 2, 2.0, 0.0),
        (0.0, 2.0, 0.0),
        (1.9 * np.pi, 0.0, 0.0),
    ],
)
def test_ideal_lowpass_cases(theta, lam_G, expected):
    lam_T = 1 - np.exp(1j * theta)  # adjacency eigenvalue exp(iθ)
    assert ideal_lowpass_response()(lam_T, lam_G) == expected


def test_adjacency_angle_range():
    theta = np.linspace(0, 2 * np.pi, 50, endpoint=False)
    np.testing.assert_allclose(adjacency_angle(1 - np.exp(1j * theta)), theta, atol=1e-12)


def test_ideal_lowpass_returns_zero_one():
    lT, lG = uniform_grid(12, 9)
    h = IdealLowPass()(lT[:, None], lG[None, :])
    assert set(np.unique(h)) <= {0, 1}


# -- fitting ---------------------------------------------------------------


@pytest.mark.parametrize("K, L", [(0, 0), (1, 2), (2, 2), (3, 1)])
def test_fit_recovers_polynomial(K, L, rng):
    g = random_graph(8, 0.4, rng, connected=True)
    jb = joint_basis(g, 6, "normalized")
    c = rng.standard_normal((K + 1, L + 1))
    truth = PolynomialFilter(c, "normalized")
    fit = fit_polynomial_response(truth, *eigen_grid(jb), K, L, "normalized")
    np.testing.assert_allclose(fit.coeffs, c, atol=1e-8)
    assert response_error(truth, fit, *eigen_grid(jb)) < 1e-10


def test_fit_graph_identity(p3):
    jb = joint_basis(p3, 3)
    fit = fit_polynomial_response(lambda lT, lG: lG + 0 * lT, *eigen_grid(jb), 0, 1)
    np.testing.assert_allclose(fit.coeffs, [[0.0, 1.0]], atol=1e-12)


def test_fit_empty_grid():
    with pytest.raises(ValueError):
        fit_polynomial_response(one, [], [0.0], 0, 0)


def test_strict_fit_rejects_underdetermined(p3):
    jb = joint_basis(p3, 2)
    with pytest.raises(UnderdeterminedFit):
        fit_polynomial_response(one, *eigen_grid(jb), 2, 0, strict=True)
    with pytest.raises(UnderdeterminedFit):
        fit_polynomial_response(one, *eigen_grid(jb), 0, 3, strict=True)


def test_response_error_extremes():
    lT, lG = uniform_grid(5, 4)
    assert response_error(one, PolynomialFilter([[0.0]]), lT, lG) == 1.0
    assert response_error(one, PolynomialFilter([[1.0]]), lT, lG) == 0.0
    with pytest.raises(ValueError):
        response_error(zero, PolynomialFilter([[1.0]]), lT, lG)


def test_sweep_is_monotone_and_best_constant_matches():
    lT, lG = uniform_grid(10, 8)
    h = IdealLowPass()
    sw = fit_sweep(h, lT, lG, 4, 4)
    assert np.all(np.diff(sw.errors, axis=0) <= 0)
    assert np.all(np.diff(sw.errors, axis=1) <= 0)
    target = h(lT[:, None], lG[None, :]).real.ravel()
    best_const = np.linalg.norm(target - target.mean()) / np.linalg.norm(target)
    assert sw.errors[0, 0] == pytest.approx(best_const, rel=1e-12)
    assert sw.filters[2][3].K == 2 and sw.filters[2][3].L == 3


def test_padded_filter_keeps_response(rng):
    pf = PolynomialFilter(rng.standard_normal((2, 3)))
    big = pf.padded(4, 4)
    lT, lG = uniform_grid(6, 5)
    np.testing.assert_allclose(big(lT[:, None], lG[None, :]), pf(lT[:, None], lG[None, :]))


# -- vertex-domain application ---------------------------------------------


def test_constant_term_is_identity(rng, p3, backend):
    X = rng.standard_normal((3, 4))
    np.testing.assert_array_equal(apply_polynomial_filter(X, PolynomialFilter([[1.0]]), p3, backend=backend), X)


def test_single_graph_term(rng, backend):
    g = random_graph(6, 0.5, rng, weighted=True)
    X = rng.standard_normal((6, 3))
    Y = apply_polynomial_filter(X, PolynomialFilter([[0.0, 1.0]]), g, backend=backend)
    np.testing.assert_allclose(Y, representation_matrix(g, "laplacian") @ X, atol=1e-13)


def test_p3_random_coefficients_match_dense(rng, p3, backend):
    pf = PolynomialFilter(rng.standard_normal((3, 3)))
    X = rng.standard_normal((3, 3))
    Y = apply_polynomial_filter(X, pf, p3, backend=backend)
    assert np.abs(Y - apply_dense(polynomial_operator_dense(pf, p3, 3), X)).max() < 1e-10


@pytest.mark.parametrize("kind", list(Representation))
def test_vertex_equals_spectral(kind, rng):
    g = random_graph(7, 0.4, rng)
    T = 6
    pf = PolynomialFilter(rng.standard_normal((3, 4)), kind)
    jb = joint_basis(g, T, kind)
    X = rng.standard_normal((7, T))
    Y = apply_polynomial_filter(X, pf, g)
    Z = apply_spectral_filter(X, pf, jb)
    assert np.abs(Y - Z).max() < 1e-8
    assert np.abs(Z.imag).max() < 1e-10


def test_representation_mismatch(p3):
    pf = PolynomialFilter([[1.0, 1.0]], "normalized")
    with pytest.raises(RepresentationMismatch):
        apply_polynomial_filter(np.zeros((3, 2)), pf, p3, representation="laplacian")


def test_dimension_checks(p3):
    with pytest.raises(ValueError):
        apply_polynomial_filter(np.zeros((2, 2)), PolynomialFilter([[1.0]]), p3)
    with pytest.raises(ValueError):
        apply_polynomial_filter(np.zeros((3, 2)), PolynomialFilter([[1.0]]), p3, T=3)


def test_nonfinite_coefficients_rejected():
    with pytest.raises(ValueError):
        PolynomialFilter([[np.nan]])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_filtering_is_linear(seed, a, b):
    rng = np.random.default_rng(seed)
    g = random_graph(5, 0.5, rng)
    pf = PolynomialFilter(rng.standard_normal((2, 3)))
    X, Y = rng.standard_normal((2, 5, 4))
    lhs = apply_polynomial_filter(a * X + b * Y, pf, g)
    rhs = a * apply_polynomial_filter(X, pf, g) + b * apply_polynomial_filter(Y, pf, g)
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(lhs).max())
    jb = joint_basis(g, 4)
    h = IdealLowPass(graph_cut=2.0)
    lhs = apply_spectral_filter(a * X + b * Y, h, jb)
    rhs = a * apply_spectral_filter(X, h, jb) + b * apply_spectral_filter(Y, h, jb)
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(lhs).max())


def test_spectral_operator_realness_for_conjugate_symmetric_response(rng):
    g = random_graph(4, 0.6, rng)
    F = spectral_operator(Rational([1.0, 1.0], [0.0, 1.0]), joint_basis(g, 5))
    assert np.abs(F.imag).max() < 1e-10
