import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linear_sum_assignment

from jft.graph import Graph, Representation, representation_matrix, ring_laplacian
from jft.transforms import (
    DefectiveMatrix,
    SizeGuardExceeded,
    basis_from_matrix,
    dft,
    dft_basis,
    gft,
    graph_basis,
    idft,
    igft,
    ijft,
    jft,
    jft_via_joint_graph_oracle,
    joint_basis,
    joint_matrix,
    unvec,
    vec,
)

from conftest import path_graph, random_graph, triangle


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


def matched_distance(a, b):
    """Largest gap under the best one-to-one pairing of two eigenvalue lists."""
    a, b = np.asarray(a), np.asarray(b)
    D = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(D)
    return D[r, c].max()


# -- dft -------------------------------------------------------------------


def test_dft_basis_t1():
    b = dft_basis(1)
    np.testing.assert_array_equal(b.forward, [[1.0]])
    np.testing.assert_array_equal(b.eigenvalues, [0.0])


def test_dft_basis_t2_hand_diagonalization():
    b = dft_basis(2)
    np.testing.assert_allclose(b.forward, np.array([[1, 1], [1, -1]]) / np.sqrt(2), atol=1e-15)
    np.testing.assert_allclose(b.eigenvalues, [0, 2], atol=1e-15)


@pytest.mark.parametrize("T", [3, 4, 7, 16])
def test_dft_basis_diagonalizes_ring_laplacian(T):
    b = dft_basis(T)
    D = b.forward @ ring_laplacian(T) @ b.inverse
    np.testing.assert_allclose(D, np.diag(b.eigenvalues), atol=1e-10)
    assert b.unitary
    np.testing.assert_allclose(b.forward @ b.inverse, np.eye(T), atol=1e-12)


def test_ring_adjacency_eigenvalue_convention():
    # adjacency eigenvalue paired with row t is exp(2πi t (T-1)/T)
    T = 6
    b = dft_basis(T)
    A = representation_matrix(__import__("jft").ring_graph(T), "adjacency")
    lam = np.exp(2j * np.pi * np.arange(T) * (T - 1) / T)
    np.testing.assert_allclose(b.forward @ A @ b.inverse, np.diag(lam), atol=1e-12)


def test_dft_examples():
    T = 5
    X = np.full((1, T), 2.5)
    expected = np.zeros((1, T), dtype=complex)
    expected[0, 0] = 2.5 * np.sqrt(T)
    np.testing.assert_allclose(dft(X), expected, atol=1e-12)
    np.testing.assert_allclose(dft(np.array([[1.0, -1.0]])), [[0, np.sqrt(2)]], atol=1e-15)


def test_dft_roundtrip_and_parseval(rng):
    X = rng.standard_normal((4, 9))
    assert rel(idft(dft(X)), X) < 1e-10
    assert abs(np.linalg.norm(dft(X)) - np.linalg.norm(X)) < 1e-10


def test_dft_dimension_mismatch():
    with pytest.raises(ValueError):
        dft(np.ones((2, 3)), dft_basis(4))


# -- gft -------------------------------------------------------------------


def test_p3_laplacian_spectrum():
    b = graph_basis(path_graph(3), "laplacian")
    np.testing.assert_allclose(b.eigenvalues, [0, 1, 3], atol=1e-12)


def test_triangle_normalized_spectrum():
    np.testing.assert_allclose(graph_basis(triangle(), "normalized").eigenvalues, [0, 1.5, 1.5], atol=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_connected_graph_constant_eigenvector(seed):
    g = random_graph(10, 0.3, np.random.default_rng(seed), connected=True)
    b = graph_basis(g, "laplacian")
    assert abs(b.eigenvalues[0]) < 1e-10
    v = b.inverse[:, 0]
    np.testing.assert_allclose(np.abs(v), np.full(10, 1 / np.sqrt(10)), atol=1e-10)
    # phase convention: largest entry real positive
    assert v[np.argmax(np.abs(v))] > 0


def test_gft_constant_signal():
    g = random_graph(8, 0.4, np.random.default_rng(3), connected=True)
    b = graph_basis(g, "laplacian")
    Y = gft(np.full((8, 3), 1.7), b)
    assert np.abs(Y[1:]).max() < 1e-12
    assert np.abs(Y[0]).min() > 1


def test_gft_p3_unit_vector():
    # P3 Laplacian eigenvectors (1,1,1)/√3, (1,0,-1)/√2, (1,-2,1)/√6
    b = graph_basis(path_graph(3), "laplacian")
    Y = gft(np.array([[1.0], [0.0], [0.0]]), b)
    np.testing.assert_allclose(np.abs(Y.ravel()), [1 / np.sqrt(3), 1 / np.sqrt(2), 1 / np.sqrt(6)], atol=1e-12)


def test_gft_roundtrip_parseval(rng):
    g = random_graph(7, 0.4, rng)
    b = graph_basis(g, "normalized")
    X = rng.standard_normal((7, 3))
    assert rel(igft(gft(X, b), b), X) < 1e-10
    assert abs(np.linalg.norm(gft(X, b)) - np.linalg.norm(X)) < 1e-10


@pytest.mark.parametrize("kind", list(Representation))
def test_basis_invariants(kind, rng):
    g = random_graph(9, 0.35, rng)
    b = graph_basis(g, kind)
    M = representation_matrix(g, kind)
    assert np.linalg.norm(b.forward @ b.inverse - np.eye(9)) / 3 < 1e-10
    np.testing.assert_allclose(b.inverse, b.forward.conj().T, atol=1e-10)
    assert np.linalg.norm(b.reconstruct() - M) <= 1e-8 * max(np.linalg.norm(M), 1)
    assert np.all(np.diff(b.eigenvalues) >= -1e-12)


def test_directed_graph_basis_not_unitary():
    g = Graph(3, ((0, 1, 1.0), (1, 2, 2.0), (2, 0, 0.5)), directed=True)
    b = graph_basis(g, "laplacian")
    assert not b.unitary
    M = representation_matrix(g, "laplacian")
    assert np.linalg.norm(b.reconstruct() - M) < 1e-8
    assert np.linalg.norm(b.forward @ b.inverse - np.eye(3)) < 1e-10
    re = b.eigenvalues.real
    assert np.all(np.diff(re) >= -1e-12)


def test_defective_matrix_detected():
    with pytest.raises(DefectiveMatrix):
        basis_from_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))


# -- jft -------------------------------------------------------------------


def test_jft_degenerate_cases(rng):
    g = random_graph(5, 0.5, rng)
    X = rng.standard_normal((5, 1))
    jb = joint_basis(g, 1)
    np.testing.assert_allclose(jft(X, jb), gft(X, jb.graph), atol=1e-14)
    x = rng.standard_normal((1, 6))
    np.testing.assert_allclose(jft(x, joint_basis(Graph(1), 6)), dft(x), atol=1e-14)


@pytest.mark.parametrize("seed", range(5))
def test_jft_matches_kronecker(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(4, 0.6, rng)
    X = rng.standard_normal((4, 3))
    jb = joint_basis(g, 3)
    PsiJ = np.kron(dft_basis(3).forward, graph_basis(g).forward)
    assert np.linalg.norm(vec(jft(X, jb)) - PsiJ @ vec(X)) < 1e-10


def test_jft_order_independence(rng):
    g = random_graph(6, 0.4, rng)
    jb = joint_basis(g, 5, "normalized")
    X = rng.standard_normal((6, 5))
    a = gft(dft(X, jb.time), jb.graph)
    b = dft(gft(X, jb.graph), jb.time)
    assert np.abs(a - b).max() < 1e-12


def test_directed_graph_breaks_norm_preservation():
    g = Graph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)), directed=True)
    jb = joint_basis(g, 4, "laplacian")
    assert not jb.unitary
    # a right eigenvector of the analysis matrix's largest singular value
    _, s, Vh = np.linalg.svd(np.kron(jb.time.forward, jb.graph.forward))
    x = Vh[0].conj()
    X = unvec(x, 3)
    assert abs(np.linalg.norm(jft(X, jb)) - np.linalg.norm(X)) > 1e-6
    assert rel(ijft(jft(X, jb), jb), X) < 1e-10


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), N=st.integers(1, 8), T=st.integers(1, 7),
       kind=st.sampled_from(list(Representation)))
def test_jft_roundtrip_property(seed, N, T, kind):
    rng = np.random.default_rng(seed)
    g = random_graph(N, 0.4, rng)
    jb = joint_basis(g, T, kind)
    X = rng.standard_normal((N, T))
    assert rel(ijft(jft(X, jb), jb), X) < 1e-10
    assert abs(np.linalg.norm(jft(X, jb)) - np.linalg.norm(X)) <= 1e-10 * max(np.linalg.norm(X), 1)


def test_oracle_matches_jft(p3, rng):
    X = rng.standard_normal((3, 2))
    assert np.abs(jft_via_joint_graph_oracle(X, p3) - jft(X, joint_basis(p3, 2))).max() < 1e-8


def test_oracle_n1_is_dft_via_ring(rng):
    x = rng.standard_normal((1, 7))
    np.testing.assert_allclose(jft_via_joint_graph_oracle(x, Graph(1)), dft(x), atol=1e-10)


def test_oracle_size_guard(rng):
    g = random_graph(30, 0.2, rng)
    with pytest.raises(SizeGuardExceeded):
        jft_via_joint_graph_oracle(np.zeros((30, 20)), g)


@pytest.mark.parametrize("kind", list(Representation))
def test_joint_eigenvalues_match_dense(kind, rng):
    g = random_graph(6, 0.5, rng, weighted=True)
    T = 5
    jb = joint_basis(g, T, kind)
    dense = np.linalg.eigvals(joint_matrix(g, T, kind))
    assert matched_distance(jb.eigenvalues.ravel(), dense) < 1e-8
