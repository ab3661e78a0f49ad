"""Eigenbases and the DFT, GFT and joint (time-vertex) Fourier transforms.

A temporal graph signal is an ``(N, T)`` array whose entry ``X[n, t]`` is
the value of node ``n`` at time ``t``. Its vectorization stacks columns, so
``(n, t)`` sits at position ``t * N + n`` (see :func:`vec`).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .graph import (
    Graph,
    Representation,
    is_symmetric,
    kronecker_sum,
    representation_matrix,
    ring_laplacian,
)

ORACLE_MAX_SIZE = 400


class DefectiveMatrix(np.linalg.LinAlgError):
    """The representation is not diagonalizable to working precision."""


class SizeGuardExceeded(ValueError):
    pass


class OracleMismatch(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    """Analysis matrix ``forward`` (rows are analysis vectors), its inverse
    and the eigenvalues aligned with the rows of ``forward``."""

    forward: np.ndarray
    inverse: np.ndarray
    eigenvalues: np.ndarray
    unitary: bool
    representation: Representation = Representation.LAPLACIAN

    @property
    def size(self) -> int:
        return self.forward.shape[0]

    def reconstruct(self) -> np.ndarray:
        """``inverse @ diag(eigenvalues) @ forward``."""
        return (self.inverse * self.eigenvalues[None, :]) @ self.forward


@dataclass(frozen=True, eq=False)
class JointBasis:
    time: SpectralBasis
    graph: SpectralBasis
    eigenvalues: np.ndarray = field(init=False)

    def __post_init__(self):
        # eigenvalues[t, n] = lambda_T[t] + lambda_G[n]
        lam = self.time.eigenvalues[:, None] + self.graph.eigenvalues[None, :]
        object.__setattr__(self, "eigenvalues", lam)

    @property
    def shape(self) -> tuple[int, int]:
        """Signal shape ``(N, T)``."""
        return self.graph.size, self.time.size

    @property
    def unitary(self) -> bool:
        return self.time.unitary and self.graph.unitary

    def forward_matrix(self) -> np.ndarray:
        """Dense ``Psi_T ⊗ Psi_G``. Oracle use only."""
        return np.kron(self.time.forward, self.graph.forward)

    def inverse_matrix(self) -> np.ndarray:
        return np.kron(self.time.inverse, self.graph.inverse)


def vec(X: np.ndarray) -> np.ndarray:
    return np.asarray(X).reshape(-1, order="F")


def unvec(x: np.ndarray, n_nodes: int) -> np.ndarray:
    x = np.asarray(x)
    return x.reshape(n_nodes, -1, order="F")


def _fix_phase(V: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-magnitude entry is real positive."""
    V = V.copy()
    for k in range(V.shape[1]):
        col = V[:, k]
        mags = np.abs(col)
        idx = int(np.argmax(np.round(mags, 12)))
        v = col[idx]
        if mags[idx] > 0:
            V[:, k] = col * (np.conj(v) / abs(v))
    return V


@functools.lru_cache(maxsize=64)
def _dft_basis_cached(T: int) -> SpectralBasis:
    t = np.arange(T)
    Psi = np.exp(-2j * np.pi * np.outer(t, t) / T) / np.sqrt(T)
    lam = 1.0 - np.exp(-2j * np.pi * t / T)
    if T == 1:
        lam = np.zeros(1, dtype=complex)
    Psi.setflags(write=False)
    Phi = Psi.conj().T
    Phi.setflags(write=False)
    lam.setflags(write=False)
    return SpectralBasis(Psi, Phi, lam, True, Representation.LAPLACIAN)


def dft_basis(T: int) -> SpectralBasis:
    """Normalized DFT basis of period ``T``, built analytically.

    Row ``t`` of ``Psi_T`` is a left eigenvector of the directed-ring
    Laplacian with eigenvalue ``1 - exp(-2πi t / T)``; the matching
    adjacency eigenvalue ``exp(-2πi t / T)`` equals
    ``exp(2πi t (T-1) / T)``.
    """
    T = int(T)
    if T < 1:
        raise ValueError("period must be at least 1")
    return _dft_basis_cached(T)


def basis_from_matrix(M: np.ndarray, representation=Representation.LAPLACIAN,
                      cond_limit: float = 1e12) -> SpectralBasis:
    """Eigenbasis of a square matrix.

    Symmetric input gives a real orthonormal basis with eigenvalues ascending.
    Otherwise ``forward`` is the inverse of the right-eigenvector matrix,
    eigenvalues sorted by real part then imaginary part.
    """
    M = np.asarray(M)
    representation = Representation.parse(representation)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got {M.shape}")
    if is_symmetric(M) and not np.iscomplexobj(M):
        lam, V = np.linalg.eigh((M + M.T) / 2)
        V = _fix_phase(V)
        return SpectralBasis(V.T.copy(), V, lam, True, representation)
    lam, R = np.linalg.eig(M)
    order = np.lexsort((np.round(lam.imag, 10), np.round(lam.real, 10)))
    lam, R = lam[order], R[:, order]
    R = R / np.linalg.norm(R, axis=0, keepdims=True)
    R = _fix_phase(R)
    cond = np.linalg.cond(R)
    if not np.isfinite(cond) or cond > cond_limit:
        raise DefectiveMatrix(f"eigenvector matrix has condition number {cond:.3g}")
    return SpectralBasis(np.linalg.inv(R), R, lam.astype(complex), False, representation)


def graph_basis(g: Graph, kind="laplacian") -> SpectralBasis:
    kind = Representation.parse(kind)
    return basis_from_matrix(representation_matrix(g, kind), kind)


def joint_basis(g: Graph, T: int, kind="laplacian") -> JointBasis:
    return JointBasis(dft_basis(T), graph_basis(g, kind))


def _check_shape(X: np.ndarray, jb: JointBasis | None = None, *, N=None, T=None):
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError(f"signal must be an (N, T) matrix, got shape {X.shape}")
    if jb is not None:
        N, T = jb.shape
    if N is not None and X.shape[0] != N:
        raise ValueError(f"signal has {X.shape[0]} nodes, basis expects {N}")
    if T is not None and X.shape[1] != T:
        raise ValueError(f"signal has period {X.shape[1]}, basis expects {T}")
    return X


def dft(X: np.ndarray, basis: SpectralBasis | None = None) -> np.ndarray:
    """Row-wise normalized DFT, ``X Psi_T^T``."""
    X = _check_shape(X)
    basis = basis or dft_basis(X.shape[1])
    _check_shape(X, T=basis.size)
    return X @ basis.forward.T


def idft(Y: np.ndarray, basis: SpectralBasis | None = None) -> np.ndarray:
    Y = _check_shape(Y)
    basis = basis or dft_basis(Y.shape[1])
    _check_shape(Y, T=basis.size)
    return Y @ basis.inverse.T


def gft(X: np.ndarray, basis: SpectralBasis) -> np.ndarray:
    """Column-wise graph Fourier transform, ``Psi_G X``."""
    X = _check_shape(X, N=basis.size)
    return basis.forward @ X


def igft(Y: np.ndarray, basis: SpectralBasis) -> np.ndarray:
    Y = _check_shape(Y, N=basis.size)
    return basis.inverse @ Y


def jft(X: np.ndarray, jb: JointBasis) -> np.ndarray:
    """Joint transform ``Psi_G X Psi_T^T`` computed as GFT after DFT.

    Entry ``[n, t]`` of the result is the coefficient at joint frequency
    ``(lambda_T[t], lambda_G[n])``.
    """
    X = _check_shape(X, jb)
    return gft(dft(X, jb.time), jb.graph)


def ijft(Y: np.ndarray, jb: JointBasis) -> np.ndarray:
    Y = _check_shape(Y, jb)
    return igft(idft(Y, jb.time), jb.graph)


def joint_matrix(g: Graph, T: int, kind="laplacian") -> np.ndarray:
    """Dense ``L_T ⊕ M_G`` for the chosen representation ``M_G`` of ``g``."""
    return kronecker_sum(ring_laplacian(T), representation_matrix(g, kind))


def jft_via_joint_graph_oracle(X: np.ndarray, g: Graph, kind="laplacian",
                               max_size: int = ORACLE_MAX_SIZE,
                               tol: float = 1e-8) -> np.ndarray:
    """Joint transform realised as a GFT on the joint graph.

    Materializes ``L_J`` and ``Psi_J = Psi_T ⊗ Psi_G``, checks that
    ``Phi_J`` diagonalizes ``L_J`` with eigenvalues ``lambda_T + lambda_G``
    and applies ``Psi_J`` to ``vec(X)``.
    """
    X = np.asarray(X)
    N, T = X.shape
    if N != g.n_nodes:
        raise ValueError(f"signal has {N} nodes, graph has {g.n_nodes}")
    if N * T > max_size:
        raise SizeGuardExceeded(f"NT = {N * T} exceeds oracle limit {max_size}")
    jb = joint_basis(g, T, kind)
    LJ = joint_matrix(g, T, kind)
    PsiJ = jb.forward_matrix()
    PhiJ = jb.inverse_matrix()
    lamJ = vec(jb.eigenvalues.T)
    lhs = LJ @ PhiJ
    rhs = PhiJ * lamJ[None, :]
    scale = max(np.linalg.norm(LJ), 1.0) * max(np.linalg.norm(PhiJ), 1.0)
    resid = np.linalg.norm(lhs - rhs) / scale
    if resid > tol:
        raise OracleMismatch(f"L_J Phi_J != Phi_J Lambda_J (relative residual {resid:.3g})")
    return unvec(PsiJ @ vec(X), N)
