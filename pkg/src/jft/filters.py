"""Joint frequency responses and the filters that realise them.

A response is any callable ``h(lam_T, lam_G)`` broadcasting over arrays of
time eigenvalues (complex, ring Laplacian) and graph eigenvalues. Polynomial
filters ``Σ c[k, l] L_T^k ⊗ M_G^l`` are applied matrix-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from . import _kernels
from .graph import Graph, Representation, representation_matrix, representation_sparse, ring_laplacian
from .transforms import JointBasis, ijft, jft, unvec, vec

ANGLE_TOL = 1e-9
SVD_RTOL = 1e-10


class ResponseNotEvaluable(ValueError):
    pass


class RepresentationMismatch(ValueError):
    pass


class UnderdeterminedFit(ValueError):
    pass


def as_polynomial(coeffs) -> Polynomial:
    if isinstance(coeffs, Polynomial):
        return coeffs
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.size == 0:
        c = np.zeros(1)
    if not np.all(np.isfinite(c)):
        raise ValueError("polynomial coefficients must be finite")
    return Polynomial(c)


def adjacency_angle(lam_T) -> np.ndarray:
    """Argument in ``[0, 2π)`` of the ring-adjacency eigenvalue ``1 - lam_T``."""
    ang = np.mod(np.angle(1.0 - np.asarray(lam_T, dtype=complex)), 2 * np.pi)
    return np.where(ang > 2 * np.pi - ANGLE_TOL, 0.0, ang)


@dataclass(frozen=True)
class IdealLowPass:
    """1 where ``angle(lam_T) <= angle_cut`` and ``lam_G <= graph_cut``, else 0.

    The angle is that of the associated adjacency eigenvalue, mapped to
    ``[0, 2π)``. With the normalized Laplacian ``0 <= lam_G <= 2``.
    """

    angle_cut: float = np.pi
    graph_cut: float = 1.0

    def __call__(self, lam_T, lam_G):
        lam_T, lam_G = np.broadcast_arrays(np.asarray(lam_T), np.asarray(lam_G))
        ok = (adjacency_angle(lam_T) <= self.angle_cut + ANGLE_TOL) & (
            np.real(lam_G) <= self.graph_cut + ANGLE_TOL
        )
        return ok.astype(complex)


@dataclass(frozen=True)
class Rational:
    """``g(lam_G) / (g(lam_G) + f(lam_T))``, zero where the denominator vanishes.

    With ``symmetrize_time`` the time polynomial is evaluated at
    ``Re(lam_T)``, the spectrum of the Hermitian part of the ring Laplacian.
    The cutoff for a vanishing denominator is ``rcond`` times the largest
    ``|g + f|`` among the points of the call.
    """

    f: Polynomial
    g: Polynomial
    symmetrize_time: bool = True
    rcond: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "f", as_polynomial(self.f))
        object.__setattr__(self, "g", as_polynomial(self.g))

    def time_values(self, lam_T):
        lam_T = np.asarray(lam_T, dtype=complex)
        return self.f(lam_T.real) if self.symmetrize_time else self.f(lam_T)

    def graph_values(self, lam_G):
        return self.g(np.asarray(lam_G))

    def __call__(self, lam_T, lam_G):
        lam_T, lam_G = np.broadcast_arrays(np.asarray(lam_T), np.asarray(lam_G))
        gv = np.asarray(self.graph_values(lam_G), dtype=complex)
        den = gv + self.time_values(lam_T)
        mag = np.abs(den)
        cut = self.rcond * mag.max(initial=0.0)
        out = np.zeros(den.shape, dtype=complex)
        ok = mag > cut
        out[ok] = gv[ok] / den[ok]
        return out


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Response known only at listed eigenvalue pairs (matched within ``atol``)."""

    lam_T: np.ndarray
    lam_G: np.ndarray
    values: np.ndarray
    atol: float = 1e-8

    def __post_init__(self):
        for name in ("lam_T", "lam_G", "values"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex).ravel())
        if not (self.lam_T.size == self.lam_G.size == self.values.size):
            raise ValueError("tabulated response needs equally long columns")

    def __call__(self, lam_T, lam_G):
        lam_T, lam_G = np.broadcast_arrays(np.asarray(lam_T, dtype=complex), np.asarray(lam_G, dtype=complex))
        flat_T, flat_G = lam_T.ravel(), lam_G.ravel()
        out = np.empty(flat_T.size, dtype=complex)
        for i, (a, b) in enumerate(zip(flat_T, flat_G)):
            d = np.abs(self.lam_T - a) + np.abs(self.lam_G - b)
            k = int(np.argmin(d)) if d.size else -1
            if k < 0 or d[k] > self.atol:
                raise ResponseNotEvaluable(f"no tabulated value near (lam_T={a}, lam_G={b})")
            out[i] = self.values[k]
        return out.reshape(lam_T.shape)


@dataclass(frozen=True, eq=False)
class PolynomialFilter:
    """Coefficients ``coeffs[k, l]`` of ``Σ c_kl lam_T^k lam_G^l``; ``K`` is the
    time order and ``L`` the graph order."""

    coeffs: np.ndarray
    representation: Representation = Representation.LAPLACIAN

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=2)
        if c.ndim != 2:
            raise ValueError("coefficients must form a (K+1, L+1) matrix")
        if not np.all(np.isfinite(c)):
            raise ValueError("polynomial filter coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "representation", Representation.parse(self.representation))

    @property
    def K(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def L(self) -> int:
        return self.coeffs.shape[1] - 1

    def response(self, lam_T, lam_G):
        lam_T, lam_G = np.broadcast_arrays(np.asarray(lam_T, dtype=complex), np.asarray(lam_G, dtype=complex))
        out = np.zeros(lam_T.shape, dtype=complex)
        pT = np.ones_like(lam_T)
        for k in range(self.K + 1):
            pG = np.ones_like(lam_G)
            for l in range(self.L + 1):
                out += self.coeffs[k, l] * pT * pG
                pG = pG * lam_G
            pT = pT * lam_T
        return out

    __call__ = response

    def padded(self, K: int, L: int) -> "PolynomialFilter":
        c = np.zeros((K + 1, L + 1))
        c[: self.K + 1, : self.L + 1] = self.coeffs
        return PolynomialFilter(c, self.representation)


def ideal_lowpass_response() -> IdealLowPass:
    return IdealLowPass()


# ---------------------------------------------------------------------------
# exact spectral filtering


def response_on_basis(h, jb: JointBasis) -> np.ndarray:
    """``H[n, t] = h(lam_T[t], lam_G[n])`` as an ``(N, T)`` array."""
    lam_T = jb.time.eigenvalues[None, :]
    lam_G = jb.graph.eigenvalues[:, None]
    return np.asarray(h(lam_T, lam_G), dtype=complex)


def apply_spectral_filter(X, h, jb: JointBasis) -> np.ndarray:
    """Scale every joint Fourier coefficient of ``X`` by ``h`` and invert.

    Returns a complex array; for conjugate-symmetric responses on real input
    the imaginary part is rounding noise.
    """
    Y = jft(X, jb)
    return ijft(response_on_basis(h, jb) * Y, jb)


def spectral_operator(h, jb: JointBasis) -> np.ndarray:
    """Dense ``Phi_J diag(h) Psi_J``. Oracle use only."""
    H = vec(response_on_basis(h, jb))
    return (jb.inverse_matrix() * H[None, :]) @ jb.forward_matrix()


# ---------------------------------------------------------------------------
# fitting


def eigen_grid(jb: JointBasis) -> tuple[np.ndarray, np.ndarray]:
    return np.asarray(jb.time.eigenvalues), np.asarray(jb.graph.eigenvalues)


def uniform_grid(n_time: int, n_graph: int, lam_G_max: float = 2.0) -> tuple[np.ndarray, np.ndarray]:
    """Ring-Laplacian values on ``n_time`` equispaced angles and
    ``n_graph`` equispaced graph frequencies in ``[0, lam_G_max]``."""
    theta = 2 * np.pi * np.arange(n_time) / n_time
    return 1.0 - np.exp(-1j * theta), np.linspace(0.0, lam_G_max, n_graph)


def _design(lam_T, lam_G, K, L):
    pT = np.power.outer(np.asarray(lam_T, dtype=complex), np.arange(K + 1))
    pG = np.power.outer(np.asarray(lam_G, dtype=complex), np.arange(L + 1))
    # rows (t, n), columns (k, l)
    return np.einsum("tk,nl->tnkl", pT, pG).reshape(pT.shape[0] * pG.shape[0], -1)


def _target(h_star, lam_T, lam_G):
    return np.asarray(h_star(np.asarray(lam_T)[:, None], np.asarray(lam_G)[None, :]), dtype=complex).ravel()


def _tsvd_solve(V, b, rtol=SVD_RTOL):
    # real coefficients: stack real and imaginary residuals
    A = np.vstack([V.real, V.imag])
    rhs = np.concatenate([b.real, b.imag])
    scale = np.linalg.norm(A, axis=0)
    scale[scale == 0] = 1.0
    U, s, Wt = np.linalg.svd(A / scale, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros(A.shape[1])
    keep = s > rtol * s[0]
    c = Wt[keep].T @ ((U[:, keep].T @ rhs) / s[keep])
    return c / scale


def fit_polynomial_response(h_star, lam_T_grid, lam_G_grid, K: int, L: int,
                            representation="laplacian", strict: bool = False) -> PolynomialFilter:
    """Least-squares bivariate polynomial fit of ``h_star`` over the Cartesian
    product of the two grids.

    Coefficients are real; complex residuals enter as stacked real and
    imaginary rows. The system is column-equilibrated and solved by SVD with
    singular values below ``1e-10 * s_max`` discarded. ``strict`` rejects
    orders that exceed the number of distinct grid values.
    """
    lam_T = np.atleast_1d(np.asarray(lam_T_grid, dtype=complex))
    lam_G = np.atleast_1d(np.asarray(lam_G_grid))
    K, L = int(K), int(L)
    if K < 0 or L < 0:
        raise ValueError("orders must be nonnegative")
    if lam_T.size == 0 or lam_G.size == 0:
        raise ValueError("empty fitting grid")
    if strict:
        nT = np.unique(np.round(lam_T, 10)).size
        nG = np.unique(np.round(lam_G, 10)).size
        if nT < K + 1 or nG < L + 1:
            raise UnderdeterminedFit(
                f"orders (K={K}, L={L}) need at least {K + 1} x {L + 1} distinct grid values, got {nT} x {nG}"
            )
    V = _design(lam_T, lam_G, K, L)
    c = _tsvd_solve(V, _target(h_star, lam_T, lam_G))
    return PolynomialFilter(c.reshape(K + 1, L + 1), representation)


def response_error(h_star, pf, lam_T_grid, lam_G_grid) -> float:
    """Relative error ``‖h* - h‖₂ / ‖h*‖₂`` over all grid pairs."""
    lam_T = np.asarray(lam_T_grid, dtype=complex)
    lam_G = np.asarray(lam_G_grid)
    target = _target(h_star, lam_T, lam_G)
    denom = np.linalg.norm(target)
    if denom == 0:
        raise ValueError("target response vanishes on the grid")
    approx = _target(pf, lam_T, lam_G)
    return float(np.linalg.norm(target - approx) / denom)


@dataclass
class Sweep:
    """Fits for every ``(K, L)`` up to ``(Kmax, Lmax)``.

    ``errors[K, L]`` is the error of ``filters[K][L]``; ``raw_errors`` holds
    the error of the direct least-squares solve at that order before nesting.
    """

    errors: np.ndarray
    raw_errors: np.ndarray
    filters: list = field(default_factory=list)


def fit_sweep(h_star, lam_T_grid, lam_G_grid, Kmax: int, Lmax: int,
              representation="laplacian") -> Sweep:
    """Fit every order pair and keep the nested best.

    A filter of orders ``(K-1, L)`` or ``(K, L-1)`` is also a filter of
    orders ``(K, L)``, so each cell keeps whichever of the direct solve and
    the zero-padded neighbours has the smallest error. In exact arithmetic
    the direct solve always wins; in floating point the monomial system is
    ill-conditioned at high orders and nesting keeps the sweep monotone.
    """
    raw = np.zeros((Kmax + 1, Lmax + 1))
    best = np.zeros_like(raw)
    filters = [[None] * (Lmax + 1) for _ in range(Kmax + 1)]
    for K in range(Kmax + 1):
        for L in range(Lmax + 1):
            pf = fit_polynomial_response(h_star, lam_T_grid, lam_G_grid, K, L, representation)
            err = response_error(h_star, pf, lam_T_grid, lam_G_grid)
            raw[K, L] = err
            cands = [(err, pf)]
            if K > 0:
                cands.append((best[K - 1, L], filters[K - 1][L].padded(K, L)))
            if L > 0:
                cands.append((best[K, L - 1], filters[K][L - 1].padded(K, L)))
            e, f = min(cands, key=lambda c: c[0])
            best[K, L] = e
            filters[K][L] = f
    return Sweep(best, raw, filters)


# ---------------------------------------------------------------------------
# vertex-domain polynomial filtering


def apply_polynomial_filter(X, pf: PolynomialFilter, g: Graph, T: int | None = None,
                            representation=None, backend=None) -> np.ndarray:
    """``Σ c_kl (L_T^k ⊗ M_G^l) vec(X)`` without forming any ``NT x NT`` matrix.

    Graph powers ``Z_l = M_G^l X`` are computed first with sparse products;
    each is then pushed through ``K`` applications of the ring Laplacian
    along time. Cost ``O(M T L + N T K L)``.
    """
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != g.n_nodes:
        raise ValueError(f"signal shape {X.shape} does not match a {g.n_nodes}-node graph")
    if T is not None and X.shape[1] != int(T):
        raise ValueError(f"signal period {X.shape[1]} != {T}")
    if representation is not None and Representation.parse(representation) is not pf.representation:
        raise RepresentationMismatch(
            f"filter designed for {pf.representation.value}, applied with {Representation.parse(representation).value}"
        )
    M = _kernels.csr_arrays(representation_sparse(g, pf.representation))
    c = pf.coeffs
    out = np.zeros(X.shape, dtype=complex if np.iscomplexobj(X) else float)
    Z = X.astype(out.dtype, copy=True)
    for l in range(pf.L + 1):
        if l > 0:
            Z = _kernels.csr_matmat(*M, Z, backend=backend)
        W = Z
        for k in range(pf.K + 1):
            if k > 0:
                W = _kernels.ring_diff(W, backend)
            if c[k, l] != 0.0:
                out += c[k, l] * W
    return out


def polynomial_operator_dense(pf: PolynomialFilter, g: Graph, T: int) -> np.ndarray:
    """Dense ``Σ c_kl L_T^k ⊗ M_G^l``. Oracle use only."""
    LT = ring_laplacian(T)
    MG = representation_matrix(g, pf.representation)
    N = g.n_nodes
    F = np.zeros((N * T, N * T))
    PT = np.eye(T)
    for k in range(pf.K + 1):
        PG = np.eye(N)
        for l in range(pf.L + 1):
            F += pf.coeffs[k, l] * np.kron(PT, PG)
            PG = PG @ MG
        PT = PT @ LT
    return F


def apply_dense(F: np.ndarray, X) -> np.ndarray:
    X = np.asarray(X)
    return unvec(F @ vec(X), X.shape[0])
