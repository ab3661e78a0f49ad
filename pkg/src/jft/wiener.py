"""Interference cancellation with joint Wiener filters.

The desired signal ``u`` has covariance ``I_T ⊗ g(M_G)`` and the interference
``w`` has covariance ``f(S_T) ⊗ I_N``, where ``S_T`` is the Hermitian part of
the directed-ring Laplacian (eigenvalues ``1 - cos(2πt/T)``). The directed
ring Laplacian itself is not normal-PSD, so it cannot serve as a covariance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .filters import Rational, as_polynomial, spectral_operator
from .graph import Graph, representation_matrix, ring_laplacian
from .transforms import SizeGuardExceeded, joint_basis

PSD_TOL = 1e-12
ORACLE_MAX_SIZE = 400
PINV_RCOND = 1e-10


class NonPSDModel(ValueError):
    pass


@dataclass(frozen=True)
class CovarianceModel:
    f: Polynomial
    g: Polynomial

    def __post_init__(self):
        object.__setattr__(self, "f", as_polynomial(self.f))
        object.__setattr__(self, "g", as_polynomial(self.g))


def default_model() -> CovarianceModel:
    """``f(lam_T) = lam_T + 1`` and ``g(lam_G) = lam_G``."""
    return CovarianceModel(Polynomial([1.0, 1.0]), Polynomial([0.0, 1.0]))


def wiener_response(m: CovarianceModel, symmetrize_time: bool = True) -> Rational:
    return Rational(m.f, m.g, symmetrize_time=symmetrize_time, rcond=PINV_RCOND)


def _clip_psd(values: np.ndarray, what: str) -> np.ndarray:
    values = np.real_if_close(np.asarray(values))
    if np.iscomplexobj(values):
        raise NonPSDModel(f"{what} spectral density is complex")
    if values.min(initial=0.0) < -PSD_TOL:
        raise NonPSDModel(f"{what} spectral density takes negative value {values.min():.3g}")
    return np.clip(values, 0.0, None)


def symmetric_time_laplacian(T: int) -> np.ndarray:
    LT = ring_laplacian(T)
    return (LT + LT.T) / 2


def _sym_eig(M):
    lam, V = np.linalg.eigh((M + M.T) / 2)
    return lam, V


def spectral_densities(m: CovarianceModel, g: Graph, T: int, kind="laplacian"):
    """Clipped ``g(lam_G)`` and ``f(Re lam_T)`` with the real orthonormal
    eigenvectors of ``M_G`` and ``S_T``."""
    if g.directed:
        raise ValueError("covariance model needs an undirected graph")
    lam_G, VG = _sym_eig(representation_matrix(g, kind))
    lam_S, VT = _sym_eig(symmetric_time_laplacian(T))
    return _clip_psd(m.g(lam_G), "graph"), VG, _clip_psd(m.f(lam_S), "time"), VT


def covariances(m: CovarianceModel, g: Graph, T: int, kind="laplacian"):
    """Dense ``(Sigma_u, Sigma_w)``."""
    gv, VG, fv, VT = spectral_densities(m, g, T, kind)
    gM = (VG * gv) @ VG.T
    fM = (VT * fv) @ VT.T
    N = g.n_nodes
    return np.kron(np.eye(T), gM), np.kron(fM, np.eye(N))


def _guard(g: Graph, T: int, max_size: int):
    if g.n_nodes * T > max_size:
        raise SizeGuardExceeded(f"NT = {g.n_nodes * T} exceeds oracle limit {max_size}")


def wiener_operator_dense(m: CovarianceModel, g: Graph, T: int, kind="laplacian",
                          max_size: int = ORACLE_MAX_SIZE) -> np.ndarray:
    """``Sigma_u (Sigma_u + Sigma_w)^+`` built from dense covariances."""
    _guard(g, T, max_size)
    Su, Sw = covariances(m, g, T, kind)
    return Su @ np.linalg.pinv(Su + Sw, rcond=PINV_RCOND, hermitian=True)


def wiener_operator_spectral(m: CovarianceModel, g: Graph, T: int, kind="laplacian",
                             max_size: int = ORACLE_MAX_SIZE) -> np.ndarray:
    """Dense matrix of the joint spectral filter with the Wiener response."""
    _guard(g, T, max_size)
    F = spectral_operator(wiener_response(m), joint_basis(g, T, kind))
    return np.real_if_close(F, tol=1e6)


def analytic_mse(F: np.ndarray, Su: np.ndarray, Sw: np.ndarray) -> float:
    """``E‖F x - u‖² / (NT)`` for a dense linear estimator ``F``."""
    E = F - np.eye(F.shape[0])
    val = np.trace(E @ Su @ E.conj().T) + np.trace(F @ Sw @ F.conj().T)
    return float(np.real(val) / F.shape[0])


def wiener_mse(m: CovarianceModel, g: Graph, T: int, kind="laplacian") -> float:
    """Minimum MSE, ``trace(Sigma_u - Sigma_u (Sigma_u + Sigma_w)^+ Sigma_u) / (NT)``."""
    Su, Sw = covariances(m, g, T, kind)
    P = np.linalg.pinv(Su + Sw, rcond=PINV_RCOND, hermitian=True)
    return float(np.trace(Su - Su @ P @ Su) / Su.shape[0])


# ---------------------------------------------------------------------------
# marginal competitors


def _safe_ratio(num, den):
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    cut = PINV_RCOND * np.abs(den).max(initial=0.0)
    return np.divide(num, den, out=np.zeros(den.shape), where=np.abs(den) > cut)


def time_only_response(m: CovarianceModel, g: Graph, T: int, kind="laplacian"):
    """Best response that ignores ``lam_G``: ``Σg / (Σg + N f(Re lam_T))``."""
    gv, _, _, _ = spectral_densities(m, g, T, kind)
    total, N = gv.sum(), g.n_nodes

    def h(lam_T, lam_G):
        lam_T, _ = np.broadcast_arrays(np.asarray(lam_T, dtype=complex), lam_G)
        fv = _clip_psd(m.f(lam_T.real), "time")
        return _safe_ratio(total, total + N * fv).astype(complex)

    return h


def graph_only_response(m: CovarianceModel, g: Graph, T: int, kind="laplacian"):
    """Best response that ignores ``lam_T``: ``T g(lam_G) / (T g(lam_G) + Σf)``."""
    _, _, fv, _ = spectral_densities(m, g, T, kind)
    total = fv.sum()

    def h(lam_T, lam_G):
        _, lam_G = np.broadcast_arrays(lam_T, np.asarray(lam_G))
        gv = _clip_psd(m.g(np.real(lam_G)), "graph")
        return _safe_ratio(T * gv, T * gv + total).astype(complex)

    return h


def competitor_operators(m: CovarianceModel, g: Graph, T: int, kind="laplacian") -> list[tuple[str, np.ndarray]]:
    """Dense joint, time-only and graph-only Wiener operators plus identity."""
    jb = joint_basis(g, T, kind)
    ops = [("joint_wiener", spectral_operator(wiener_response(m), jb)),
           ("time_only_wiener", spectral_operator(time_only_response(m, g, T, kind), jb)),
           ("graph_only_wiener", spectral_operator(graph_only_response(m, g, T, kind), jb)),
           ("identity", np.eye(g.n_nodes * T))]
    return [(name, np.real_if_close(F, tol=1e6)) for name, F in ops]


# ---------------------------------------------------------------------------
# Monte Carlo


def sample_signals(m: CovarianceModel, g: Graph, T: int, count: int, seed: int,
                   kind="laplacian"):
    """Draw ``count`` independent ``(u, w, x = u + w)`` triples.

    Each is an ``(count, N, T)`` array. Draw ``i`` uses its own generator
    seeded with ``(seed, i)``, so any draw can be reproduced on its own.
    """
    gv, VG, fv, VT = spectral_densities(m, g, T, kind)
    N = g.n_nodes
    sg = VG * np.sqrt(gv)
    sf = VT * np.sqrt(fv)
    u = np.empty((count, N, T))
    w = np.empty((count, N, T))
    for i in range(count):
        rng = np.random.default_rng([int(seed), i])
        zu = rng.standard_normal((N, T))
        zw = rng.standard_normal((N, T))
        u[i] = sg @ zu
        w[i] = zw @ sf.T
    return u, w, u + w


@dataclass(frozen=True)
class MSERow:
    name: str
    mse: float
    stderr: float
    draws: int


def _apply_batch(op, X: np.ndarray) -> np.ndarray:
    count, N, T = X.shape
    if callable(op):
        return np.stack([np.asarray(op(x)) for x in X])
    flat = X.transpose(0, 2, 1).reshape(count, N * T)  # vec per draw
    Y = flat @ np.asarray(op).T
    return Y.reshape(count, T, N).transpose(0, 2, 1)


def mse_report(m: CovarianceModel, g: Graph, T: int,
               filters: Sequence[tuple[str, "np.ndarray | Callable"]] | None = None,
               count: int = 10000, seed: int = 0, kind="laplacian") -> list[MSERow]:
    """Monte Carlo ``mean ‖F x - u‖² / (NT)`` with standard errors.

    ``filters`` are ``(name, operator)`` pairs where the operator is either a
    dense ``NT x NT`` matrix acting on ``vec(x)`` or a callable on ``(N, T)``
    arrays. Defaults to :func:`competitor_operators`.
    """
    if filters is None:
        filters = competitor_operators(m, g, T, kind)
    u, _, x = sample_signals(m, g, T, count, seed, kind)
    NT = g.n_nodes * T
    rows = []
    for name, op in filters:
        err = _apply_batch(op, x) - u
        per_draw = np.sum(np.abs(err) ** 2, axis=(1, 2)) / NT
        se = float(per_draw.std(ddof=1) / np.sqrt(count)) if count > 1 else float("nan")
        rows.append(MSERow(name, float(per_draw.mean()), se, count))
    return rows
