"""Joint variation of temporal graph signals: local variation on the joint
graph, the p-Dirichlet form and the quadratic form of the joint Laplacian."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Graph, Representation, adjacency_sparse, representation_sparse


@dataclass(frozen=True, eq=False)
class VariationReport:
    local: np.ndarray
    global_: float
    p: float


def _real_signal(X, g: Graph) -> np.ndarray:
    if g.directed:
        raise ValueError("variation is defined for undirected graphs")
    X = np.asarray(X)
    if np.iscomplexobj(X):
        if np.abs(X.imag).max(initial=0.0) > 0:
            raise ValueError("variation expects a real-valued signal")
        X = X.real
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != g.n_nodes:
        raise ValueError(f"signal shape {X.shape} does not match a {g.n_nodes}-node graph")
    return X


def local_variation_map(X, g: Graph, backend=None) -> np.ndarray:
    """``‖∇_{n,t} X‖₂`` for every node and time instant, as an ``(N, T)`` array.

    The temporal difference wraps around: time ``0`` looks back to ``T - 1``.
    """
    X = _real_signal(X, g)
    indptr, indices, weights = _kernels.csr_arrays(adjacency_sparse(g))
    return np.sqrt(_kernels.local_variation_sq(indptr, indices, weights, X, backend))


def local_variation(X, g: Graph, n: int, t: int) -> float:
    X = _real_signal(X, g)
    N, T = X.shape
    if not (0 <= n < N and 0 <= t < T):
        raise IndexError(f"(n, t) = ({n}, {t}) outside a {N}x{T} signal")
    A = adjacency_sparse(g)
    row = A.getrow(n)
    acc = 0.0
    for j, w in zip(row.indices, row.data):
        acc += w * (X[j, t] - X[n, t]) ** 2
    acc += (X[n, t - 1] - X[n, t]) ** 2
    return float(np.sqrt(acc))


def dirichlet_form(X, g: Graph, p: float = 2.0, backend=None) -> float:
    """``S_p(X) = (1/p) Σ_{n,t} ‖∇_{n,t} X‖₂^p``."""
    p = float(p)
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lv = local_variation_map(X, g, backend)
    return float(np.sum(lv ** p) / p)


def s2_quadratic(X, g: Graph, backend=None) -> float:
    """``vec(X)^T L_J vec(X)`` without forming ``L_J``.

    Graph term ``Σ_t X[:, t]^T L_G X[:, t]`` plus temporal term
    ``Σ_{n,t} X[n, t] (X[n, t] - X[n, t-1])``.
    """
    X = _real_signal(X, g)
    L = representation_sparse(g, Representation.LAPLACIAN)
    LX = _kernels.csr_matmat(*_kernels.csr_arrays(L), X, backend=backend)
    graph_term = float(np.sum(X * LX))
    temporal_term = float(np.sum(X * _kernels.ring_diff(X, backend)))
    return graph_term + temporal_term


def variation_report(X, g: Graph, p: float = 2.0) -> VariationReport:
    lv = local_variation_map(X, g)
    return VariationReport(lv, dirichlet_form(X, g, p), float(p))
