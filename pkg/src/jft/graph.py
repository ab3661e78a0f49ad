"""Graphs, their matrix representations, the periodic-time ring and the
Cartesian-product joint graph.

Node indices are 0-based everywhere in the library. The file readers in
:mod:`jft.io` translate from the 1-based edge-list format.

Adjacency convention: ``A[i, j]`` holds the weight of the arc ``j -> i``
(both directions for undirected edges), so row sums of ``A`` are in-degrees
and ``L = D - A`` has zero row sums.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import sparse


class Representation(str, enum.Enum):
    LAPLACIAN = "laplacian"
    NORMALIZED = "normalized"
    ADJACENCY = "adjacency"

    @classmethod
    def parse(cls, value: "str | Representation") -> "Representation":
        if isinstance(value, cls):
            return value
        aliases = {
            "laplacian": cls.LAPLACIAN,
            "normalized": cls.NORMALIZED,
            "normalized_laplacian": cls.NORMALIZED,
            "adjacency": cls.ADJACENCY,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown representation {value!r}") from None


class GraphError(ValueError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class NodeIndexError(GraphError, IndexError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable weighted graph.

    Parameters
    ----------
    n_nodes : int
        Number of nodes ``N``.
    edges : tuple of (int, int, float)
        ``(i, j, w)`` triples with 0-based endpoints. Undirected graphs store
        each unordered pair once.
    directed : bool
        Whether ``(i, j, w)`` is the single arc ``i -> j``.
    """

    n_nodes: int
    edges: tuple[tuple[int, int, float], ...] = ()
    directed: bool = False

    def __post_init__(self):
        if int(self.n_nodes) < 1:
            raise GraphError("a graph needs at least one node")
        clean = []
        seen = set()
        for e in self.edges:
            if len(e) == 2:
                i, j, w = e[0], e[1], 1.0
            else:
                i, j, w = e
            i, j, w = int(i), int(j), float(w)
            if not (0 <= i < self.n_nodes and 0 <= j < self.n_nodes):
                raise NodeIndexError(f"edge ({i}, {j}) outside 0..{self.n_nodes - 1}")
            if i == j:
                raise SelfLoopError(f"self-loop at node {i}")
            if not (w > 0 and np.isfinite(w)):
                raise GraphError(f"edge ({i}, {j}) has non-positive weight {w}")
            key = (i, j) if self.directed else (min(i, j), max(i, j))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge ({i}, {j})")
            seen.add(key)
            clean.append((i, j, w))
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        object.__setattr__(self, "edges", tuple(clean))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable, directed: bool = False) -> "Graph":
        return cls(n_nodes, tuple(edges), directed)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> list[int]:
        """Nodes adjacent to ``i``; for directed graphs, the in-neighbours."""
        A = adjacency_sparse(self)
        row = A.getrow(i)
        return sorted(int(j) for j in row.indices)


def adjacency_sparse(g: Graph) -> sparse.csr_matrix:
    n = g.n_nodes
    if not g.edges:
        return sparse.csr_matrix((n, n))
    src = np.array([e[0] for e in g.edges], dtype=np.int64)
    dst = np.array([e[1] for e in g.edges], dtype=np.int64)
    w = np.array([e[2] for e in g.edges], dtype=float)
    if g.directed:
        rows, cols, vals = dst, src, w
    else:
        rows = np.concatenate([dst, src])
        cols = np.concatenate([src, dst])
        vals = np.concatenate([w, w])
    A = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    A.sort_indices()
    return A


def representation_sparse(g: Graph, kind: "Representation | str") -> sparse.csr_matrix:
    """Sparse form of :func:`representation_matrix` (used by the kernels)."""
    kind = Representation.parse(kind)
    A = adjacency_sparse(g)
    if kind is Representation.ADJACENCY:
        return A
    deg = np.asarray(A.sum(axis=1)).ravel()
    L = (sparse.diags(deg) - A).tocsr()
    if kind is Representation.LAPLACIAN:
        L.sort_indices()
        return L
    # zero-degree nodes keep a zero row and column
    inv_sqrt = np.zeros_like(deg)
    nz = deg > 0
    inv_sqrt[nz] = 1.0 / np.sqrt(deg[nz])
    D = sparse.diags(inv_sqrt)
    Nm = (D @ L @ D).tocsr()
    Nm.eliminate_zeros()
    Nm.sort_indices()
    return Nm


def representation_matrix(g: Graph, kind: "Representation | str") -> np.ndarray:
    """Dense adjacency, Laplacian ``D - A`` or normalized Laplacian
    ``D^{-1/2} (D - A) D^{-1/2}`` of ``g``."""
    return representation_sparse(g, kind).toarray()


def ring_graph(T: int) -> Graph:
    """Directed cycle ``0 -> 1 -> ... -> T-1 -> 0`` modelling periodic time.

    ``T = 1`` gives a single node without edges, so its Laplacian is ``[0]``.
    """
    T = int(T)
    if T < 1:
        raise GraphError("period must be at least 1")
    if T == 1:
        return Graph(1, (), directed=True)
    return Graph(T, tuple((t, (t + 1) % T, 1.0) for t in range(T)), directed=True)


def ring_laplacian(T: int) -> np.ndarray:
    return representation_matrix(ring_graph(T), Representation.LAPLACIAN)


def kronecker_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``I ⊗ b + a ⊗ I``; argument order matches ``L_J = L_T ⊕ L_G``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"kronecker_sum needs square inputs, got {a.shape} and {b.shape}")
    return np.kron(np.eye(a.shape[0]), b) + np.kron(a, np.eye(b.shape[0]))


def joint_index(n: int, t: int, n_nodes: int) -> int:
    """Position of node ``n`` at time ``t`` in the column-stacked ``vec(X)``."""
    return t * n_nodes + n


def joint_graph(g: Graph, T: int) -> Graph:
    """Cartesian product of ``g`` with the ring of period ``T``.

    The result mixes undirected copy edges with directed temporal arcs, so it
    is returned as a directed graph that stores every copy edge in both
    directions. Temporal arcs ``(n, t) -> (n, t+1 mod T)`` carry weight 1
    regardless of the weights of ``g``.
    """
    if g.directed:
        raise GraphError("joint_graph expects an undirected input graph")
    T = int(T)
    N = g.n_nodes
    arcs = []
    for t in range(T):
        for i, j, w in g.edges:
            a, b = joint_index(i, t, N), joint_index(j, t, N)
            arcs.append((a, b, w))
            arcs.append((b, a, w))
    for ti, tj, _ in ring_graph(T).edges:
        for n in range(N):
            arcs.append((joint_index(n, ti, N), joint_index(n, tj, N), 1.0))
    return Graph(N * T, tuple(arcs), directed=True)


def is_symmetric(M: np.ndarray, rtol: float = 1e-12) -> bool:
    M = np.asarray(M)
    scale = max(np.abs(M).max(initial=0.0), 1.0)
    return bool(np.abs(M - M.conj().T).max(initial=0.0) <= rtol * scale)

