import numpy as np
import pytest

from jft import _kernels
from jft.graph import Graph

ACCEPTANCE_LINES = []


def path_graph(n):
    return Graph(n, tuple((i, i + 1, 1.0) for i in range(n - 1)))


def triangle():
    return Graph(3, ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)))


def random_graph(n, p, rng, weighted=False, connected=False):
    """Erdős–Rényi style test graph; ``connected`` adds a spanning path first."""
    edges = {}
    if connected:
        perm = rng.permutation(n)
        for a, b in zip(perm[:-1], perm[1:]):
            edges[(min(a, b), max(a, b))] = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges[(i, j)] = float(rng.integers(1, 4)) if weighted else 1.0
    if weighted:
        edges = {k: float(rng.integers(1, 4)) for k in edges}
    return Graph(n, tuple((int(i), int(j), w) for (i, j), w in sorted(edges.items())))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture(params=["numpy", "numba"] if _kernels.HAVE_NUMBA else ["numpy"])
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
