import os

import numpy as np
import pytest
from hypothesis import settings


from qmbs import _kernels
from qmbs.bigraph import TOY_GRAPH, BipartiteGraph, gen_synthetic

# first calls pay numba compile time
settings.register_profile("jit", deadline=None)
settings.load_profile("jit")

BACKENDS = ["numpy", "numba"] if _kernels.HAVE_NUMBA else ["numpy"]

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def toy():
    return TOY_GRAPH


@pytest.fixture(params=BACKENDS)
def kernel_backend(request):
    with _kernels.backend(request.param):
        yield request.param


@pytest.fixture
def highmem():
    if os.environ.get("QMBS_HIGHMEM") != "1":
        pytest.skip("set QMBS_HIGHMEM=1 to run 28-qubit dense simulations")


def small_graphs(max_n=6, count=50, seed=0):
    """Seeded random graphs with 2 <= n <= max_n and random density."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        left = int(rng.integers(1, n))
        right = n - left
        m = int(rng.integers(0, left * right + 1))
        out.append(gen_synthetic(left, right, m, int(rng.integers(1 << 30))))
    return out


def all_graphs(left, right):
    """Every bipartite graph on a fixed left x right vertex set."""
    pairs = [(i, j) for i in range(1, left + 1) for j in range(1, right + 1)]
    for bits in range(1 << len(pairs)):
        yield BipartiteGraph(left, right, frozenset(p for b, p in enumerate(pairs) if bits >> b & 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
