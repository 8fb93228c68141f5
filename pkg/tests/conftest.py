import itertools

import numpy as np
import pytest

from hyperlearn import kernels
from hyperlearn.model import Hypergraph

BACKENDS = ["python"]
try:
    from hyperlearn.kernels import _core  # noqa: F401

    BACKENDS.append("cython")
except ImportError:
    pass


@pytest.fixture(params=BACKENDS)
def backend(request):
    before = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(before)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hypergraph(rng, n, k, q):
    edges = [h for h in itertools.combinations(range(n), k) if rng.random() < q]
    return Hypergraph(n, k, frozenset(edges))


def brute_contains(g, s):
    return int(any(all(s[v] for v in h) for h in g.edges))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.REPORT:
        terminalreporter.section("acceptance criteria")
        for i in sorted(test_acceptance.REPORT):
            terminalreporter.write_line(test_acceptance.REPORT[i])
