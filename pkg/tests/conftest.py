import functools

import numpy as np
import pytest

from flagq.quadrature import su2_product_rule
from flagq.representations import build_irrep
from flagq.weights import Weight


@functools.lru_cache(maxsize=None)
def su2_rep(k: int):
    return build_irrep(Weight((k,)), 2, special=True)


@functools.lru_cache(maxsize=None)
def product_rule(D: int):
    return su2_product_rule(D)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[num])
