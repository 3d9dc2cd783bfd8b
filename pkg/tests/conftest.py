import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mwtree import load_example, validate  # noqa: E402


def scalar_tree(n, pairs, weights=None):
    """Tree with 1x1 weights from 1-based pairs (unit weights by default)."""
    weights = weights if weights is not None else [1.0] * len(pairs)
    return validate(n, [(u, v, np.array([[w]], dtype=float)) for (u, v), w in zip(pairs, weights)], s=1)


def star(k):
    """K_{1,k} with centre 1."""
    return scalar_tree(k + 1, [(1, j) for j in range(2, k + 2)])


def path(n, weights=None):
    return scalar_tree(n, [(i, i + 1) for i in range(1, n)], weights)


@pytest.fixture(scope="session")
def t1():
    return load_example("t1")


@pytest.fixture(scope="session")
def t2():
    return load_example("t2")


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
