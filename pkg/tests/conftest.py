import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import make_graph  # noqa: E402

S, A, D = 0, 1, 2


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def line_graph():
    # s - a - d
    return make_graph({(0, 1): 1.0, (1, 2): 1.0})


@pytest.fixture
def triangle():
    # s-a 1, a-d 1, s-d 5
    return make_graph({(0, 1): 1.0, (1, 2): 1.0, (0, 2): 5.0})


ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one ``PASS``/``FAIL`` line for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, [])

    def emit(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
