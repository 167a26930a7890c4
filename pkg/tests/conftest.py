import numpy as np
import pytest

from geoverify.expr import parse
from geoverify.harness import load_fixture
from geoverify.tensors import MetricField

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = {}


def record(number, ok, detail=""):
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def metric(rows, coords):
    return MetricField.from_rows([[parse(str(v), coords) for v in r] for r in rows])


def euclidean(n):
    coords = [f"x{i}" for i in range(n)]
    return metric(np.eye(n).astype(int).tolist(), coords), coords


@pytest.fixture(scope="session")
def example2():
    return load_fixture("example2-r3")


@pytest.fixture(scope="session")
def example2_para():
    return load_fixture("example2-para-r3")


@pytest.fixture(scope="session")
def points3():
    return np.random.default_rng(7).uniform(-1, 1, (50, 3))
