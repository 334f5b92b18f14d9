import sys
from pathlib import Path

import pytest

from dqaut.parser import parse_dqdimacs
from dqaut.sat import SolverConfig

import golden

HERE = Path(__file__).parent


def load(text):
    return parse_dqdimacs(text)[0]


@pytest.fixture
def intro():
    return load(golden.INTRO)


@pytest.fixture
def a1_not_e1():
    return load(golden.A1_NOT_E1)


@pytest.fixture
def e1_not_a1():
    return load(golden.E1_NOT_A1)


def pysat_command():
    pytest.importorskip("pysat")
    return [sys.executable, str(HERE / "pysat_solver.py")]


@pytest.fixture
def pysat_cfg():
    return SolverConfig.external(pysat_command())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
