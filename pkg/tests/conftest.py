import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_simplex(rng, n):
    return rng.dirichlet(np.ones(n))


def random_channel_matrix(rng, n_in, n_out):
    """Column-stochastic ``n_out x n_in`` matrix."""
    return rng.dirichlet(np.ones(n_out), size=n_in).T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for the terminal summary."""

    def record(name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" -- {detail}" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
