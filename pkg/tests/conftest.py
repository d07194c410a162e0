import numpy as np
import pytest
from scipy.linalg import expm

from ptesd.states import symplectic_form

ACCEPTANCE_LINES: list[str] = []


def random_physical_cm(rng, n_modes=2, spread=0.7):
    """``S diag(nu) S^T`` with ``S = exp(Omega K)`` for random symmetric ``K``."""
    K = rng.normal(scale=spread, size=(2 * n_modes, 2 * n_modes))
    S = expm(symplectic_form(n_modes) @ (K + K.T) / 2)
    nu = 0.5 + rng.exponential(0.5, size=n_modes)
    V = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return 0.5 * (V + V.T), np.sort(nu)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per criterion, printed in the terminal summary."""
    def report(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
