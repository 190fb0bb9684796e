import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from minmaxgap.extremal import build_mesh, minimax_Q
from minmaxgap.problems import SpectralSet

settings.register_profile(
    "repo", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

Q_DEGREES = (8, 16, 32)


@pytest.fixture(scope="session")
def unit_halfdisc_mesh():
    return build_mesh(SpectralSet.halfdisc(0.0, 1.0), 8, 0.5, delta=np.pi / 4000)


@pytest.fixture(scope="session")
def q_certificates(unit_halfdisc_mesh):
    """Q-class minimax solves on the unit half-disc, shared by the slow tests."""
    return {T: minimax_Q(unit_halfdisc_mesh, T) for T in Q_DEGREES}


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE = {}


def record(number: int, passed: bool, detail: str) -> bool:
    """Remember and print one acceptance line; returns ``passed`` for asserting."""
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
