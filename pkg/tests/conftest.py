import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tourney.graph import Digraph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def tournaments(draw, min_n=1, max_n=9):
    """Arbitrary tournament: one bit per unordered pair."""
    n = draw(st.integers(min_n, max_n))
    iu, ju = np.triu_indices(n, k=1)
    bits = draw(st.lists(st.booleans(), min_size=iu.size, max_size=iu.size))
    fwd = np.array(bits, dtype=bool)
    adj = np.zeros((n, n), dtype=bool)
    adj[iu[fwd], ju[fwd]] = True
    adj[ju[~fwd], iu[~fwd]] = True
    return Digraph(adj)


@st.composite
def oriented_graphs(draw, min_n=1, max_n=9):
    """Each unordered pair is absent, forward or backward."""
    n = draw(st.integers(min_n, max_n))
    iu, ju = np.triu_indices(n, k=1)
    states = draw(st.lists(st.integers(0, 2), min_size=iu.size, max_size=iu.size))
    adj = np.zeros((n, n), dtype=bool)
    for a, b, s in zip(iu, ju, states):
        if s == 1:
            adj[a, b] = True
        elif s == 2:
            adj[b, a] = True
    return Digraph(adj)


@pytest.fixture
def triangle():
    return Digraph([[0, 1, 0], [0, 0, 1], [1, 0, 0]])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
