import numpy as np
import pytest

from thzassoc.channel import LinkBudgetParams
from thzassoc.scenario import BaseStationNode, Topology, UserNode


@pytest.fixture
def ref_params():
    return LinkBudgetParams(carrier_frequency=300e9, bandwidth=1e9, theta_db=120.0)


def line_topology(bs_x, ue_x, demands, radius=1000.0):
    """BSs and UEs on the x axis; handy for hand-checkable distances."""
    bss = tuple(BaseStationNode(i, float(x), 0.0) for i, x in enumerate(bs_x))
    ues = tuple(UserNode(j, float(x), 0.0, float(d)) for j, (x, d) in enumerate(zip(ue_x, demands)))
    return Topology(bss, ues, radius)


def solution_from_rates(rates, demands, position):
    from thzassoc.association import build_solution, decode_batch

    rates = np.asarray(rates, dtype=float)
    assign, frac, util = decode_batch(np.asarray(position, dtype=float)[None, :], rates, np.asarray(demands, dtype=float))
    return build_solution(assign[0], frac[0], rates, util[0])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
