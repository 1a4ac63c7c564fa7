import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import line_topology, solution_from_rates
from thzassoc.association import (
    AssociationSolution,
    candidate_indices,
    check_constraints,
    decode,
    evaluate_objective,
    exhaustive_search,
)
from thzassoc.channel import LinkBudgetParams, fspl_db, rate_matrix
from thzassoc.errors import ParameterError, SizeError
from thzassoc.scenario import generate_topology

G = 1e9


def reference_decode(position, rates, demands):
    """Plain-loop admission rule, written independently of the vectorised decoder."""
    n_bs, n_ue = rates.shape
    budget = [1.0] * n_bs
    served = {}
    for j in range(n_ue):
        i = min(int(math.floor(min(max(position[j], 0.0), n_bs))), n_bs - 1)
        r = rates[i, j]
        if r >= demands[j]:
            c = demands[j] / r
            if c <= budget[i] - 0.0 and (1.0 - budget[i]) + c <= 1.0:
                budget[i] -= c
                served[j] = (i, c)
    return served


def test_floor_decoding():
    assert candidate_indices(np.array([0.4, 1.7]), 2).tolist() == [0, 1]
    assert candidate_indices(np.array([2.0, 0.0, -3.0, 9.0]), 2).tolist() == [1, 0, 0, 1]


def test_single_ue_admitted_with_minimal_fraction():
    sol = solution_from_rates([[10 * G]], [4 * G], [0.5])
    assert sol.psi.tolist() == [[1]]
    assert sol.fractions[0, 0] == pytest.approx(0.4)
    assert sol.utility == pytest.approx(4 * G)
    assert evaluate_objective(sol) == pytest.approx(4 * G)


def test_single_ue_rejected_below_demand():
    sol = solution_from_rates([[3 * G]], [4 * G], [0.5])
    assert sol.psi.sum() == 0 and sol.utility == 0.0
    assert check_constraints(sol, line_topology([0], [1], [4 * G])) == []


def test_budget_binds_first_come_first_served():
    # each UE needs c = 6/10 = 0.6; the second would push the BS to 1.2
    sol = solution_from_rates([[10 * G, 10 * G]], [6 * G, 6 * G], [0.1, 0.9])
    assert sol.psi.tolist() == [[1, 0]]
    assert sol.utility == pytest.approx(6 * G)


def test_objective_sums_admitted_demands():
    sol = solution_from_rates([[10 * G, 0.0], [0.0, 12 * G]], [2 * G, 3 * G], [0.2, 1.5])
    assert sol.assigned_bs == [0, 1]
    assert evaluate_objective(sol) == pytest.approx(5 * G)
    empty = solution_from_rates([[1.0, 1.0]], [2 * G, 3 * G], [0.0, 0.0])
    assert evaluate_objective(empty) == 0.0


def test_decode_through_channel():
    # theta chosen so the rate at 2 m is 10 Gbit/s exactly: SNR = 2^10 - 1
    theta = fspl_db(300e9, 2.0) + 10 * math.log10(1023)
    params = LinkBudgetParams(theta_db=theta)
    topo = line_topology([0.0], [2.0], [4 * G])
    sol = decode([0.3], topo, params)
    assert sol.rates[0, 0] == pytest.approx(10 * G, rel=1e-9)
    assert sol.fractions[0, 0] == pytest.approx(0.4, rel=1e-9)
    assert sol.utility == pytest.approx(4 * G, rel=1e-9)
    assert sol.served_fraction == 1.0


def test_length_mismatch():
    topo = line_topology([0.0], [2.0, 3.0], [G, G])
    with pytest.raises(ParameterError):
        decode([0.3], topo, LinkBudgetParams())


def test_constructed_violations():
    topo = line_topology([0.0, 5.0], [1.0, 2.0], [G, G])
    rates = np.full((2, 2), 10 * G)
    psi = np.array([[1, 0], [0, 0]], dtype=np.int8)
    c = np.array([[0.1, 0.5], [0.0, 0.0]])
    sol = AssociationSolution(psi, c, rates, float(np.sum(rates * c)))
    report = check_constraints(sol, topo)
    assert [(v.constraint, v.index) for v in report] == [("C3", (0, 1))]

    c = np.array([[0.7, 0.5], [0.0, 0.0]])
    psi = np.array([[1, 1], [0, 0]], dtype=np.int8)
    sol = AssociationSolution(psi, c, rates, float(np.sum(rates * c)))
    assert [(v.constraint, v.index) for v in check_constraints(sol, topo)] == [("C1", (0,))]

    psi = np.array([[1, 0], [1, 0]], dtype=np.int8)
    c = np.array([[0.1, 0.0], [0.1, 0.0]])
    low = rates.copy()
    low[1, 0] = 0.5 * G
    sol = AssociationSolution(psi, c, low, float(np.sum(low * c)))
    kinds = sorted(v.constraint for v in check_constraints(sol, topo))
    assert kinds == ["C2", "C4"]


def test_cached_utility_mismatch_reported():
    sol = solution_from_rates([[10 * G]], [4 * G], [0.5])
    sol.utility *= 1.01
    assert [v.constraint for v in check_constraints(sol, line_topology([0], [1], [4 * G]))] == ["utility"]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_decode_matches_reference_and_is_feasible(n_bs, n_ue, seed):
    topo = generate_topology(n_bs, n_ue, 30.0, 1e9, 10e9, seed)
    params = LinkBudgetParams()
    rates = rate_matrix(topo, params)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        pos = rng.uniform(-0.5, n_bs + 0.5, n_ue)
        sol = decode(pos, topo, params)
        assert check_constraints(sol, topo) == []
        ref = reference_decode(pos, rates, topo.demands())
        assert {j: i for j, i in enumerate(sol.assigned_bs) if i is not None} == {j: v[0] for j, v in ref.items()}
        assert sol.utility == pytest.approx(sum(topo.demands()[j] for j in ref), rel=1e-9)
        assert evaluate_objective(sol) == pytest.approx(sol.utility, rel=1e-9)
        again = decode(pos, topo, params)
        assert np.array_equal(again.psi, sol.psi) and np.array_equal(again.fractions, sol.fractions)


def brute_force_best(topo, params):
    """Independent enumeration with itertools and the reference decoder."""
    import itertools

    rates = rate_matrix(topo, params)
    demands = topo.demands()
    best = 0.0
    for combo in itertools.product(range(topo.n_bs), repeat=topo.n_ue):
        served = reference_decode([k + 0.5 for k in combo], rates, demands)
        best = max(best, sum(demands[j] for j in served))
    return best


def test_exhaustive_trivial_cases():
    params = LinkBudgetParams()
    one = line_topology([0.0], [1.0], [G])
    assert exhaustive_search(one, params).assigned_bs == [0]
    # only BS0 is close enough to meet 5 Gbit/s
    forced = line_topology([0.0, 900.0], [1.0], [5 * G])
    assert exhaustive_search(forced, params).assigned_bs == [0]


@pytest.mark.parametrize("seed", range(6))
def test_exhaustive_matches_brute_force(seed):
    params = LinkBudgetParams()
    topo = generate_topology(3, 6, 15.0, 1e9, 10e9, seed)
    best = exhaustive_search(topo, params)
    assert best.utility == pytest.approx(brute_force_best(topo, params), rel=1e-12)
    assert check_constraints(best, topo) == []


def test_oracle_dominates_random_vectors():
    params = LinkBudgetParams()
    rng = np.random.default_rng(4)
    for seed in range(20):
        topo = generate_topology(2, 8, 20.0, 1e9, 10e9, seed)
        best = exhaustive_search(topo, params).utility
        for _ in range(50):
            u = decode(rng.uniform(0, 2, 8), topo, params).utility
            assert u <= best * (1 + 1e-9)


def test_exhaustive_size_guard():
    topo = generate_topology(10, 8, 20.0, 1e9, 10e9, 0)
    with pytest.raises(SizeError):
        exhaustive_search(topo, LinkBudgetParams())


def test_records_export():
    sol = solution_from_rates([[10 * G, 0.0]], [4 * G, G], [0.5, 0.5])
    recs = sol.to_records()
    assert recs[0] == {"ue_id": 0, "bs_id": 0, "fraction": pytest.approx(0.4), "rate_bps": 10 * G}
    assert recs[1]["bs_id"] is None
