"""Association solutions: decoding continuous positions, objective, constraints, oracle.

A position vector has one entry per UE in ``[0, N_b]``; ``floor`` of the entry
names the candidate BS (the value ``N_b`` itself maps to the last BS). A UE is
admitted when its rate to the candidate meets its demand and the BS still has
fraction budget for ``c = R_min / r``. UEs are visited in ascending index
order, so the first comers win when a BS budget binds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from thzassoc.channel import LinkBudgetParams, rate_matrix
from thzassoc.errors import ParameterError, SizeError
from thzassoc.scenario import TWO_PI, Topology

EXHAUSTIVE_LIMIT = 10**7
BUDGET_TOL = 1e-9


@dataclass
class AssociationSolution:
    psi: np.ndarray  # (N_b, N_u) in {0, 1}
    fractions: np.ndarray  # (N_b, N_u) in [0, 1]
    rates: np.ndarray  # (N_b, N_u) bit/s
    utility: float  # bit/s
    position: np.ndarray | None = field(default=None, compare=False)

    @property
    def assigned_bs(self) -> list[int | None]:
        """Serving BS per UE, None when unserved."""
        out: list[int | None] = []
        for col in self.psi.T:
            hit = np.flatnonzero(col)
            out.append(int(hit[0]) if hit.size else None)
        return out

    @property
    def served_fraction(self) -> float:
        return float(np.mean(self.psi.sum(axis=0) == 1))

    def to_records(self) -> list[dict[str, Any]]:
        records = []
        for j, i in enumerate(self.assigned_bs):
            if i is None:
                records.append({"ue_id": j, "bs_id": None, "fraction": 0.0, "rate_bps": 0.0})
            else:
                records.append({
                    "ue_id": j,
                    "bs_id": i,
                    "fraction": float(self.fractions[i, j]),
                    "rate_bps": float(self.rates[i, j]),
                })
        return records


class SolveResult(NamedTuple):
    solution: AssociationSolution
    trace: np.ndarray  # best-so-far utility per generation, bit/s


def candidate_indices(positions: np.ndarray, n_bs: int) -> np.ndarray:
    clipped = np.clip(positions, 0.0, float(n_bs))
    return np.minimum(np.floor(clipped).astype(np.int64), n_bs - 1)


def decode_batch(positions: np.ndarray, rates: np.ndarray, demands: np.ndarray):
    """Decode a population at once.

    Returns ``(assign, frac, utility)``: per-row serving BS index (-1 when
    rejected), the fraction granted to each UE, and the objective per row.
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    n_bs, n_ue = rates.shape
    if positions.shape[1] != n_ue:
        raise ParameterError(f"position length {positions.shape[1]} != number of UEs {n_ue}")
    n_pop = positions.shape[0]
    cand = candidate_indices(positions, n_bs)
    rows = np.arange(n_pop)
    used = np.zeros((n_pop, n_bs))
    assign = np.full((n_pop, n_ue), -1, dtype=np.int64)
    frac = np.zeros((n_pop, n_ue))
    gained = np.zeros((n_pop, n_ue))
    for j in range(n_ue):
        bs = cand[:, j]
        r = rates[bs, j]
        ok = r >= demands[j]
        c = np.divide(demands[j], r, out=np.full(n_pop, np.inf), where=ok)
        ok &= used[rows, bs] + c <= 1.0
        if not ok.any():
            continue
        used[rows[ok], bs[ok]] += c[ok]
        assign[ok, j] = bs[ok]
        frac[ok, j] = c[ok]
        gained[ok, j] = r[ok] * c[ok]
    return assign, frac, gained.sum(axis=1)


def build_solution(assign: np.ndarray, frac: np.ndarray, rates: np.ndarray, utility: float,
                   position: np.ndarray | None = None) -> AssociationSolution:
    n_bs, n_ue = rates.shape
    psi = np.zeros((n_bs, n_ue), dtype=np.int8)
    fractions = np.zeros((n_bs, n_ue))
    cols = np.flatnonzero(assign >= 0)
    psi[assign[cols], cols] = 1
    fractions[assign[cols], cols] = frac[cols]
    return AssociationSolution(psi, fractions, rates, float(utility), position)


def decode(position, topology: Topology, params: LinkBudgetParams,
           rates: np.ndarray | None = None) -> AssociationSolution:
    """Turn one position vector into a feasible (psi, C) pair."""
    if rates is None:
        rates = rate_matrix(topology, params)
    pos = np.clip(np.asarray(position, dtype=float).ravel(), 0.0, float(topology.n_bs))
    assign, frac, util = decode_batch(pos[None, :], rates, topology.demands())
    return build_solution(assign[0], frac[0], rates, util[0], pos)


def evaluate_objective(solution: AssociationSolution) -> float:
    """Sum of r_ij * c_ij over all pairs."""
    return float(np.sum(solution.rates * solution.fractions))


@dataclass(frozen=True)
class Violation:
    constraint: str
    index: tuple[int, ...]
    detail: str


def check_constraints(solution: AssociationSolution, topology: Topology) -> list[Violation]:
    """Every violated constraint with its indices; empty when feasible.

    C2 is checked in relaxed form (at most one serving BS per UE) because a
    UE whose demand no BS can meet must stay unserved under C4.
    """
    psi, c, r = solution.psi, solution.fractions, solution.rates
    shape = (topology.n_bs, topology.n_ue)
    if psi.shape != shape or c.shape != shape or r.shape != shape:
        raise ParameterError(f"solution shape does not match topology {shape}")
    out: list[Violation] = []

    for i, total in enumerate(c.sum(axis=1)):
        if total > 1.0 + BUDGET_TOL:
            out.append(Violation("C1", (i,), f"BS {i} fraction sum {total:.6g} > 1"))
    for j, k in enumerate(psi.sum(axis=0)):
        if k > 1:
            out.append(Violation("C2", (j,), f"UE {j} associated to {int(k)} BSs"))
    for i, j in zip(*np.nonzero((psi != 0) & (psi != 1))):
        out.append(Violation("C3", (int(i), int(j)), f"psi[{i},{j}] = {psi[i, j]} not binary"))
    for i, j in zip(*np.nonzero((c < 0) | (c > psi))):
        out.append(Violation("C3", (int(i), int(j)), f"c[{i},{j}] = {c[i, j]:.6g} outside [0, psi]"))
    demands = topology.demands()
    for i, j in zip(*np.nonzero((psi == 1) & (r < demands[None, :]))):
        out.append(Violation("C4", (int(i), int(j)), f"UE {j} on BS {i} below its minimum rate"))
    for b in topology.base_stations:
        if not 0.0 <= b.boresight <= TWO_PI:
            out.append(Violation("C5", (b.id,), "BS boresight outside [0, 2pi]"))
    for u in topology.users:
        if not 0.0 <= u.boresight <= TWO_PI:
            out.append(Violation("C6", (u.id,), "UE boresight outside [0, 2pi]"))

    recomputed = evaluate_objective(solution)
    if not math.isclose(recomputed, solution.utility, rel_tol=1e-9, abs_tol=1e-6):
        out.append(Violation("utility", (), f"cached {solution.utility:.9g} != recomputed {recomputed:.9g}"))
    return out


def exhaustive_search(topology: Topology, params: LinkBudgetParams,
                      chunk: int = 1 << 15) -> AssociationSolution:
    """Best decoded solution over all N_b ** N_u candidate assignments.

    Ties go to the lexicographically smallest assignment.
    """
    n_bs, n_ue = topology.n_bs, topology.n_ue
    total = n_bs**n_ue
    if total > EXHAUSTIVE_LIMIT:
        raise SizeError(f"{n_bs}^{n_ue} = {total} assignments exceeds the limit {EXHAUSTIVE_LIMIT}")
    rates = rate_matrix(topology, params)
    demands = topology.demands()
    # most significant digit = UE 0, so enumeration order is lexicographic
    weights = n_bs ** np.arange(n_ue - 1, -1, -1, dtype=np.int64)
    best_util, best_pos = -1.0, None
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (codes[:, None] // weights[None, :]) % n_bs
        positions = digits + 0.5
        _, _, util = decode_batch(positions, rates, demands)
        k = int(np.argmax(util))
        if util[k] > best_util:
            best_util, best_pos = float(util[k]), positions[k]
    return decode(best_pos, topology, params, rates)
