"""Grey Wolf Optimizer over association position vectors.

Each wolf moves to the mean of three points pulled from the alpha, beta and
delta leaders::

    D = |K * leader - x|,   A = a (2 f1 - 1),   K = 2 f2
    x_new = mean over leaders of (leader - A * D)

with fresh uniform f1, f2 per dimension, per leader, per wolf, per generation
and ``a`` decreasing linearly from 2 to 0. The only tunables are the
population size and the number of generations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from thzassoc.association import SolveResult, decode, decode_batch
from thzassoc.channel import LinkBudgetParams, rate_matrix
from thzassoc.errors import ParameterError
from thzassoc.scenario import Topology


@dataclass
class SwarmState:
    positions: np.ndarray  # (N_p, N_u)
    fitness: np.ndarray  # (N_p,)
    leaders: np.ndarray  # (3, N_u): alpha, beta, delta
    leader_fitness: np.ndarray  # (3,)
    generation: int
    control_a: float

    @property
    def alpha(self) -> tuple[np.ndarray, float]:
        return self.leaders[0], float(self.leader_fitness[0])

    @property
    def beta(self) -> tuple[np.ndarray, float]:
        return self.leaders[1], float(self.leader_fitness[1])

    @property
    def delta(self) -> tuple[np.ndarray, float]:
        return self.leaders[2], float(self.leader_fitness[2])


def control_schedule(generation: int, g_max: int) -> float:
    if g_max < 1 or not 0 <= generation <= g_max:
        raise ParameterError(f"need 0 <= generation <= g_max and g_max >= 1, got {generation}, {g_max}")
    return 2.0 * (1.0 - generation / g_max)


def wolf_update(current, leaders, a: float, rng, bounds: tuple[float, float] | None = None) -> np.ndarray:
    """New position for one wolf given the (alpha, beta, delta) leaders.

    ``rng`` only needs a numpy-style ``random(size)``; f1 is drawn before f2,
    each with shape (3, n). ``bounds=None`` returns the unclamped position.
    """
    x = np.asarray(current, dtype=float)
    lead = np.asarray(leaders, dtype=float)
    if lead.shape != (3,) + x.shape:
        raise ParameterError(f"leaders shape {lead.shape} does not match 3 x {x.shape}")
    if a < 0:
        raise ParameterError("control scalar a must be >= 0")
    f1 = np.asarray(rng.random(lead.shape), dtype=float)
    f2 = np.asarray(rng.random(lead.shape), dtype=float)
    A = a * (2.0 * f1 - 1.0)
    K = 2.0 * f2
    D = np.abs(K * lead - x)
    new = (lead - A * D).sum(axis=0) / 3.0
    if bounds is not None:
        new = np.clip(new, bounds[0], bounds[1])
    return new


def _rank(fitness: np.ndarray) -> np.ndarray:
    # stable descending sort: equal fitness keeps the lower index first
    return np.argsort(-fitness, kind="stable")


def gwo_optimize(
    topology: Topology,
    params: LinkBudgetParams,
    pop_size: int = 200,
    g_max: int = 150,
    seed: int = 0,
    on_generation: Callable[[SwarmState], None] | None = None,
) -> SolveResult:
    """Maximise the association utility with GWO.

    Returns the best solution ever held by the alpha and the best-so-far
    trace (length ``g_max + 1``, entry 0 is the initial population). Leaders
    are drawn from the incumbents plus the updated pack; an incumbent is only
    displaced by a strictly better wolf.
    """
    if pop_size < 4:
        raise ParameterError("pop_size must be >= 4", key="solver.pop_size")
    if g_max < 1:
        raise ParameterError("g_max must be >= 1", key="solver.g_max")

    rates = rate_matrix(topology, params)
    demands = topology.demands()
    n_bs, n_ue = topology.n_bs, topology.n_ue
    bounds = (0.0, float(n_bs))
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(pop_size)]

    positions = np.stack([g.uniform(0.0, n_bs, n_ue) for g in streams])
    _, _, fitness = decode_batch(positions, rates, demands)
    top = _rank(fitness)[:3]
    state = SwarmState(positions, fitness, positions[top].copy(), fitness[top].copy(), 0, 2.0)
    trace = [float(state.leader_fitness[0])]
    if on_generation is not None:
        on_generation(state)

    for gen in range(1, g_max + 1):
        a = control_schedule(gen - 1, g_max)
        positions = np.stack([
            wolf_update(positions[k], state.leaders, a, streams[k], bounds) for k in range(pop_size)
        ])
        _, _, fitness = decode_batch(positions, rates, demands)

        pool = np.concatenate([state.leaders, positions])
        pool_fit = np.concatenate([state.leader_fitness, fitness])
        top = _rank(pool_fit)[:3]
        state = SwarmState(positions, fitness, pool[top].copy(), pool_fit[top].copy(), gen, a)
        trace.append(float(state.leader_fitness[0]))
        if on_generation is not None:
            on_generation(state)

    best = decode(state.leaders[0], topology, params, rates)
    return SolveResult(best, np.array(trace))
