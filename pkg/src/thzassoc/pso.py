"""Global-best particle swarm baseline over the same position encoding as GWO."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from thzassoc.association import SolveResult, decode, decode_batch
from thzassoc.channel import LinkBudgetParams, rate_matrix
from thzassoc.errors import ParameterError
from thzassoc.scenario import Topology


@dataclass(frozen=True)
class PSOParams:
    inertia: float = 0.7298
    c1: float = 1.49618  # cognitive
    c2: float = 1.49618  # social
    vmax_frac: float = 0.5  # v_max = vmax_frac * N_b

    def __post_init__(self):
        for key in ("inertia", "c1", "c2"):
            if getattr(self, key) < 0:
                raise ParameterError(f"{key} must be >= 0", key=f"solver.pso_{key}")
        if not self.vmax_frac > 0:
            raise ParameterError("vmax_frac must be positive", key="solver.pso_vmax_frac")


@dataclass
class ParticleState:
    positions: np.ndarray  # (N_p, N_u)
    velocities: np.ndarray
    pbest: np.ndarray
    pbest_fitness: np.ndarray
    gbest: np.ndarray
    gbest_fitness: float
    generation: int


def pso_optimize(
    topology: Topology,
    params: LinkBudgetParams,
    pop_size: int = 200,
    g_max: int = 150,
    seed: int = 0,
    pso: PSOParams | None = None,
    on_generation: Callable[[ParticleState], None] | None = None,
) -> SolveResult:
    """v <- w v + c1 r1 (pbest - x) + c2 r2 (gbest - x), |v| <= v_max, x clamped to [0, N_b]."""
    if pop_size < 2:
        raise ParameterError("pop_size must be >= 2", key="solver.pop_size")
    if g_max < 1:
        raise ParameterError("g_max must be >= 1", key="solver.g_max")
    pso = pso or PSOParams()

    rates = rate_matrix(topology, params)
    demands = topology.demands()
    n_bs, n_ue = topology.n_bs, topology.n_ue
    vmax = pso.vmax_frac * n_bs
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(pop_size)]

    x = np.stack([g.uniform(0.0, n_bs, n_ue) for g in streams])
    v = np.stack([g.uniform(-vmax, vmax, n_ue) for g in streams])
    _, _, fit = decode_batch(x, rates, demands)
    pbest, pbest_fit = x.copy(), fit.copy()
    g = int(np.argmax(pbest_fit))  # first index on ties
    state = ParticleState(x, v, pbest, pbest_fit, pbest[g].copy(), float(pbest_fit[g]), 0)
    trace = [state.gbest_fitness]
    if on_generation is not None:
        on_generation(state)

    for gen in range(1, g_max + 1):
        r1 = np.stack([s.random(n_ue) for s in streams])
        r2 = np.stack([s.random(n_ue) for s in streams])
        v = (pso.inertia * v
             + pso.c1 * r1 * (pbest - x)
             + pso.c2 * r2 * (state.gbest[None, :] - x))
        v = np.clip(v, -vmax, vmax)
        x = np.clip(x + v, 0.0, float(n_bs))
        _, _, fit = decode_batch(x, rates, demands)

        improved = fit > pbest_fit
        pbest[improved] = x[improved]
        pbest_fit[improved] = fit[improved]
        g = int(np.argmax(pbest_fit))
        if pbest_fit[g] > state.gbest_fitness:
            state.gbest, state.gbest_fitness = pbest[g].copy(), float(pbest_fit[g])
        state.positions, state.velocities, state.generation = x, v, gen
        trace.append(state.gbest_fitness)
        if on_generation is not None:
            on_generation(state)

    best = decode(state.gbest, topology, params, rates)
    return SolveResult(best, np.array(trace))
