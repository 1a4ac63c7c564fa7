"""Dynamic-cell user association for ultra-dense THz networks.

Link-budget channel model, the constrained utility-maximisation problem,
Grey Wolf and particle swarm solvers over a shared decoding, an exhaustive
oracle, and a beacon-interval initial-access simulator.
"""

from thzassoc.errors import ParameterError, SizeError
from thzassoc.scenario import (
    BaseStationNode,
    Topology,
    UserNode,
    generate_topology,
    load_scenario_preset,
)
from thzassoc.channel import LinkBudgetParams, achievable_rate, fspl_db, mal_db
from thzassoc.association import (
    AssociationSolution,
    check_constraints,
    decode,
    evaluate_objective,
    exhaustive_search,
)
from thzassoc.gwo import control_schedule, gwo_optimize, wolf_update
from thzassoc.pso import PSOParams, pso_optimize

__version__ = "0.1.0"

__all__ = [
    "AssociationSolution",
    "BaseStationNode",
    "LinkBudgetParams",
    "PSOParams",
    "ParameterError",
    "SizeError",
    "Topology",
    "UserNode",
    "achievable_rate",
    "check_constraints",
    "control_schedule",
    "decode",
    "evaluate_objective",
    "exhaustive_search",
    "fspl_db",
    "generate_topology",
    "gwo_optimize",
    "load_scenario_preset",
    "mal_db",
    "pso_optimize",
    "wolf_update",
]
