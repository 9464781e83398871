"""Egalitarian repeated matching: exact and approximate solvers with a brute-force oracle."""

from .core import (
    Allocation,
    Dominance,
    EgalMatchError,
    Instance,
    InstanceClassError,
    InvalidInstanceError,
    InvariantError,
    LimitExceededError,
    SolveResult,
    bottleneck,
    evaluate,
    pad_agents,
    pad_goods,
    pareto_dominates,
)
from .algorithms import ALGORITHMS, solve

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "Allocation",
    "Dominance",
    "EgalMatchError",
    "Instance",
    "InstanceClassError",
    "InvalidInstanceError",
    "InvariantError",
    "LimitExceededError",
    "SolveResult",
    "bottleneck",
    "evaluate",
    "pad_agents",
    "pad_goods",
    "pareto_dominates",
    "solve",
]
