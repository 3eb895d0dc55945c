"""Solvers for stable matching problems with a designated deviator set.

Only the deviators must end up free of blocking pairs; the question is
whether a matching (unrestricted, maximum-cardinality, or perfect) exists
whose deviator-side instability stays within a budget, or how small that
instability can get.
"""

from .core import (
    BlockingReport,
    DeviatorProblem,
    Instance,
    InstanceError,
    Matching,
    Objective,
    SizeRegime,
    SolveOutcome,
    VerificationError,
    blocking_report,
    objective_value,
    validate_instance,
    verify_solution,
)
from .classic import (
    WeightedGraph,
    gale_shapley,
    irving_sr,
    max_cardinality_matching,
    max_cardinality_size,
    max_weight_matching,
)
from .fpt import optimize_fpt, solve_bipartite_restriction, solve_fpt
from .generators import GenModel, GenSpec, generate
from .oracle import OracleReport, enumerate_matchings, oracle_solve
from .shortlist import decompose, solve_shortlist_any, solve_shortlist_max

__all__ = [
    "BlockingReport",
    "DeviatorProblem",
    "GenModel",
    "GenSpec",
    "Instance",
    "InstanceError",
    "Matching",
    "Objective",
    "OracleReport",
    "SizeRegime",
    "SolveOutcome",
    "VerificationError",
    "WeightedGraph",
    "blocking_report",
    "decompose",
    "enumerate_matchings",
    "gale_shapley",
    "generate",
    "irving_sr",
    "max_cardinality_matching",
    "max_cardinality_size",
    "max_weight_matching",
    "objective_value",
    "optimize_fpt",
    "oracle_solve",
    "solve_bipartite_restriction",
    "solve_fpt",
    "solve_shortlist_any",
    "solve_shortlist_max",
    "validate_instance",
    "verify_solution",
]
