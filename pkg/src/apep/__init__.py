"""Decide and maximize constrained authorization policies.

The central question: given users, resources, a base relation of permitted
assignments, and constraints over complete assignment relations, does a
valid assignment exist, and how large can it get?  All algorithms are
parameterized by the resource count, never by the user count.
"""

from .matching import WeightedBipartite, max_weight_perfect_matching
from .model import (
    AuthorizationRelation,
    Constraint,
    GlobalCardConstraint,
    Instance,
    LocalCardConstraint,
    PairConstraint,
    SmerConstraint,
    TeamSodConstraint,
    constraint_kind,
    default_resource_names,
    default_user_names,
    eval_constraint,
    indices_of,
    iter_submasks,
    normalize,
    user_independence_witness,
)
from .oracle import (
    DEFAULT_BUDGET,
    CapacityError,
    brute_decide,
    brute_maximize,
    candidate_count,
)
from .reduce import (
    FamilyPartition,
    ReductionTrace,
    TriviallyUnsat,
    WspInstance,
    apply_reduction_rule,
    eliminate_bod_u,
    encode_resiliency,
    from_wsp_plan,
    lift_merged_classes,
    lift_removed_users,
    partition_families,
    replay_trace,
    to_wsp,
)
from .solve import (
    IndexFamily,
    Pattern,
    SolveReport,
    build_index_family,
    dispatch,
    enumerate_eligible_patterns,
    max_sod_e,
    max_sod_u,
    max_weighted_partition,
    max_weighted_partition_fast_value,
    pattern_value,
    solve_bod_e,
    solve_bod_e_sod_u,
    solve_bod_u,
    solve_bounded,
    solve_wsp,
)
from .verify import CoreBound, Verdict, bound_for, check_valid, compute_core, instance_bound

__version__ = "0.1.0"

__all__ = [
    "AuthorizationRelation",
    "CapacityError",
    "Constraint",
    "CoreBound",
    "DEFAULT_BUDGET",
    "FamilyPartition",
    "GlobalCardConstraint",
    "IndexFamily",
    "Instance",
    "LocalCardConstraint",
    "PairConstraint",
    "Pattern",
    "ReductionTrace",
    "SmerConstraint",
    "SolveReport",
    "TeamSodConstraint",
    "TriviallyUnsat",
    "Verdict",
    "WeightedBipartite",
    "WspInstance",
    "apply_reduction_rule",
    "bound_for",
    "brute_decide",
    "brute_maximize",
    "build_index_family",
    "candidate_count",
    "check_valid",
    "compute_core",
    "constraint_kind",
    "default_resource_names",
    "default_user_names",
    "dispatch",
    "eliminate_bod_u",
    "encode_resiliency",
    "enumerate_eligible_patterns",
    "eval_constraint",
    "from_wsp_plan",
    "indices_of",
    "instance_bound",
    "iter_submasks",
    "lift_merged_classes",
    "lift_removed_users",
    "max_sod_e",
    "max_sod_u",
    "max_weight_perfect_matching",
    "max_weighted_partition",
    "max_weighted_partition_fast_value",
    "normalize",
    "partition_families",
    "pattern_value",
    "replay_trace",
    "solve_bod_e",
    "solve_bod_e_sod_u",
    "solve_bod_u",
    "solve_bounded",
    "solve_wsp",
    "to_wsp",
    "user_independence_witness",
]
