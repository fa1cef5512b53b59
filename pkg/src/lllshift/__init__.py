"""Constraint satisfaction via the Lovász Local Lemma, with certified
correctness checks, a seeded resampling solver, an exhaustive oracle,
and builders for translated-pattern instances over finitely described
groups (orbit trapping at desk scale)."""

from .certify import Verdict
from .groups import (
    FiniteCyclicProduct,
    FiniteTable,
    FreeGroup,
    GroupError,
    IntegerLattice,
    element_set,
    set_inverse,
    set_product,
)
from .instances import (
    Assignment,
    BadEvent,
    BlockImplicit,
    Explicit,
    Implicit,
    Instance,
    InstanceError,
    VariableUniverse,
    avoids,
    block_miss_event,
    enumerate_forbidden,
    event_probability,
    is_correct,
    materialize_explicit,
    neighborhood,
    verify_solution,
)
from .separation import (
    CollisionGraph,
    SeparationError,
    collision_graph,
    greedy_independent_set,
    left_separated_subset,
    right_separated_subset,
    translates_pairwise_disjoint,
)
from .shift import (
    BoundViolationError,
    BoundsReport,
    BuiltShift,
    Pattern,
    ShiftConfig,
    TrapReport,
    WindowError,
    build_bad_event,
    build_instance,
    check_instance_bounds,
    compute_ell0,
    compute_n,
    config_for_finite_group,
    config_windowed,
    is_trapped_at,
    make_pattern,
    select_l,
    threshold_product,
    threshold_product_bounds,
    verify_trapping,
)
from .solving import (
    DEFAULT_MAX_RESAMPLES,
    MTResult,
    SearchSpaceError,
    solve_backtracking,
    solve_moser_tardos,
)

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BadEvent",
    "BlockImplicit",
    "BoundViolationError",
    "BoundsReport",
    "BuiltShift",
    "CollisionGraph",
    "DEFAULT_MAX_RESAMPLES",
    "Explicit",
    "FiniteCyclicProduct",
    "FiniteTable",
    "FreeGroup",
    "GroupError",
    "Implicit",
    "Instance",
    "InstanceError",
    "IntegerLattice",
    "MTResult",
    "Pattern",
    "SearchSpaceError",
    "SeparationError",
    "ShiftConfig",
    "TrapReport",
    "VariableUniverse",
    "Verdict",
    "WindowError",
    "avoids",
    "block_miss_event",
    "build_bad_event",
    "build_instance",
    "check_instance_bounds",
    "collision_graph",
    "compute_ell0",
    "compute_n",
    "config_for_finite_group",
    "config_windowed",
    "element_set",
    "enumerate_forbidden",
    "event_probability",
    "greedy_independent_set",
    "is_correct",
    "is_trapped_at",
    "left_separated_subset",
    "make_pattern",
    "materialize_explicit",
    "neighborhood",
    "right_separated_subset",
    "select_l",
    "set_inverse",
    "set_product",
    "solve_backtracking",
    "solve_moser_tardos",
    "threshold_product",
    "threshold_product_bounds",
    "translates_pairwise_disjoint",
    "verify_solution",
    "verify_trapping",
]
