"""Dyadic Search for budgeted convex optimization with fuzzy evaluations."""

from .coords import Coord, coord, coord_convex, coord_denormalize, coord_is_dyadic
from .environment import (
    BudgetSchedule,
    Objective,
    OracleKind,
    OracleSpec,
    Shape,
    assumption_check,
    objective_eval,
    objective_min,
    oracle_respond,
    schedule_next,
)
from .errors import (
    ArithmeticCapacityError,
    ContractViolationError,
    EnvironmentInconsistencyError,
)
from .fuzzy import REALS, DeletionPattern, FuzzyInterval, delete, fuzzy_intersect, fuzzy_width
from .harness import RunConfig, Trace, diagnostics, regret, run, scaling_experiment, theorem_bound
from .search import (
    ActiveInterval,
    OptimizerState,
    PartitionKind,
    observe,
    optimizer_new,
    partition_nonuniform,
    partition_uniform,
    select_query,
    update,
)

__version__ = "0.1.0"
