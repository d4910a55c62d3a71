"""Simulated environments: convex objectives, budget schedules and oracles.

Every built-in oracle (except the deliberately lying one) returns an
interval that contains the true value and whose width is at most
``c / B**alpha``, where ``B`` is the budget invested at the queried point
up to and including the current round.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContractViolationError
from .fuzzy import FuzzyInterval, fuzzy_width

Real = float | Fraction


class DomainError(ContractViolationError):
    pass


class Shape(enum.Enum):
    ABSOLUTE_VALUE = "abs"
    QUADRATIC = "quadratic"
    PIECEWISE_LINEAR_MAX = "pwlmax"
    SOFTPLUS_LIKE = "softplus"


# slopes left/right of the minimizer for PIECEWISE_LINEAR_MAX
PWL_LEFT_SLOPE = 1
PWL_RIGHT_SLOPE = 2
# curvature of SOFTPLUS_LIKE, in units of the domain length
SOFTPLUS_SHARPNESS = 4


@dataclass(frozen=True)
class Objective:
    shape: Shape
    xstar: float
    scale: float = 1.0
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ContractViolationError(f"bad domain {self.domain}")
        if not lo < self.xstar < hi:
            raise ContractViolationError(f"xstar={self.xstar} not inside ({lo}, {hi})")
        if not self.scale >= 0:
            raise ContractViolationError(f"scale must be >= 0, got {self.scale}")

    def __call__(self, x: Real) -> float:
        return objective_eval(self, x)


def objective_eval(obj: Objective, x: Real) -> float:
    """Evaluate the objective at ``x``.

    A :class:`~fractions.Fraction` argument is evaluated exactly for the
    piecewise-polynomial shapes and rounded once at the end, so deep dyadic
    points never collapse onto one float value.
    """
    lo, hi = obj.domain
    if not lo <= x <= hi:
        raise DomainError(f"x={x} outside domain [{lo}, {hi}]")
    exact = isinstance(x, Fraction)
    xstar = Fraction(obj.xstar) if exact else obj.xstar
    scale = Fraction(obj.scale) if exact else obj.scale
    d = x - xstar
    shape = obj.shape
    if shape is Shape.ABSOLUTE_VALUE:
        return float(scale * abs(d))
    if shape is Shape.QUADRATIC:
        return float(scale * d * d)
    if shape is Shape.PIECEWISE_LINEAR_MAX:
        return float(scale * max(-PWL_LEFT_SLOPE * d, PWL_RIGHT_SLOPE * d))
    if shape is Shape.SOFTPLUS_LIKE:
        # log cosh(u) == softplus(2u) - u - log 2, written to stay accurate near u = 0
        span = Fraction(hi) - Fraction(lo) if exact else hi - lo
        u = float(SOFTPLUS_SHARPNESS * d / span)
        return float(obj.scale) * math.log1p(2.0 * math.sinh(0.5 * u) ** 2)
    raise ValueError(f"unknown shape {shape}")


def objective_min(obj: Objective) -> tuple[float, float, float]:
    """Return ``(xstar, fmin, M)`` with ``M = max(f) - min(f)`` over the domain."""
    lo, hi = obj.domain
    fmin = 0.0
    fmax = max(objective_eval(obj, Fraction(lo)), objective_eval(obj, Fraction(hi)))
    return obj.xstar, fmin, fmax - fmin


class ScheduleKind(enum.Enum):
    CONSTANT = "constant"
    CYCLIC = "cyclic"
    SEEDED_RANDOM = "random"


@dataclass(frozen=True)
class BudgetSchedule:
    kind: ScheduleKind
    values: tuple[float, ...] = (1.0,)
    lo: float = 0.0
    hi: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind is ScheduleKind.SEEDED_RANDOM:
            if not 0 < self.lo <= self.hi:
                raise ContractViolationError(f"need 0 < lo <= hi, got [{self.lo}, {self.hi}]")
        elif not self.values or any(not v > 0 for v in self.values):
            raise ContractViolationError(f"budgets must be positive, got {self.values}")

    @classmethod
    def constant(cls, value: float = 1.0) -> "BudgetSchedule":
        return cls(ScheduleKind.CONSTANT, (float(value),))

    @classmethod
    def cyclic(cls, values) -> "BudgetSchedule":
        return cls(ScheduleKind.CYCLIC, tuple(float(v) for v in values))

    @classmethod
    def seeded_random(cls, lo: float, hi: float, seed: int = 0) -> "BudgetSchedule":
        return cls(ScheduleKind.SEEDED_RANDOM, lo=float(lo), hi=float(hi), seed=seed)

    @property
    def is_unit(self) -> bool:
        return self.kind is ScheduleKind.CONSTANT and self.values[0] == 1.0


def _keyed_uniform(seed: int, t: int) -> float:
    """Uniform draw in [0, 1) that depends only on ``(seed, t)``."""
    return float(np.random.default_rng([seed % 2**64, t]).random())


def schedule_next(schedule: BudgetSchedule, t: int) -> float:
    if t < 1:
        raise ContractViolationError(f"rounds start at 1, got {t}")
    if schedule.kind is ScheduleKind.CONSTANT:
        return schedule.values[0]
    if schedule.kind is ScheduleKind.CYCLIC:
        return schedule.values[(t - 1) % len(schedule.values)]
    u = _keyed_uniform(schedule.seed, t)
    return min(schedule.hi, schedule.lo + u * (schedule.hi - schedule.lo))


class OracleKind(enum.Enum):
    CENTERED = "centered"
    FULL_WIDTH_CENTERED = "full-width-centered"
    LOWER_ANCHORED = "lower-anchored"
    UPPER_ANCHORED = "upper-anchored"
    SHRINK_ONLY = "shrink-only"
    LYING = "lying"


TRUTHFUL_ORACLES = frozenset(OracleKind) - {OracleKind.LYING}

# Past this many halvings the width would only underflow; see README.
SHRINK_ONLY_MAX_HALVINGS = 30


@dataclass(frozen=True)
class OracleSpec:
    kind: OracleKind = OracleKind.CENTERED
    c: float = 1.0
    alpha: float = 1.0
    rng_seed: int = 0
    lie_round: int = 1

    def __post_init__(self):
        if not self.c >= 0:
            raise ContractViolationError(f"c must be >= 0, got {self.c}")
        if not self.alpha > 0:
            raise ContractViolationError(f"alpha must be > 0, got {self.alpha}")
        if self.lie_round < 1:
            raise ContractViolationError("lie_round must be >= 1")

    @property
    def truthful(self) -> bool:
        return self.kind in TRUTHFUL_ORACLES


def max_width(c: float, alpha: float, cumulative_budget: float) -> float:
    return c / cumulative_budget**alpha


def _shrink_to(lo: float, v: float, hi: float, width: float) -> FuzzyInterval:
    # float rounding of v +/- w can overshoot the allowed width by an ulp of v
    while hi - lo > width:
        if hi - v >= v - lo:
            hi = math.nextafter(hi, v)
        else:
            lo = math.nextafter(lo, v)
    return FuzzyInterval(lo, hi)


def _centered(v: float, w: float) -> FuzzyInterval:
    return _shrink_to(v - 0.5 * w, v, v + 0.5 * w, w)


def oracle_respond(
    spec: OracleSpec,
    true_value: float,
    cumulative_budget: float,
    t: int,
    prior_queries: int = 0,
) -> FuzzyInterval:
    """Fuzzy evaluation of ``true_value`` after ``cumulative_budget`` was invested.

    ``prior_queries`` is the number of earlier rounds at the same point; only
    the shrink-only oracle uses it.
    """
    if not cumulative_budget > 0:
        raise ContractViolationError("cumulative budget must be positive")
    v = true_value
    w = max_width(spec.c, spec.alpha, cumulative_budget)
    kind = spec.kind
    if kind is OracleKind.CENTERED or kind is OracleKind.FULL_WIDTH_CENTERED:
        return _centered(v, w)
    if kind is OracleKind.LOWER_ANCHORED:
        return _shrink_to(v, v, v + w, w)
    if kind is OracleKind.UPPER_ANCHORED:
        return _shrink_to(v - w, v, v, w)
    if kind is OracleKind.SHRINK_ONLY:
        return _centered(v, w / 2.0 ** min(prior_queries, SHRINK_ONLY_MAX_HALVINGS))
    if kind is OracleKind.LYING:
        if t < spec.lie_round:
            return _centered(v, w)
        gap = max(w, 1.0, abs(v))
        if _keyed_uniform(spec.rng_seed, t) < 0.5:
            return FuzzyInterval(v + gap, v + gap + w)
        return FuzzyInterval(v - gap - w, v - gap)
    raise ValueError(f"unknown oracle kind {kind}")


def assumption_check(
    response: FuzzyInterval,
    cumulative_budget: float,
    c: float,
    alpha: float,
    true_value: float,
) -> bool:
    """True iff the response contains the true value and respects the width bound."""
    bound = max_width(c, alpha, cumulative_budget)
    slack = 4 * math.ulp(bound)
    return fuzzy_width(response) <= bound + slack and response.lo <= true_value <= response.hi
