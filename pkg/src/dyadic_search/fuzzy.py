"""Interval-valued (fuzzy) objective values and the deletion rule."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import EnvironmentInconsistencyError

inf = math.inf


@dataclass(frozen=True, slots=True)
class FuzzyInterval:
    """Closed extended-real interval ``[lo, hi]`` of objective values."""

    lo: float = -inf
    hi: float = inf

    def __post_init__(self):
        # NaN fails both comparisons, so it is rejected here too
        if not self.lo <= self.hi:
            raise ValueError(f"empty fuzzy interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return fuzzy_width(self)

    def __contains__(self, value: float) -> bool:
        return self.lo <= value <= self.hi


REALS = FuzzyInterval()


def fuzzy_intersect(a: FuzzyInterval, b: FuzzyInterval) -> FuzzyInterval:
    lo = a.lo if a.lo >= b.lo else b.lo
    hi = a.hi if a.hi <= b.hi else b.hi
    if lo > hi:
        raise EnvironmentInconsistencyError(
            f"fuzzy evaluations [{a.lo}, {a.hi}] and [{b.lo}, {b.hi}] are disjoint"
        )
    return FuzzyInterval(lo, hi)


def fuzzy_width(a: FuzzyInterval) -> float:
    if math.isinf(a.lo) or math.isinf(a.hi):
        return inf
    return a.hi - a.lo


class DeletionPattern(enum.Enum):
    """Portion of the active interval to drop; glyphs read left to right."""

    DELETE_LEFT_OF_CENTER = "■■□□"
    DELETE_RIGHT_OF_CENTER = "□□■■"
    DELETE_OUTER = "■□□■"
    DELETE_LEFT_OF_L = "■□□□"
    DELETE_RIGHT_OF_R = "□□□■"
    NO_DELETION = "□□□□"


def delete(jl: FuzzyInterval, jc: FuzzyInterval, jr: FuzzyInterval) -> DeletionPattern:
    """Decide which part of the active interval the evaluations at l < c < r rule out.

    The guards form a first-match cascade; ties count as ``>=``.
    """
    if jc.lo >= jr.hi:
        return DeletionPattern.DELETE_LEFT_OF_CENTER
    if jc.lo >= jl.hi:
        return DeletionPattern.DELETE_RIGHT_OF_CENTER
    left_dominated = jl.lo >= min(jc.hi, jr.hi)
    right_dominated = jr.lo >= min(jl.hi, jc.hi)
    if left_dominated and right_dominated:
        return DeletionPattern.DELETE_OUTER
    if left_dominated:
        return DeletionPattern.DELETE_LEFT_OF_L
    if right_dominated:
        return DeletionPattern.DELETE_RIGHT_OF_R
    return DeletionPattern.NO_DELETION
