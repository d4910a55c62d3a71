"""The Dyadic Search optimizer on the normalized domain [0, 1].

Each epoch keeps an active interval and a partition kind.  The kind fixes a
query triple ``l < c < r`` (quarters for uniform, thirds for non-uniform).
Budget goes to the least-invested triple point.  After every observation the
deletion rule is re-evaluated; the first non-trivial pattern shrinks the
active interval and starts a new epoch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .coords import ONE, ZERO, Coord, coord_convex
from .errors import ContractViolationError
from .fuzzy import REALS, DeletionPattern, FuzzyInterval, delete, fuzzy_intersect


class PartitionKind(enum.Enum):
    UNIFORM = "u"
    NONUNIFORM = "nu"


@dataclass(frozen=True)
class ActiveInterval:
    lo: Coord
    hi: Coord

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ContractViolationError(f"active interval [{self.lo}, {self.hi}] is empty")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def partition_uniform(active: ActiveInterval) -> tuple[Coord, Coord, Coord]:
    lo, hi = active.lo, active.hi
    return (
        coord_convex(lo, hi, 3, 4),
        coord_convex(lo, hi, 1, 2),
        coord_convex(lo, hi, 1, 4),
    )


def partition_nonuniform(active: ActiveInterval) -> tuple[Coord, Coord, Coord]:
    lo, hi = active.lo, active.hi
    return (
        coord_convex(lo, hi, 2, 3),
        coord_convex(lo, hi, 1, 2),
        coord_convex(lo, hi, 1, 3),
    )


def partition(active: ActiveInterval, kind: PartitionKind) -> tuple[Coord, Coord, Coord]:
    if kind is PartitionKind.UNIFORM:
        return partition_uniform(active)
    return partition_nonuniform(active)


def update(
    active: ActiveInterval, kind: PartitionKind, pattern: DeletionPattern
) -> tuple[ActiveInterval, PartitionKind]:
    """Prune ``active`` according to ``pattern`` and pick the next partition kind."""
    lo, hi = active.lo, active.hi
    uniform = kind is PartitionKind.UNIFORM
    P = DeletionPattern
    if pattern is P.DELETE_LEFT_OF_CENTER:
        return ActiveInterval(coord_convex(lo, hi, 1, 2), hi), kind
    if pattern is P.DELETE_RIGHT_OF_CENTER:
        return ActiveInterval(lo, coord_convex(lo, hi, 1, 2)), kind
    if pattern is P.DELETE_OUTER:
        if uniform:
            new = ActiveInterval(coord_convex(lo, hi, 3, 4), coord_convex(lo, hi, 1, 4))
        else:
            new = ActiveInterval(coord_convex(lo, hi, 2, 3), coord_convex(lo, hi, 1, 3))
        return new, PartitionKind.UNIFORM
    if pattern is P.DELETE_LEFT_OF_L:
        if uniform:
            return ActiveInterval(coord_convex(lo, hi, 3, 4), hi), PartitionKind.NONUNIFORM
        return ActiveInterval(coord_convex(lo, hi, 2, 3), hi), PartitionKind.UNIFORM
    if pattern is P.DELETE_RIGHT_OF_R:
        if uniform:
            return ActiveInterval(lo, coord_convex(lo, hi, 1, 4)), PartitionKind.NONUNIFORM
        return ActiveInterval(lo, coord_convex(lo, hi, 1, 3)), PartitionKind.UNIFORM
    raise ContractViolationError(f"update called with {pattern}")


@dataclass(slots=True)
class PointLedgerEntry:
    """Cumulative budget and intersected fuzzy evaluation at one point."""

    point: Coord
    invested: float = 0.0
    fuzzy: FuzzyInterval = REALS
    queries: int = 0


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    end_round: int
    budget: float


@dataclass(frozen=True)
class EpochEvent:
    """Outcome of one observation.

    ``active``/``kind`` describe the epoch the observation belonged to;
    ``new_active``/``new_kind`` are set only when the epoch ended.
    """

    round: int
    epoch: int
    pattern: DeletionPattern
    active: ActiveInterval
    kind: PartitionKind
    new_active: ActiveInterval | None = None
    new_kind: PartitionKind | None = None
    epoch_budget: float = 0.0

    @property
    def transitioned(self) -> bool:
        return self.new_active is not None


# select_query tie-break: center first, then left, then right
_PREFERENCE = (1, 0, 2)


@dataclass
class OptimizerState:
    epoch: int
    active: ActiveInterval
    kind: PartitionKind
    triple: tuple[Coord, Coord, Coord]
    ledger: dict[Coord, PointLedgerEntry] = field(default_factory=dict)
    round: int = 0
    epoch_budget: float = 0.0
    epoch_start_round: int = 0
    epoch_history: list[EpochRecord] = field(default_factory=list)

    def __post_init__(self):
        self._entries = self._triple_entries()

    @classmethod
    def new(cls) -> "OptimizerState":
        active = ActiveInterval(ZERO, ONE)
        kind = PartitionKind.UNIFORM
        return cls(epoch=1, active=active, kind=kind, triple=partition(active, kind))

    def _triple_entries(self) -> list[PointLedgerEntry]:
        # entries stay out of the ledger until first invested in
        return [self.ledger.get(p) or PointLedgerEntry(p) for p in self.triple]

    def ledger_entry(self, x: Coord) -> PointLedgerEntry:
        entry = self.ledger.get(x)
        return entry if entry is not None else PointLedgerEntry(x)

    def incumbent(self) -> Coord:
        """Center of the current triple; no optimality guarantee attached."""
        return self.triple[1]

    def select_query(self) -> Coord:
        entries = self._entries
        best = entries[1]
        for i in (0, 2):
            if entries[i].invested < best.invested:
                best = entries[i]
        return best.point

    def observe(self, queried: Coord, budget: float, response: FuzzyInterval) -> EpochEvent:
        if not budget > 0:
            raise ContractViolationError(f"budget must be positive, got {budget}")
        entries = self._entries
        for i in _PREFERENCE:
            if entries[i].point is queried or entries[i].point == queried:
                entry = entries[i]
                break
        else:
            raise ContractViolationError(f"{queried} is not in the current triple")

        entry.fuzzy = fuzzy_intersect(entry.fuzzy, response)
        entry.invested += budget
        if entry.queries == 0:
            self.ledger[entry.point] = entry
        entry.queries += 1
        self.round += 1
        self.epoch_budget += budget

        pattern = delete(entries[0].fuzzy, entries[1].fuzzy, entries[2].fuzzy)
        if pattern is DeletionPattern.NO_DELETION:
            return EpochEvent(self.round, self.epoch, pattern, self.active, self.kind)

        closing_budget = self.epoch_budget
        self.epoch_history.append(EpochRecord(self.epoch, self.round, closing_budget))
        old_active, old_kind = self.active, self.kind
        self.active, self.kind = update(old_active, old_kind, pattern)
        self.triple = partition(self.active, self.kind)
        self._entries = self._triple_entries()
        self.epoch_budget = 0.0
        self.epoch_start_round = self.round
        event = EpochEvent(
            self.round,
            self.epoch,
            pattern,
            old_active,
            old_kind,
            new_active=self.active,
            new_kind=self.kind,
            epoch_budget=closing_budget,
        )
        self.epoch += 1
        return event


def optimizer_new() -> OptimizerState:
    return OptimizerState.new()


def select_query(state: OptimizerState) -> Coord:
    return state.select_query()


def observe(
    state: OptimizerState, queried: Coord, budget: float, response: FuzzyInterval
) -> EpochEvent:
    return state.observe(queried, budget, response)
