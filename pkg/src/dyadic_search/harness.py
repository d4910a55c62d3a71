"""Protocol runner, regret accounting, the explicit regret bound and diagnostics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .coords import Coord, coord_is_dyadic, coord_to_domain, domain_to_coord
from .environment import (
    BudgetSchedule,
    Objective,
    OracleSpec,
    objective_eval,
    objective_min,
    oracle_respond,
    schedule_next,
)
from .errors import ContractViolationError, EnvironmentInconsistencyError
from .fuzzy import DeletionPattern, FuzzyInterval
from .search import (
    ActiveInterval,
    EpochEvent,
    EpochRecord,
    OptimizerState,
    PartitionKind,
)


@dataclass(frozen=True)
class RunConfig:
    objective: Objective
    oracle: OracleSpec = OracleSpec()
    schedule: BudgetSchedule = BudgetSchedule.constant(1.0)
    horizon: int = 10_000
    record_full_trace: bool = True

    def __post_init__(self):
        if self.horizon < 1:
            raise ContractViolationError(f"horizon must be >= 1, got {self.horizon}")

    @property
    def bound_premises_hold(self) -> bool:
        """Unit budgets and a truthful oracle: the setting the bound is proved for."""
        return self.schedule.is_unit and self.oracle.truthful


@dataclass(frozen=True, slots=True)
class TraceRow:
    t: int
    budget: float
    query_coord: Coord
    query_x: float
    response: FuzzyInterval
    epoch: int
    active_lo: Coord
    active_hi: Coord
    inst_regret: float
    cum_regret: float
    # not part of the CSV schema; consumed by diagnostics
    kind: PartitionKind = PartitionKind.UNIFORM
    pattern: DeletionPattern = DeletionPattern.NO_DELETION
    point_fuzzy: FuzzyInterval | None = None


@dataclass
class Trace:
    """Result of one protocol run.

    ``rows`` is empty unless the run recorded a full trace; ``events`` only
    holds epoch transitions.
    """

    rows: list[TraceRow] = field(default_factory=list)
    events: list[EpochEvent] = field(default_factory=list)
    rounds: int = 0
    total_budget: float = 0.0
    regret: float = 0.0
    final_active: ActiveInterval | None = None
    final_kind: PartitionKind | None = None
    epoch_history: list[EpochRecord] = field(default_factory=list)
    domain: tuple[float, float] = (0.0, 1.0)

    @property
    def epochs(self) -> int:
        """Number of epochs started, including the one still open."""
        return len(self.epoch_history) + 1


def run(config: RunConfig) -> Trace:
    """Play the budgeted optimization protocol for ``config.horizon`` rounds."""
    obj, spec, schedule = config.objective, config.oracle, config.schedule
    dom_lo, dom_hi = obj.domain
    _, fmin, _ = objective_min(obj)
    state = OptimizerState.new()
    trace = Trace(domain=obj.domain)
    rows = trace.rows
    record = config.record_full_trace
    values: dict[Coord, tuple[float, float]] = {}
    cum = 0.0
    total = 0.0

    for t in range(1, config.horizon + 1):
        b = schedule_next(schedule, t)
        x = state.select_query()
        if x not in values:
            exact = coord_to_domain(x, dom_lo, dom_hi)
            values[x] = (objective_eval(obj, exact), float(exact))
        fx, x_real = values[x]
        entry = state.ledger_entry(x)
        response = oracle_respond(spec, fx, entry.invested + b, t, entry.queries)
        if not response.lo <= fx <= response.hi:
            raise EnvironmentInconsistencyError(
                f"response [{response.lo}, {response.hi}] excludes f(X_t)={fx}", round=t
            )
        active, kind, epoch = state.active, state.kind, state.epoch
        try:
            event = state.observe(x, b, response)
        except EnvironmentInconsistencyError as err:
            err.round = t
            raise
        if event.transitioned:
            trace.events.append(event)
        inst = b * (fx - fmin)
        cum += inst
        total += b
        if record:
            rows.append(
                TraceRow(
                    t, b, x, x_real, response, epoch, active.lo, active.hi, inst, cum,
                    kind, event.pattern, state.ledger[x].fuzzy,
                )
            )

    trace.rounds = config.horizon
    trace.total_budget = total
    trace.regret = cum
    trace.final_active = state.active
    trace.final_kind = state.kind
    trace.epoch_history = list(state.epoch_history)
    return trace


def regret(trace: Trace, obj: Objective) -> float:
    """Budget-weighted excess value of the queried points over the minimum."""
    if not trace.rows:
        raise ContractViolationError("regret needs a full trace")
    _, fmin, _ = objective_min(obj)
    lo, hi = obj.domain
    return math.fsum(
        row.budget * (objective_eval(obj, coord_to_domain(row.query_coord, lo, hi)) - fmin)
        for row in trace.rows
    )


def theorem_bound(T: int, alpha: float, c: float, M: float) -> float:
    """Explicit regret bound for unit budgets after ``T`` rounds."""
    scale = M * float(T) ** alpha
    if scale > 1:
        epochs_term = math.floor(4 + 2 * math.log(scale, 4 / 3))
    else:
        epochs_term = 4
    return (epochs_term * 8 * c * 6**alpha + 2) * float(T) ** (1 - alpha) + 60 * M


# |I_{tau+1}| / |I_tau| for every (pattern, kind) pair, with the next kind
TRANSITIONS = {
    (DeletionPattern.DELETE_LEFT_OF_CENTER, PartitionKind.UNIFORM): (Fraction(1, 2), PartitionKind.UNIFORM),
    (DeletionPattern.DELETE_LEFT_OF_CENTER, PartitionKind.NONUNIFORM): (Fraction(1, 2), PartitionKind.NONUNIFORM),
    (DeletionPattern.DELETE_RIGHT_OF_CENTER, PartitionKind.UNIFORM): (Fraction(1, 2), PartitionKind.UNIFORM),
    (DeletionPattern.DELETE_RIGHT_OF_CENTER, PartitionKind.NONUNIFORM): (Fraction(1, 2), PartitionKind.NONUNIFORM),
    (DeletionPattern.DELETE_OUTER, PartitionKind.UNIFORM): (Fraction(1, 2), PartitionKind.UNIFORM),
    (DeletionPattern.DELETE_OUTER, PartitionKind.NONUNIFORM): (Fraction(1, 3), PartitionKind.UNIFORM),
    (DeletionPattern.DELETE_LEFT_OF_L, PartitionKind.UNIFORM): (Fraction(3, 4), PartitionKind.NONUNIFORM),
    (DeletionPattern.DELETE_LEFT_OF_L, PartitionKind.NONUNIFORM): (Fraction(2, 3), PartitionKind.UNIFORM),
    (DeletionPattern.DELETE_RIGHT_OF_R, PartitionKind.UNIFORM): (Fraction(3, 4), PartitionKind.NONUNIFORM),
    (DeletionPattern.DELETE_RIGHT_OF_R, PartitionKind.NONUNIFORM): (Fraction(2, 3), PartitionKind.UNIFORM),
}
ALLOWED_RATIOS = frozenset({Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)})


def _triple(active_lo: Fraction, active_hi: Fraction, kind: PartitionKind) -> tuple:
    # recomputed here rather than imported so the check stays independent
    span = active_hi - active_lo
    if kind is PartitionKind.UNIFORM:
        return (active_lo + span / 4, active_lo + span / 2, active_lo + 3 * span / 4)
    return (active_lo + span / 3, active_lo + span / 2, active_lo + 2 * span / 3)


def _is_three_times_dyadic(length: Fraction) -> bool:
    q = length / 3
    return q.numerator == 1 and coord_is_dyadic(q)


@dataclass
class DiagnosticsReport:
    """Pass/fail per invariant; ``None`` marks a check whose premise does not hold."""

    dyadic_mesh: bool = True
    nesting: bool = True
    minimizer_retention: bool | None = True
    epoch_balance: bool | None = True
    widths_nonincreasing: bool = True
    kind_transitions: bool = True
    nonuniform_length: bool = True
    ledger_min_selection: bool = True
    regret_nondecreasing: bool = True
    failures: list[str] = field(default_factory=list)

    CHECKS = (
        "dyadic_mesh",
        "nesting",
        "minimizer_retention",
        "epoch_balance",
        "widths_nonincreasing",
        "kind_transitions",
        "nonuniform_length",
        "ledger_min_selection",
        "regret_nondecreasing",
    )

    def results(self) -> dict[str, bool | None]:
        return {name: getattr(self, name) for name in self.CHECKS}

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.results().values())

    def _fail(self, check: str, message: str) -> None:
        setattr(self, check, False)
        if len(self.failures) < 50:
            self.failures.append(f"{check}: {message}")


def diagnostics(trace: Trace, config: RunConfig) -> DiagnosticsReport:
    """Re-check the algorithm's structural guarantees on a recorded trace."""
    report = DiagnosticsReport()
    obj = config.objective

    for row in trace.rows:
        if not coord_is_dyadic(row.query_coord):
            report._fail("dyadic_mesh", f"t={row.t} queried {row.query_coord}")

    # transitions, as reported by the optimizer
    xstar = domain_to_coord(obj.xstar, *obj.domain)
    retention_applies = config.oracle.truthful and obj.scale > 0
    if not retention_applies:
        report.minimizer_retention = None
    for ev in trace.events:
        old, new = ev.active, ev.new_active
        if not (old.lo <= new.lo and new.hi <= old.hi):
            report._fail("nesting", f"t={ev.round} {new} not inside {old}")
        ratio = new.length / old.length
        if ratio not in ALLOWED_RATIOS:
            report._fail("nesting", f"t={ev.round} shrink ratio {ratio}")
        expected = TRANSITIONS.get((ev.pattern, ev.kind))
        if expected is None or expected != (ratio, ev.new_kind):
            report._fail("kind_transitions", f"t={ev.round} {ev.pattern.name}/{ev.kind.name} -> {ratio}, {ev.new_kind}")
        if ev.new_kind is PartitionKind.NONUNIFORM and not _is_three_times_dyadic(new.length):
            report._fail("nonuniform_length", f"t={ev.round} length {new.length}")
        if retention_applies and not new.lo <= xstar <= new.hi:
            report._fail("minimizer_retention", f"t={ev.round} x* outside {new}")

    # per-point replay of budgets, counts and intersected widths
    invested: dict[Fraction, float] = {}
    counts: dict[Fraction, int] = {}
    widths: dict[Fraction, float] = {}
    prev_cum = -math.inf
    snapshot_rounds = {ev.round - 1 for ev in trace.events}
    snapshots: dict[int, dict[Fraction, int]] = {0: {}}
    key = triple = None
    for row in trace.rows:
        if key != (row.active_lo, row.active_hi, row.kind):
            key = (row.active_lo, row.active_hi, row.kind)
            triple = _triple(*key)
        if row.query_coord not in triple:
            report._fail("ledger_min_selection", f"t={row.t} {row.query_coord} not in triple")
        else:
            mine = invested.get(row.query_coord, 0.0)
            if any(mine > invested.get(p, 0.0) for p in triple):
                report._fail("ledger_min_selection", f"t={row.t} {row.query_coord} not least invested")
        invested[row.query_coord] = invested.get(row.query_coord, 0.0) + row.budget
        counts[row.query_coord] = counts.get(row.query_coord, 0) + 1
        if row.t in snapshot_rounds:
            snapshots[row.t] = dict(counts)

        if row.point_fuzzy is not None:
            w = row.point_fuzzy.hi - row.point_fuzzy.lo
            if w > widths.get(row.query_coord, math.inf):
                report._fail("widths_nonincreasing", f"t={row.t} width grew at {row.query_coord}")
            widths[row.query_coord] = w
        if row.cum_regret < prev_cum:
            report._fail("regret_nondecreasing", f"t={row.t}")
        prev_cum = row.cum_regret

    # balance over all rounds before the closing one, for completed epochs
    if not config.schedule.is_unit:
        report.epoch_balance = None
    elif trace.rows:
        for ev in trace.events:
            before = snapshots[ev.round - 1]
            triple = _triple(ev.active.lo, ev.active.hi, ev.kind)
            least = min(before.get(p, 0) for p in triple)
            if 3 * least < ev.epoch_budget - 3:
                report._fail(
                    "epoch_balance",
                    f"epoch {ev.epoch}: min count {least} < ({ev.epoch_budget} - 3)/3",
                )
    return report


@dataclass
class ScalingResult:
    horizons: list[int]
    regrets: list[float]
    bounds: list[float | None]
    slope: float | None

    def rows(self):
        return list(zip(self.horizons, self.regrets, self.bounds))

    @property
    def within_bound(self) -> bool | None:
        if any(b is None for b in self.bounds):
            return None
        return all(r <= b for r, b in zip(self.regrets, self.bounds))


def _run_regret(config: RunConfig) -> float:
    return run(config).regret


def loglog_slope(horizons, regrets) -> float | None:
    """Least-squares slope of log R_T against log T; None if any R_T <= 0."""
    if len(horizons) < 2 or any(r <= 0 for r in regrets):
        return None
    slope, _ = np.polyfit(np.log(horizons), np.log(regrets), 1)
    return float(slope)


def scaling_experiment(base: RunConfig, horizons, max_workers: int | None = None) -> ScalingResult:
    """Run ``base`` at each horizon with a fresh optimizer and tabulate regret vs bound."""
    horizons = [int(T) for T in horizons]
    if not horizons or horizons != sorted(horizons):
        raise ContractViolationError("horizons must be non-empty and ascending")
    configs = [
        RunConfig(base.objective, base.oracle, base.schedule, T, record_full_trace=False)
        for T in horizons
    ]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            regrets = list(pool.map(_run_regret, configs))
    else:
        regrets = [_run_regret(cfg) for cfg in configs]

    _, _, M = objective_min(base.objective)
    if base.bound_premises_hold:
        bounds = [theorem_bound(T, base.oracle.alpha, base.oracle.c, M) for T in horizons]
    else:
        bounds = [None] * len(horizons)
    return ScalingResult(horizons, regrets, bounds, loglog_slope(horizons, regrets))
