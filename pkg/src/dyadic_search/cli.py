"""Command-line front end.

Exit status: 0 success, 1 diagnostics failed (``diagnose`` only), 2 usage
error, 3 environment inconsistency, 4 arithmetic capacity, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from dataclasses import dataclass

from .coords import coord_denormalize
from .environment import (
    BudgetSchedule,
    Objective,
    OracleKind,
    OracleSpec,
    Shape,
    objective_min,
)
from .errors import ArithmeticCapacityError, EnvironmentInconsistencyError
from .harness import (
    RunConfig,
    Trace,
    diagnostics,
    run,
    scaling_experiment,
    theorem_bound,
)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
EXIT_INCONSISTENT = 3
EXIT_CAPACITY = 4
EXIT_IO = 5

CSV_HEADER = (
    "t", "budget", "x", "J_lo", "J_hi", "epoch", "active_lo", "active_hi",
    "inst_regret", "cum_regret", "x_frac", "active_lo_frac", "active_hi_frac",
)


@dataclass
class CliConfig:
    command: str
    run_config: RunConfig
    horizons: list[int]
    out: str | None
    summary: str
    write_trace: bool
    workers: int = 1


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _horizon_list(text: str) -> list[int]:
    try:
        values = [_positive_int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad horizon list {text!r}") from None
    if values != sorted(values):
        raise argparse.ArgumentTypeError("horizons must be ascending")
    return values


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = common.add_argument_group("objective")
    g.add_argument("--objective", choices=[s.value for s in Shape], default="abs")
    g.add_argument("--xstar", type=float, default=0.5)
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--domain-lo", type=float, default=0.0)
    g.add_argument("--domain-hi", type=float, default=1.0)
    g = common.add_argument_group("environment")
    g.add_argument("--oracle", choices=[k.value for k in OracleKind], default="centered")
    g.add_argument("--c", type=float, default=1.0)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--lie-round", type=_positive_int, default=1,
                   help="first round answered falsely by the lying oracle")
    g.add_argument("--schedule", choices=["constant", "cyclic", "random"], default="constant")
    g.add_argument("--budget", type=_float_list, default=[1.0],
                   help="constant: one value; cyclic: comma list; random: lo,hi")
    g.add_argument("--seed", type=int, default=0)
    g = common.add_argument_group("output")
    g.add_argument("--out", default=None, help="CSV output path")
    g.add_argument("--summary", default="-", help="summary path, '-' for stdout")
    g.add_argument("--no-trace", action="store_true", help="do not write the trace CSV")

    parser = argparse.ArgumentParser(
        prog="dyadic-search",
        description="Dyadic Search with fuzzy evaluations: simulate, measure regret, check invariants.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("run", "run one simulation and write its trace"),
        ("diagnose", "run one simulation and check the optimizer's invariants"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text, allow_abbrev=False)
        p.add_argument("--T", type=_positive_int, default=10_000, dest="T")
    p = sub.add_parser("scaling", parents=[common], allow_abbrev=False,
                       help="regret against the bound over several horizons")
    p.add_argument("--horizons", type=_horizon_list, default=[1000, 10_000, 100_000])
    p.add_argument("--workers", type=_positive_int, default=1)
    return parser


def _schedule(parser, args) -> BudgetSchedule:
    values = args.budget
    if any(not (v > 0 and math.isfinite(v)) for v in values):
        parser.error("--budget values must be positive and finite")
    if args.schedule == "constant":
        if len(values) != 1:
            parser.error("--schedule constant takes a single --budget value")
        return BudgetSchedule.constant(values[0])
    if args.schedule == "cyclic":
        return BudgetSchedule.cyclic(values)
    if len(values) != 2 or values[0] > values[1]:
        parser.error("--schedule random takes --budget lo,hi with lo <= hi")
    return BudgetSchedule.seeded_random(values[0], values[1], args.seed)


def parse_config(argv) -> CliConfig:
    """Parse and validate ``argv``; usage problems exit with status 2."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.domain_lo < args.domain_hi:
        parser.error("--domain-lo must be < --domain-hi")
    if not args.domain_lo < args.xstar < args.domain_hi:
        parser.error("--xstar must lie strictly inside the domain")
    if not (args.scale >= 0 and math.isfinite(args.scale)):
        parser.error("--scale must be >= 0")
    if not (args.c >= 0 and math.isfinite(args.c)):
        parser.error("--c must be >= 0")
    if not (args.alpha > 0 and math.isfinite(args.alpha)):
        parser.error("--alpha must be > 0")

    objective = Objective(Shape(args.objective), args.xstar, args.scale, (args.domain_lo, args.domain_hi))
    oracle = OracleSpec(OracleKind(args.oracle), args.c, args.alpha, args.seed, args.lie_round)
    horizons = args.horizons if args.command == "scaling" else [args.T]
    write_trace = args.command != "scaling" and not args.no_trace
    config = RunConfig(
        objective,
        oracle,
        _schedule(parser, args),
        horizons[-1],
        record_full_trace=write_trace or args.command == "diagnose",
    )
    out = args.out
    if out is None and write_trace:
        out = "trace.csv"
    return CliConfig(
        args.command, config, horizons, out, args.summary, write_trace,
        getattr(args, "workers", 1),
    )


def _g(value: float) -> str:
    return format(value, ".17g")


def write_csv(trace: Trace, path: str) -> None:
    lo, hi = trace.domain
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in trace.rows:
            writer.writerow((
                row.t,
                _g(row.budget),
                _g(row.query_x),
                _g(row.response.lo),
                _g(row.response.hi),
                row.epoch,
                _g(coord_denormalize(row.active_lo, lo, hi)),
                _g(coord_denormalize(row.active_hi, lo, hi)),
                _g(row.inst_regret),
                _g(row.cum_regret),
                str(row.query_coord),
                str(row.active_lo),
                str(row.active_hi),
            ))


@contextlib.contextmanager
def _open_summary(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def summary_lines(trace: Trace, config: RunConfig, report=None) -> list[str]:
    obj = config.objective
    _, _, M = objective_min(obj)
    lines = [
        f"T: {trace.rounds}",
        f"total_budget: {_g(trace.total_budget)}",
        f"R_T: {_g(trace.regret)}",
    ]
    if config.bound_premises_hold:
        bound = theorem_bound(trace.rounds, config.oracle.alpha, config.oracle.c, M)
        lines.append(f"bound: {_g(bound)}")
        lines.append(f"R_T ≤ bound: {'PASS' if trace.regret <= bound else 'FAIL'}")
    else:
        lines.append("bound: n/a: premises not met")
    lo, hi = obj.domain
    act = trace.final_active
    lines.append(
        f"final_active: [{_g(coord_denormalize(act.lo, lo, hi))}, {_g(coord_denormalize(act.hi, lo, hi))}]"
        f" normalized [{act.lo}, {act.hi}]"
    )
    lines.append(f"epochs: {trace.epochs}")
    if report is None:
        lines.append("diagnostics: skipped (no full trace)")
    else:
        for name, value in report.results().items():
            verdict = "n/a" if value is None else ("PASS" if value else "FAIL")
            lines.append(f"diagnostic {name}: {verdict}")
    return lines


def emit_summary(trace: Trace, config: RunConfig, path: str | None = "-", report=None) -> None:
    if report is None and trace.rows:
        report = diagnostics(trace, config)
    with _open_summary(path) as fh:
        fh.write("\n".join(summary_lines(trace, config, report)) + "\n")


def emit_error_summary(err: Exception, path: str | None = "-") -> None:
    if isinstance(err, EnvironmentInconsistencyError):
        text = f"error: environment inconsistency at round {err.round}: {err.args[0]}"
    else:
        text = f"error: {err}"
    with _open_summary(path) as fh:
        fh.write(text + "\n")


def _run_command(cfg: CliConfig) -> int:
    trace = run(cfg.run_config)
    report = diagnostics(trace, cfg.run_config) if trace.rows else None
    if cfg.write_trace:
        write_csv(trace, cfg.out)
    emit_summary(trace, cfg.run_config, cfg.summary, report)
    if cfg.command == "diagnose":
        for failure in report.failures:
            print(failure, file=sys.stderr)
        return EXIT_OK if report.passed else EXIT_DIAGNOSTICS
    return EXIT_OK


def _scaling_command(cfg: CliConfig) -> int:
    result = scaling_experiment(cfg.run_config, cfg.horizons, max_workers=cfg.workers)
    rows = [("T", "R_T", "bound")] + [
        (T, _g(r), "n/a" if b is None else _g(b)) for T, r, b in result.rows()
    ]
    with _open_summary(cfg.out) as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    lines = [f"loglog_slope: {'n/a' if result.slope is None else _g(result.slope)}"]
    if result.within_bound is None:
        lines.append("bound: n/a: premises not met")
    else:
        lines.append(f"R_T ≤ bound: {'PASS' if result.within_bound else 'FAIL'}")
    summary_target = sys.stderr if cfg.summary == "-" and cfg.out in (None, "-") else cfg.summary
    if summary_target is sys.stderr:
        sys.stderr.write("\n".join(lines) + "\n")
    else:
        with _open_summary(summary_target) as fh:
            fh.write("\n".join(lines) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if cfg.command == "scaling":
            return _scaling_command(cfg)
        return _run_command(cfg)
    except EnvironmentInconsistencyError as err:
        with contextlib.suppress(OSError):
            emit_error_summary(err, cfg.summary)
        print(f"dyadic-search: environment inconsistency at round {err.round}: {err.args[0]}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ArithmeticCapacityError as err:
        print(f"dyadic-search: arithmetic capacity exceeded: {err}", file=sys.stderr)
        return EXIT_CAPACITY
    except OSError as err:
        print(f"dyadic-search: I/O failure: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
