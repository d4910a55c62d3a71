import pytest

from dyadic_search import coords
from dyadic_search.cli import (
    CSV_HEADER,
    EXIT_CAPACITY,
    EXIT_INCONSISTENT,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    emit_summary,
    main,
    parse_config,
    write_csv,
)
from dyadic_search.environment import OracleKind, ScheduleKind, Shape
from dyadic_search.harness import RunConfig, Trace, run

GOLDEN_T5 = """\
t,budget,x,J_lo,J_hi,epoch,active_lo,active_hi,inst_regret,cum_regret,x_frac,active_lo_frac,active_hi_frac
1,1,0.5,-0.5,0.5,1,0,1,0,0,1/2,0,1
2,1,0.25,-0.25,0.75,1,0,1,0.25,0.25,1/4,0,1
3,1,0.75,-0.25,0.75,1,0,1,0.25,0.5,3/4,0,1
4,1,0.5,-0.25,0.25,1,0,1,0,0.5,1/2,0,1
5,1,0.25,0,0.5,1,0,1,0.25,0.75,1/4,0,1
"""


def test_parse_defaults():
    cfg = parse_config(["run", "--T", "1000"])
    rc = cfg.run_config
    assert cfg.command == "run" and rc.horizon == 1000
    assert rc.objective.shape is Shape.ABSOLUTE_VALUE
    assert (rc.objective.xstar, rc.objective.scale, rc.objective.domain) == (0.5, 1.0, (0.0, 1.0))
    assert rc.oracle.kind is OracleKind.CENTERED
    assert (rc.oracle.c, rc.oracle.alpha, rc.oracle.rng_seed) == (1.0, 1.0, 0)
    assert rc.schedule.kind is ScheduleKind.CONSTANT and rc.schedule.values == (1.0,)
    assert parse_config(["run"]).run_config.horizon == 10_000


def test_parse_scaling_horizons():
    cfg = parse_config(["scaling", "--horizons", "1000,10000"])
    assert cfg.command == "scaling" and cfg.horizons == [1000, 10_000]


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--alpha", "0"],
        ["run", "--xstar", "1.0"],
        ["run", "--bogus"],
        ["run", "--T"],
        ["run", "--c", "-1"],
        ["scaling", "--horizons", "100,10"],
        ["run", "--schedule", "random", "--budget", "1"],
        ["run", "--al", "0.5"],
    ],
)
def test_parse_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        parse_config(argv)
    assert exc.value.code == EXIT_USAGE
    assert main(argv) == EXIT_USAGE


def test_golden_csv(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(run(parse_config(["run", "--T", "5"]).run_config), path)
    assert path.read_text() == GOLDEN_T5


def test_empty_trace_writes_header_only(tmp_path):
    path = tmp_path / "e.csv"
    write_csv(Trace(), path)
    assert path.read_text() == ",".join(CSV_HEADER) + "\n"


def test_csv_rows_denormalize_domain(tmp_path):
    path = tmp_path / "d.csv"
    assert main(["run", "--T", "2", "--domain-lo", "-2", "--domain-hi", "2", "--xstar", "0",
                 "--out", str(path), "--summary", str(tmp_path / "s.txt")]) == EXIT_OK
    second = path.read_text().splitlines()[2].split(",")
    assert second[2] == "-1" and second[10] == "1/4"
    assert (second[6], second[7]) == ("-2", "2")


def test_summary_pass_line(tmp_path):
    out = tmp_path / "s.txt"
    config = parse_config(["run", "--T", "500"]).run_config
    emit_summary(run(config), config, str(out))
    text = out.read_text()
    assert "R_T ≤ bound: PASS" in text
    assert "diagnostic dyadic_mesh: PASS" in text


def test_summary_cyclic_has_no_bound(tmp_path):
    out = tmp_path / "s.txt"
    config = parse_config(["run", "--T", "500", "--schedule", "cyclic", "--budget", "1,2"]).run_config
    emit_summary(run(config), config, str(out))
    assert "bound: n/a: premises not met" in out.read_text()


def test_lying_oracle_summary_and_exit(tmp_path):
    out = tmp_path / "s.txt"
    code = main(["run", "--oracle", "lying", "--lie-round", "12", "--T", "100",
                 "--out", str(tmp_path / "t.csv"), "--summary", str(out)])
    assert code == EXIT_INCONSISTENT
    assert "environment inconsistency at round 12" in out.read_text()


def test_io_failure_exit(tmp_path):
    assert main(["run", "--T", "5", "--out", str(tmp_path / "missing" / "t.csv"),
                 "--summary", str(tmp_path / "s.txt")]) == EXIT_IO


def test_capacity_exit(tmp_path, monkeypatch):
    monkeypatch.setattr(coords, "MAX_DENOMINATOR_BITS", 4)
    assert main(["run", "--T", "2000", "--out", str(tmp_path / "t.csv"),
                 "--summary", str(tmp_path / "s.txt")]) == EXIT_CAPACITY


def test_diagnose_and_scaling_commands(tmp_path, capsys):
    assert main(["diagnose", "--T", "800", "--no-trace", "--summary", str(tmp_path / "d.txt")]) == EXIT_OK
    assert "diagnostic ledger_min_selection: PASS" in (tmp_path / "d.txt").read_text()
    table = tmp_path / "scaling.csv"
    assert main(["scaling", "--horizons", "100,1000", "--out", str(table),
                 "--summary", str(tmp_path / "sc.txt")]) == EXIT_OK
    lines = table.read_text().splitlines()
    assert lines[0] == "T,R_T,bound" and len(lines) == 3
    assert "R_T ≤ bound: PASS" in (tmp_path / "sc.txt").read_text()


def test_no_trace_skips_csv(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["run", "--T", "10", "--no-trace", "--summary", "s.txt"]) == EXIT_OK
    assert not (tmp_path / "trace.csv").exists()
    assert "diagnostics: skipped" in (tmp_path / "s.txt").read_text()
