import csv
import io
import json

import pytest

from isoquant.cli import SCAN_HEADER, VERIFY_HEADER, main
from isoquant.verify import SUITES, ConfigError, RunConfig, run_verify


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_every_suite_passes_by_default(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    table = rows(out)
    assert code == 0
    assert tuple(table[0]) == VERIFY_HEADER
    assert [r[0] for r in table[1:]] == sorted(r[0] for r in table[1:])
    assert all(r[3] == "pass" for r in table[1:])


def test_zero_tolerance_forces_failure(capsys):
    code, out, _ = run(capsys, "verify", "bialgebra", "--tol", "cocycle=0")
    line = next(r for r in rows(out) if r[0] == "cocycle")
    assert code == 1 and line[3] == "fail" and float(line[1]) > 0


def test_same_seed_same_bytes(capsys):
    _, a, _ = run(capsys, "verify", "hopf", "--seed", "7")
    _, b, _ = run(capsys, "verify", "hopf", "--seed", "7")
    _, c, _ = run(capsys, "verify", "hopf", "--seed", "8")
    assert a == b and a != c


@pytest.mark.parametrize(
    "argv",
    [
        ("scan", "bch", "--halvings", "0"),
        ("scan", "bch", "--kappa-start", "-1"),
        ("verify", "nope"),
        ("verify", "hopf", "--tol", "missing=1"),
        ("verify", "hopf", "--tol", "unit"),
        ("verify", "hopf", "--tol", "unit=-1"),
        ("verify", "qybe", "--jmax", "0.3"),
        (),
    ],
)
def test_config_errors_exit_2(capsys, argv):
    assert main(list(argv)) == 2


@pytest.mark.parametrize("name,band", [("r-limit", (1.8, 2.2)), ("bch", (2.8, 3.2))])
def test_scans(capsys, name, band):
    code, out, _ = run(capsys, "scan", name)
    table = rows(out)
    assert code == 0 and tuple(table[0]) == SCAN_HEADER
    assert len(table) == 1 + 8 + 1
    assert table[1][3] == "" and table[-1][0] == f"{name}:order"
    assert band[0] <= float(table[-1][2]) <= band[1]


def test_json_and_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "verify", "bialgebra", "--format", "json", "--out", str(target))
    assert code == 0 and out == ""
    data = json.loads(target.read_text())
    assert set(data[0]) == set(VERIFY_HEADER)


def test_fock_rosly_table_and_note(capsys):
    code, out, err = run(capsys, "table", "fock-rosly")
    table = {(r[0], r[1]): r[2] for r in rows(out)[1:]}
    assert code == 0 and "repeats f1" in err
    assert table[("j1", "j2")] == "j3" and table[("p1", "j3")] == "-p2" and table[("p1", "p2")] == "0"


def test_timing_flag_records_wall_time():
    reports = run_verify("bialgebra", RunConfig(timing=True))
    assert all(r.ms >= 0 for r in reports)
    assert all(r.ms == 0 for r in run_verify("bialgebra", RunConfig()))


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(halvings=1)
    with pytest.raises(ConfigError):
        run_verify("bialgebra", RunConfig(tol={"nonexistent": 1.0}))
