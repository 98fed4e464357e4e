import csv
import io
import json

import pytest

from bianchi_fuchsian.circles import n2
from bianchi_fuchsian.cli import main


def run(capsys, *args):
    code = main(list(args))
    return code, capsys.readouterr().out


def test_classify_D5(capsys):
    code, out = run(capsys, "classify", "--D", "5", "--format", "json")
    recs = json.loads(out)
    assert code == 0
    assert [r["vol_over_pi"] for r in recs] == ["8", "4/3"]
    assert recs[1]["eichler_2"] == -1 and recs[1]["N"] == 10


@pytest.mark.parametrize("D, families", [(4, [1]), (18, [1, 3, 5])])
def test_classify_record_counts(capsys, D, families):
    _, out = run(capsys, "classify", "--D", str(D), "--format", "json")
    assert [r["family"] for r in json.loads(out)] == families


def test_table_rows(capsys):
    _, out = run(capsys, "table", "--dmax", "10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == sum(n2(D) for D in range(1, 11))


def test_csv_and_json_agree(capsys):
    _, c = run(capsys, "classify", "--D", "22")
    _, j = run(capsys, "classify", "--D", "22", "--format", "json")
    rows = list(csv.DictReader(io.StringIO(c)))
    recs = json.loads(j)
    for row, rec in zip(rows, recs, strict=True):
        assert row["vol_over_pi"] == rec["vol_over_pi"]
        assert row["order_basis"] == ";".join(",".join(r) for r in rec["order_basis"])
        assert row["eichler_2"] == ("" if rec["eichler_2"] is None else str(rec["eichler_2"]))


def test_count_row(capsys):
    code, out = run(capsys, "count", "--x", "4", "--pmax", "1000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["pi_x"] == "3"
    assert list(rows[0]) == ["x", "pi_x", "ratio", "predicted", "relative_gap"]


def test_count_deterministic_across_threads(capsys):
    _, a = run(capsys, "count", "--x", "500,2000", "--pmax", "1000")
    _, b = run(capsys, "count", "--x", "500,2000", "--pmax", "1000", "--threads", "3")
    assert a == b


def test_constant(capsys):
    _, out = run(capsys, "constant", "--pmax", "5", "--format", "json")
    (rec,) = json.loads(out)
    assert rec["exact"] == "77/80"
    assert rec["value"].startswith("0.9625")


def test_verify_pass_and_output_file(capsys, tmp_path):
    out = tmp_path / "sub" / "v.txt"
    code = main(["verify", "--suite", "volumes", "--dmax", "50", "--out", str(out)])
    assert code == 0
    assert "exact identity held for all cases" in out.read_text()


def test_verify_failure_exit_code(capsys, monkeypatch):
    from bianchi_fuchsian import cli
    from bianchi_fuchsian.verify import SuiteResult

    monkeypatch.setattr(cli, "run_suite", lambda *a: [SuiteResult("volumes", 12, [f"bad {i}" for i in range(12)])])
    code, out = run(capsys, "verify", "--suite", "volumes", "--dmax", "5")
    assert code == 1
    assert out.count("bad ") == 10


@pytest.mark.parametrize("args", [
    ["bogus"],
    ["classify"],
    ["classify", "--D", "0"],
    ["table", "--dmax", "5", "--unknown"],
    ["count", "--x", "a,b"],
    ["count", "--x", "-4"],
    ["verify", "--suite", "nope"],
])
def test_usage_errors_exit_2(args, capsys):
    with pytest.raises(SystemExit) as e:
        main(args)
    assert e.value.code == 2


def test_io_error_reports_path(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(SystemExit) as e:
        main(["classify", "--D", "3", "--out", str(blocker / "out.csv")])
    assert e.value.code == 2
    assert str(blocker / "out.csv") in capsys.readouterr().err
