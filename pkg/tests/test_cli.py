import csv
import io
import json
import subprocess
import sys

import pytest

from nonresidue import cli, scan


def run_cli(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_scan_small_range(capsys, golden):
    code, out, _ = run_cli(["scan", "--lo", "3", "--hi", "100"], capsys)
    assert code == 0
    assert "\r" not in out
    got = rows(out)
    assert len(got) == len(golden["scan_3_100"]) == 24
    for row, ref in zip(got, golden["scan_3_100"]):
        assert (int(row["p"]), int(row["g"]), int(row["n"])) == (ref["p"], ref["g"], ref["n"])
    p7 = next(r for r in got if r["p"] == "7")
    assert p7["targets"] == "2;3" and p7["r"] == "2"


def test_scan_single_prime(capsys):
    code, out, _ = run_cli(["scan", "--lo", "5", "--hi", "5"], capsys)
    assert code == 0 and len(rows(out)) == 1


def test_scan_rows_revalidate(capsys):
    _, out, _ = run_cli(["scan", "--lo", "3", "--hi", "2000", "--targets", "first:2"], capsys)
    for row in rows(out):
        p = int(row["p"])
        targets = [int(q) for q in row["targets"].split(";")]
        assert int(row["n"]) == scan.least_simultaneous_nonresidue(p, targets)
        assert int(row["g"]) == scan.least_primitive_root(p)


def test_usage_errors(capsys):
    assert run_cli(["scan", "--lo", "10", "--hi", "5"], capsys)[0] == 2
    assert run_cli(["scan", "--primes", "7,9"], capsys)[0] == 2
    assert run_cli(["scan", "--hi", "20", "--targets", "4"], capsys)[0] == 2
    code, _, err = run_cli(["spacing", "--x", "10", "--t", "5", "--c", "1.5"], capsys)
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        cli.main(["bogus"])
    assert exc.value.code == 2


def test_explicit_targets_skip_primes(capsys):
    _, out, _ = run_cli(["scan", "--lo", "3", "--hi", "30", "--targets", "3"], capsys)
    assert [r["p"] for r in rows(out)] == ["7", "13", "19"]


def test_reduce(capsys):
    _, out, _ = run_cli(["reduce", "--primes", "7", "--targets", "2"], capsys)
    (row,) = rows(out)
    assert (row["n"], row["steps"], row["final"], row["chain"]) == ("6", "1", "3", "6>3")
    _, out, _ = run_cli(["reduce", "--lo", "3", "--hi", "50", "--cap", "0"], capsys)
    assert {r["n"] for r in rows(out)} == {"none-found"}


def test_count_and_charsum(capsys):
    _, out, _ = run_cli(["count", "--primes", "7", "--targets", "2,3", "--H-rule", "6"], capsys)
    (row,) = rows(out)
    assert (row["J"], row["H"]) == ("2", "6")
    assert float(row["main_term"]) == pytest.approx(2.0)
    _, out, _ = run_cli(["charsum", "--primes", "5", "--k", "2"], capsys)
    (row,) = rows(out)
    assert float(row["abs"]) == 0.0 and row["order"] == "2"
    _, out, _ = run_cli(["charsum", "--primes", "13", "--k", "all", "--H-rule", "half"], capsys)
    assert len(rows(out)) == 11


def test_spacing(capsys, golden):
    _, out, _ = run_cli(["spacing", "--x", "100", "--t", "2", "--c", "1.5"], capsys)
    (row,) = rows(out)
    assert int(row["count_good"]) == golden["spacing_100_2_1.5"]
    assert row["count_clustered"] == ""
    _, out, _ = run_cli(["spacing", "--x", "1000", "--t", "4", "--c", "1.0"], capsys)
    (row,) = rows(out)
    assert int(row["count_clustered"]) == golden["sharpness_1000_4_1.0"]


def test_json_mirrors_csv(capsys):
    _, text_csv, _ = run_cli(["count", "--lo", "3", "--hi", "60", "--H-rule", "half"], capsys)
    _, text_json, _ = run_cli(
        ["count", "--lo", "3", "--hi", "60", "--H-rule", "half", "--format", "json"], capsys
    )
    as_csv = rows(text_csv)
    as_json = json.loads(text_json)
    assert len(as_csv) == len(as_json)
    for a, b in zip(as_csv, as_json):
        assert int(a["J"]) == b["J"] and a["targets"] == b["targets"]


def test_workers_do_not_change_output(tmp_path):
    outs = []
    for w in (1, 4):
        path = tmp_path / f"w{w}.csv"
        assert cli.main(["scan", "--lo", "3", "--hi", "3000", "--workers", str(w), "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nonresidue", "scan", "--primes", "7"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert proc.stdout.splitlines()[1].startswith("7,2,2;3,3,3,")
