from __future__ import annotations

import csv
import io
import subprocess
import sys

import pytest

from packmm import IntMatrix, read_matrix, write_matrix
from packmm.cli import ConfigError, RunConfig, main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


@pytest.fixture
def golden_files(tmp_path, golden):
    a, b, c = golden
    write_matrix(a, tmp_path / "a.txt")
    write_matrix(b, tmp_path / "b.txt")
    return tmp_path, c


def test_gen_deterministic(tmp_path):
    p1, p2 = tmp_path / "x.txt", tmp_path / "y.txt"
    assert run("gen", "--n", "8", "--digits", "1", "--seed", "42", "--out", str(p1))[0] == 0
    assert run("gen", "--n", "8", "--digits", "1", "--seed", "42", "--out", str(p2))[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    m = read_matrix(p1)
    assert m.shape == (8, 8) and m.max_entry() < 10


def test_gen_bound_and_roundtrip(tmp_path):
    path = tmp_path / "big.txt"
    run("gen", "--n", "100", "--digits", "3", "--seed", "1", "--out", str(path))
    m = read_matrix(path)
    assert m.max_entry() < 1000 and m.min_entry() >= 0
    _, text = run("gen", "--n", "2", "--digits", "1", "--seed", "9")
    assert text.startswith("2 2 1\n")


def test_mul_recursive_golden(golden_files):
    tmp, c = golden_files
    code, text = run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--engine", "recursive", "--out", str(tmp / "c.txt"))
    assert code == 0
    assert text.strip() == "count=832, verified"
    assert read_matrix(tmp / "c.txt") == c


def test_mul_flat_same_file(golden_files):
    tmp, _ = golden_files
    run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--engine", "recursive", "--out", str(tmp / "r.txt"))
    code, _ = run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--out", str(tmp / "f.txt"))
    assert code == 0
    assert (tmp / "r.txt").read_bytes() == (tmp / "f.txt").read_bytes()


@pytest.mark.parametrize("engine", ["fixedpoint", "signed", "classical", "binet", "strassen"])
def test_mul_every_engine(golden_files, engine):
    tmp, c = golden_files
    code, text = run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--engine", engine, "--out", str(tmp / "o.txt"))
    assert code == 0 and text.strip().endswith("verified")
    assert read_matrix(tmp / "o.txt") == c


def test_mul_undersized_e_fails(golden_files):
    tmp, _ = golden_files
    code, text = run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--force-e", "1")
    assert code == 1
    assert "MISMATCH" in text
    code, text = run("mul", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"), "--force-e", "1", "--no-verify")
    assert code == 0 and "verified" not in text


def test_mul_preconditions(tmp_path, capsys):
    write_matrix(IntMatrix([[1, 2, 3]] * 3), tmp_path / "a.txt")
    args = ("mul", "--a", str(tmp_path / "a.txt"), "--b", str(tmp_path / "a.txt"))
    assert run(*args, "--engine", "recursive")[0] == 2
    assert "power-of-two" in capsys.readouterr().err
    assert run(*args, "--engine", "recursive", "--pad")[0] == 0
    (tmp_path / "bad.txt").write_text("2 2 1\n1 2\n")
    assert run("mul", "--a", str(tmp_path / "bad.txt"), "--b", str(tmp_path / "a.txt"))[0] == 2
    assert run("mul", "--a", str(tmp_path / "missing.txt"), "--b", str(tmp_path / "a.txt"))[0] == 2


def test_verify_subcommand(golden_files):
    tmp, c = golden_files
    write_matrix(c, tmp / "c.txt")
    bumped = c.as_object()
    bumped[0, 0] += 1
    write_matrix(IntMatrix(bumped), tmp / "bad.txt")
    base = ("verify", "--a", str(tmp / "a.txt"), "--b", str(tmp / "b.txt"))
    assert run(*base, "--c", str(tmp / "c.txt")) == (0, "verified max_abs_diff=0\n")
    assert run(*base, "--c", str(tmp / "bad.txt")) == (1, "MISMATCH max_abs_diff=1\n")


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bench_coefficients():
    code, text = run("bench", "--n", "4", "8", "16", "32", "--engine", "recursive")
    assert code == 0
    rows = _rows(text)
    assert [r["coefficient"] for r in rows] == ["9", "13", "17", "21"]
    assert [int(r["ops"]) for r in rows] == [144, 832, 4352, 21504]


def test_bench_binet_column_and_csv_file(tmp_path):
    out = tmp_path / "b.csv"
    assert run("bench", "--n", "8", "--engine", "binet,classical", "--csv", str(out))[0] == 0
    rows = _rows(out.read_text())
    assert rows[0]["algorithm"] == "binet" and rows[0]["predicted"] == "1024"
    assert rows[1]["ops"] == "960"


def test_bench_empty_is_header_only():
    code, text = run("bench", "--n")
    assert code == 0
    assert text == "N,algorithm,ops,predicted,digits,wall_ns,coefficient\n"


def test_bench_deterministic_except_wall_time():
    args = ("bench", "--n", "2", "4", "--engine", "flat,recursive,signed", "--digits", "2", "--trials", "2")
    strip = lambda t: [{k: v for k, v in r.items() if k != "wall_ns"} for r in _rows(t)]  # noqa: E731
    assert strip(run(*args)[1]) == strip(run(*args)[1])


def test_bench_marks_failed_cells(capsys):
    code, text = run("bench", "--n", "8", "--engine", "flat", "--force-e", "1", "--digits", "2")
    assert code == 0
    row = _rows(text)[0]
    assert row["ops"] == "" and row["wall_ns"] == ""
    assert "mismatch" in capsys.readouterr().err


def test_predict():
    code, text = run("predict", "--n", "512", "--model", "unit_cost")
    assert code == 0
    assert "closed_form=9699328" in text and "machine_cost[unit_cost]=9699328" in text
    assert "recurrence=9699328" in text
    _, text8 = run("predict", "--n", "8")
    assert "closed_form=832" in text8 and "required_digits=58" in text8


def test_predict_log_d_monotone():
    def cost(n):
        _, text = run("predict", "--n", str(n), "--model", "log_d")
        return float(text.split("machine_cost[log_d]=")[1].split()[0])

    assert 0 < cost(32) < cost(64)


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("bench", engines=("recursive",), ns=(6,)).validate()
    RunConfig("bench", engines=("recursive",), ns=(6,), pad=True).validate()
    with pytest.raises(ConfigError):
        RunConfig("bench", engines=("nope",)).validate()
    with pytest.raises(ConfigError):
        RunConfig("bench", engines=("classical",), force_e=3).validate()
    with pytest.raises(ConfigError):
        RunConfig("predict", ns=(12,)).validate()
    with pytest.raises(ConfigError):
        RunConfig("gen", ns=(4,), digits=0).validate()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "packmm", "predict", "--n", "8"], capture_output=True, text=True)
    assert proc.returncode == 0 and "closed_form=832" in proc.stdout
