import io
import json
import subprocess
import sys

import pytest

from er_lab.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_exact_csv():
    code, text = run("exact", "--n", "4", "--p", "0.5")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "r,exact_prob,tree_bound,ratio"
    assert lines[2] == "2,0.09375,0.125,0.75"
    assert len(lines) == 5


def test_sample_empty(tmp_path):
    code, text = run("sample", "--n", "5", "--p", "0", "--seed", "1")
    assert code == 0
    assert text == "5 0\n"


def test_sample_then_components(tmp_path, capsys):
    path = tmp_path / "g.txt"
    assert run("sample", "--n", "300", "--C", "1.5", "--seed", "4", "--out", str(path))[0] == 0
    code, text = run("components", "--in", str(path))
    assert code == 0
    sizes = [int(s) for s in text.split()]
    assert sum(sizes) == 300 and sizes == sorted(sizes, reverse=True)


def test_verify_ok():
    code, text = run("verify", "--n-max", "6", "--p-grid", "0.5")
    assert code == 0
    assert "0 violations" in text


def test_verify_range_grid():
    code, text = run("verify", "--n-max", "5", "--p-grid", "0.1:0.9:0.2")
    assert code == 0
    assert text.startswith(f"checked {5 * sum(range(2, 6))} ")


def test_bounds_csv():
    code, text = run("bounds", "--n", "12", "--C", "2.4", "--r-max", "6")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "r,log_tree_bound,log_simplified_bound,exact_log_prob,dominance_ok"
    assert len(lines) == 7
    first = lines[1].split(",")
    assert first[2] == "" and first[4] == "true"
    assert all(ln.endswith("true") for ln in lines[1:])


def test_bounds_large_n_has_no_exact_column():
    code, text = run("bounds", "--n", "1000", "--C", "20", "--r-max", "3")
    assert code == 0
    assert all(ln.split(",")[3] == "" for ln in text.splitlines()[1:])


def test_full_precision_numbers():
    _, text = run("bounds", "--n", "100", "--C", "3", "--r-max", "4")
    for ln in text.splitlines()[1:]:
        v = ln.split(",")[1]
        assert repr(float(v)) == v


def _write_config(tmp_path, **kw):
    data = dict(n=2000, C=0.3, trials=10, master_seed=3, regime="subcritical-T1")
    data.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    return path


def test_experiment_writes_both_csvs(tmp_path):
    path = _write_config(tmp_path)
    code, text = run("experiment", "--config", str(path), "--out-dir", str(tmp_path / "out"))
    assert code == 0
    report = (tmp_path / "out" / "report.csv").read_text()
    trials = (tmp_path / "out" / "trials.csv").read_text()
    assert report == text
    assert trials.splitlines()[0] == "trial_index,giant_size,second_size,small_sum"
    assert [int(ln.split(",")[0]) for ln in trials.splitlines()[1:]] == list(range(10))


def test_experiment_exit_code_on_failure(tmp_path):
    # M=1 gives cutoff ln 2000 = 7.6; at C=0.3 some component that large turns up
    path = _write_config(tmp_path, M_policy=1, trials=200)
    code, text = run("experiment", "--config", str(path), "--out-dir", str(tmp_path))
    assert ("fail" in text) == (code == 2)
    assert code == 2


def test_experiment_byte_identical(tmp_path):
    path = _write_config(tmp_path, n=5000, C=25.0, regime="theorem2", trials=4)
    run("experiment", "--config", str(path), "--out-dir", str(tmp_path / "a"))
    run("experiment", "--config", str(path), "--out-dir", str(tmp_path / "b"))
    for name in ("report.csv", "trials.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["sample", "--n", "5"],
        ["sample", "--n", "5", "--p", "0.1", "--C", "1"],
        ["exact", "--n", "4", "--p", "abc"],
        ["sample", "--n", "5", "--p", "2"],
        ["exact", "--n", "100", "--p", "0.5"],
        ["experiment", "--config", "/nonexistent.json"],
    ],
)
def test_usage_errors(argv, capsys):
    assert main(argv, out=io.StringIO()) == 1
    assert capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "er_lab", "exact", "--n", "3", "--p", "1/2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[3].startswith("3,0.5,")
