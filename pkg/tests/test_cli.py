import subprocess
import sys

import pytest

from marginalfs.cli import main


@pytest.fixture
def dataset(tmp_path):
    assert main(["synth", "--n", "60", "--p", "12", "--n-nonnull", "3", "--shift", "2",
                 "--seed", "4", "--output-dir", str(tmp_path)]) == 0
    return tmp_path / "synthetic.csv"


def _run(*args):
    return main([str(a) for a in args])


def test_synth_is_deterministic(tmp_path, dataset):
    other = tmp_path / "again"
    _run("synth", "--n", 60, "--p", 12, "--n-nonnull", 3, "--shift", 2, "--seed", 4,
         "--output-dir", other)
    assert (other / "synthetic.csv").read_bytes() == dataset.read_bytes()
    assert dataset.read_text().splitlines()[0].startswith("label,f0000")


def test_select(tmp_path, dataset, capsys):
    out = tmp_path / "sel"
    assert _run("select", "--input", dataset, "--statistic", "auc", "--pvalue", "exact",
                "--output-dir", out) == 0
    lines = (out / "features.tsv").read_text().splitlines()
    assert lines[0] == "feature\tstatistic\tp\tp_adjusted\tselected"
    assert len(lines) == 13
    assert [l.split("\t")[4] for l in lines[1:4]] == ["1", "1", "1"]
    assert "selected" in capsys.readouterr().out


def test_select_threads_byte_identical(tmp_path, dataset):
    outputs = []
    for threads in (1, 8):
        out = tmp_path / f"t{threads}"
        assert _run("select", "--input", dataset, "--resample", "--m", 20, "--ell", 30,
                    "--n-perm", 200, "--threads", threads, "--seed", 3,
                    "--output-dir", out) == 0
        outputs.append((out / "features.tsv").read_bytes())
    assert outputs[0] == outputs[1]


def test_config_file_and_flag_precedence(tmp_path, dataset):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("statistic = auc\npvalue = exact\nalpha = 0.5\n")
    a, b = tmp_path / "a", tmp_path / "b"
    _run("select", "--input", dataset, "--config", cfg, "--output-dir", a)
    _run("select", "--input", dataset, "--config", cfg, "--alpha", 0.01, "--output-dir", b)
    sel_a = [l.split("\t")[4] for l in (a / "features.tsv").read_text().splitlines()[1:]]
    sel_b = [l.split("\t")[4] for l in (b / "features.tsv").read_text().splitlines()[1:]]
    assert sel_a.count("1") >= sel_b.count("1")
    stat = (a / "features.tsv").read_text().splitlines()[1].split("\t")[1]
    assert 0 <= float(stat) <= 1


def test_stability(tmp_path, dataset):
    out = tmp_path / "st"
    assert _run("stability", "--input", dataset, "--statistic", "auc", "--folds", 3,
                "--s-grid", "1,3,12", "--output-dir", out) == 0
    lines = (out / "stability.csv").read_text().splitlines()
    assert lines[0] == "s,count,method"
    assert lines[-1] == "12,12,auc"


def test_ell_sweep(tmp_path, dataset):
    out = tmp_path / "ell"
    assert _run("ell-sweep", "--input", dataset, "--m", 20, "--n-perm", 100, "--folds", 1,
                "--ell-grid", "5,10", "--output-dir", out) == 0
    lines = (out / "ell_sweep.csv").read_text().splitlines()
    assert lines[0] == "fold,ell,n_selected"
    assert [l.rsplit(",", 1)[0] for l in lines[1:]] == ["0,5", "0,10"]


def test_verify(capsys):
    assert _run("verify", "--max-n", 8) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 4 and "FAIL" not in out


def test_bad_label_reports_one_line(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("label,a\n0,1\n2,3\n")
    assert _run("select", "--input", bad, "--output-dir", tmp_path) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    kind, name, message = err[0].split("\t")
    assert (kind, name) == ("error", "DataFormatError")
    assert "row 2" in message and "'label'" in message


def test_missing_file(tmp_path, capsys):
    assert _run("select", "--input", tmp_path / "nope.csv") == 2
    assert capsys.readouterr().err.startswith("error\tFileNotFoundError\t")


def test_invalid_config_value(tmp_path, dataset, capsys):
    assert _run("select", "--input", dataset, "--alpha", 2, "--output-dir", tmp_path) == 2
    assert "alpha" in capsys.readouterr().err


def test_argparse_errors_exit_nonzero():
    with pytest.raises(SystemExit) as info:
        main(["select", "--statistic", "gini", "--input", "x"])
    assert info.value.code != 0


def test_console_entry_point(tmp_path, dataset):
    proc = subprocess.run(
        [sys.executable, "-m", "marginalfs.cli", "select", "--input", str(dataset),
         "--statistic", "auc", "--pvalue", "exact", "--output-dir", str(tmp_path / "m")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "m" / "features.tsv").exists()
