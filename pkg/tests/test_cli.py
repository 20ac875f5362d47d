import json

import numpy as np
import pytest

from zeroloc import cli


def run(*argv):
    return cli.main([str(a) for a in argv])


def body(path):
    """File contents without the timestamp line."""
    lines = path.read_text().splitlines()
    return [ln for ln in lines if "generated_at" not in ln]


def test_build_form_delta(data_dir, tmp_path):
    assert run("build-form", "--dist", data_dir / "delta.toml", "--N", 3, "--out", tmp_path) == 0
    A = np.loadtxt(tmp_path / "form.csv", delimiter=",", skiprows=2)
    assert np.array_equal(A, 2 * np.eye(7))
    summary = json.loads((tmp_path / "form.json").read_text())
    assert summary["report"]["N"] == 3


def test_build_form_sign_kernel(data_dir, tmp_path):
    from zeroloc.replab import mu_matrix
    assert run("build-form", "--dist", data_dir / "appendix_a.toml", "--N", 4, "--out", tmp_path) == 0
    A = np.loadtxt(tmp_path / "form.csv", delimiter=",", skiprows=2)
    assert np.abs(A - (2 * np.eye(9) + mu_matrix(4))).max() < 1e-12


def test_schema_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text("L = 1.0\nfoo = 2\n")
    assert run("build-form", "--dist", bad, "--N", 2, "--out", tmp_path) == 2
    assert "line 2" in capsys.readouterr().err
    assert run("build-form", "--dist", tmp_path / "missing.toml", "--N", 2, "--out", tmp_path) == 2


def test_verify_zeros_ok(data_dir, tmp_path):
    code = run("verify-zeros", "--dist", data_dir / "appendix_a.toml", "--N", 6,
               "--ladder", "2,4,6", "--out", tmp_path)
    assert code == 0
    s = json.loads((tmp_path / "summary.json").read_text())["report"]
    assert s["status"] == "all zeros certified real"
    assert s["parity"] == "even"
    assert s["dprime_match"] < 1e-8
    for name in ("ladder.csv", "zeros.csv", "xi_hat_trace.csv"):
        assert (tmp_path / name).exists()


def test_not_simple_exit(data_dir, tmp_path):
    assert run("verify-zeros", "--dist", data_dir / "delta.toml", "--N", 3, "--out", tmp_path) == 3


def test_negative_control_exits(data_dir, tmp_path):
    f = data_dir / "negative_control.toml"
    assert run("verify-zeros", "--form", f, "--mode", "kernel", "--out", tmp_path / "k") == 5
    assert run("verify-zeros", "--form", f, "--out", tmp_path / "m") == 4


def test_bad_ladder_is_schema_error(data_dir, tmp_path):
    assert run("verify-zeros", "--dist", data_dir / "delta.toml", "--N", 3,
               "--ladder", "4,2", "--out", tmp_path) == 2


def test_deterministic_modulo_timestamp(data_dir, tmp_path, monkeypatch):
    monkeypatch.delenv(cli.CACHE_ENV, raising=False)
    args = ("verify-zeros", "--dist", data_dir / "appendix_a.toml", "--N", 5)
    assert run(*args, "--out", tmp_path / "a") == 0
    assert run(*args, "--out", tmp_path / "b") == 0
    for name in ("summary.json", "zeros.csv", "xi_hat_trace.csv"):
        assert body(tmp_path / "a" / name) == body(tmp_path / "b" / name)


def test_cache_hit_byte_identical(data_dir, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path / "cache"))
    args = ("verify-zeros", "--dist", data_dir / "appendix_a.toml", "--N", 4)
    assert run(*args, "--out", tmp_path / "a") == 0
    assert run(*args, "--out", tmp_path / "b") == 0
    assert "cache hit" in capsys.readouterr().out
    for name in ("summary.json", "zeros.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    # a different parameter misses the cache
    assert run(*args, "--tol-real", "1e-6", "--out", tmp_path / "c") == 0
    key_a = json.loads((tmp_path / "a" / "summary.json").read_text())["report"]["cache_key"]
    key_c = json.loads((tmp_path / "c" / "summary.json").read_text())["report"]["cache_key"]
    assert key_a != key_c


def test_repro_small_targets(tmp_path, capsys):
    assert run("repro", "divided-differences", "--count", 20, "--out", tmp_path) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
    assert (tmp_path / "divided-differences.csv").exists()
    assert (tmp_path / "fixtures.json").exists()


def test_repro_appendix_a(tmp_path):
    assert run("repro", "appendix-a", "--ladder", "10,20,40", "--out", tmp_path) == 0
    lines = (tmp_path / "limits.csv").read_text().splitlines()
    assert len(lines) == 2 + 3
    assert len(lines[1].split(",")) == 8


def test_unknown_target_rejected():
    with pytest.raises(SystemExit):
        run("repro", "nope")
