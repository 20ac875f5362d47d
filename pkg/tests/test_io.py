import json

import numpy as np
import pytest

from zeroloc import io as zio
from zeroloc.errors import SchemaError


def write(tmp_path, text, name="in.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_distribution_roundtrip(data_dir):
    d = zio.load_distribution(data_dir / "appendix_a.toml")
    assert d.L == 1.0
    assert d.delta_weight == 1.0
    assert d.coeffs.shape == (2, 2)
    assert d.coeffs[1, 1] == pytest.approx(-np.pi)


def test_unknown_field_reports_line(tmp_path):
    p = write(tmp_path, "L = 1.0\ndelta_weigth = 2.0\n")
    with pytest.raises(SchemaError) as exc:
        zio.load_distribution(p)
    assert exc.value.field == "delta_weigth"
    assert exc.value.line == 2


def test_duplicate_k_reports_second_table(tmp_path):
    text = "[[coefficients]]\nk = 1\nx = 1.0\n\n[[coefficients]]\nk = 1\ny = 2.0\n"
    with pytest.raises(SchemaError) as exc:
        zio.load_distribution(write(tmp_path, text))
    assert exc.value.field == "coefficients.k"
    assert exc.value.line == 5


def test_bad_values(tmp_path):
    cases = [
        ("L = -1.0\n", "L"),
        ('L = "one"\n', "L"),
        ("[[coefficients]]\nk = 0\ny = 1.0\n", "coefficients.y"),
        ("[[coefficients]]\nk = -2\n", "coefficients.k"),
        ("[[coefficients]]\nk = 1\nz = 1.0\n", "coefficients"),
    ]
    for text, field in cases:
        with pytest.raises(SchemaError) as exc:
            zio.load_distribution(write(tmp_path, text))
        assert exc.value.field == field


def test_toml_syntax_error_has_line(tmp_path):
    with pytest.raises(SchemaError) as exc:
        zio.load_distribution(write(tmp_path, "L = 1.0\nL = = 2\n"))
    assert exc.value.line == 2


def test_load_form(data_dir, tmp_path):
    Q = zio.load_form(data_dir / "negative_control.toml")
    assert Q.N == 1
    with pytest.raises(SchemaError):
        zio.load_form(write(tmp_path, "a = [1.0, 2.0]\nb = [0.0, 0.0]\n"))


def test_load_toeplitz(tmp_path):
    T = zio.load_toeplitz(write(tmp_path, "c = [2.0, [0.5, 0.25], 0.1]\n"))
    A = T.matrix()
    assert A.shape == (3, 3)
    assert np.allclose(A, A.conj().T)
    with pytest.raises(SchemaError):
        zio.load_toeplitz(write(tmp_path, 'c = [1.0, "x"]\n'))


def test_kernel_csv(tmp_path):
    p = write(tmp_path, "x,h\n0,1\n0.5,0.5\n1,0\n", "k.csv")
    x, h = zio.load_kernel_csv(p)
    assert np.array_equal(x, [0, 0.5, 1])
    bad = write(tmp_path, "x,h\n0,1\n0.5,oops\n", "bad.csv")
    with pytest.raises(SchemaError) as exc:
        zio.load_kernel_csv(bad)
    assert exc.value.line == 3


def test_csv_format():
    text = zio.csv_text(["a", "b", "ok"], [(1, 0.1, True), (np.int64(2), np.float64(1 / 3), False)],
                        generated_at="T")
    lines = text.splitlines()
    assert lines[0] == "# generated_at: T"
    assert lines[1] == "a,b,ok"
    assert lines[3] == f"2,{1 / 3!r},false"
    assert float(lines[3].split(",")[1]) == 1 / 3


def test_json_format():
    text = zio.json_text({"z": np.arange(2), "x": np.float64(np.nan), "c": 1 + 2j}, generated_at="T")
    lines = text.splitlines()
    assert lines[1] == '  "generated_at": "T",'
    data = json.loads(text)
    assert data["schema"] == zio.REPORT_SCHEMA
    assert data["report"] == {"c": [1.0, 2.0], "x": "nan", "z": [0, 1]}
    a = zio.json_text({"k": 1}, generated_at="T1").splitlines()
    b = zio.json_text({"k": 1}, generated_at="T2").splitlines()
    assert [i for i, (x, y) in enumerate(zip(a, b)) if x != y] == [1]
