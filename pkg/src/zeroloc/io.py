"""Input files (TOML key-value text) and report writers (CSV, JSON).

Distribution file::

    L = 1.0
    delta_weight = 1.0

    [[coefficients]]
    k = 1
    x = 0.0
    y = -3.141592653589793

Omitted ``k`` values are zero.  Form-structure files carry ``a``, ``b`` and
optionally ``lam`` arrays over indices ``-N..N``; Toeplitz files carry ``c``
as real numbers or ``[re, im]`` pairs.  See ``docs/schemas.md``.
"""

import csv
import datetime as _dt
import io as _io
import json
import re
import sys
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import SchemaError, ZerolocError
from .formbuilder import DistributionSpec, QuadraticFormStructure
from .toeplitz import HermitianToeplitz

__all__ = [
    "REPORT_SCHEMA",
    "load_toml",
    "load_distribution",
    "load_form",
    "load_toeplitz",
    "load_kernel_csv",
    "timestamp",
    "csv_text",
    "json_text",
    "write_csv",
    "write_json",
]

REPORT_SCHEMA = "zeroloc-report/1"


def _line_of(text, key, occurrence=0):
    """1-based line of the ``occurrence``-th ``key =`` or ``[[key]]`` line."""
    pat = re.compile(rf"^\s*(\[\[\s*{re.escape(key)}\s*\]\]|{re.escape(key)}\s*=)")
    hits = [i + 1 for i, ln in enumerate(text.splitlines()) if pat.match(ln)]
    return hits[occurrence] if len(hits) > occurrence else None


def load_toml(path):
    """Parse a TOML file; returns ``(data, text)``.  Syntax errors -> SchemaError."""
    text = Path(path).read_text()
    try:
        return tomllib.loads(text), text
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SchemaError(str(exc), line=int(m.group(1)) if m else None) from exc


def _number(data, text, key, default=None, positive=False):
    if key not in data:
        if default is None:
            raise SchemaError("missing required field", field=key)
        return default
    val = data[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise SchemaError(f"expected a number, got {val!r}", field=key, line=_line_of(text, key))
    if positive and not val > 0:
        raise SchemaError(f"must be positive, got {val}", field=key, line=_line_of(text, key))
    return float(val)


def _unknown(data, allowed, text):
    for key in data:
        if key not in allowed:
            raise SchemaError("unknown field", field=key, line=_line_of(text, key))


def load_distribution(path):
    """Read a distribution file into a DistributionSpec."""
    data, text = load_toml(path)
    _unknown(data, {"L", "delta_weight", "coefficients"}, text)
    L = _number(data, text, "L", default=1.0, positive=True)
    w = _number(data, text, "delta_weight", default=0.0)
    rows = data.get("coefficients", [])
    if not isinstance(rows, list):
        raise SchemaError("must be an array of tables", field="coefficients",
                          line=_line_of(text, "coefficients"))
    table = {}
    for i, row in enumerate(rows):
        line = _line_of(text, "coefficients", i)
        if not isinstance(row, dict):
            raise SchemaError("entries must be tables with k, x, y", field="coefficients", line=line)
        extra = set(row) - {"k", "x", "y"}
        if extra:
            raise SchemaError(f"unknown keys {sorted(extra)}", field="coefficients", line=line)
        k = row.get("k")
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise SchemaError(f"k must be a non-negative integer, got {k!r}", field="coefficients.k", line=line)
        if k in table:
            raise SchemaError(f"duplicate k = {k}", field="coefficients.k", line=line)
        vals = []
        for name in ("x", "y"):
            v = row.get(name, 0.0)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"expected a number, got {v!r}", field=f"coefficients.{name}", line=line)
            vals.append(float(v))
        if k == 0 and vals[1] != 0.0:
            raise SchemaError("y must be 0 for k = 0", field="coefficients.y", line=line)
        table[k] = vals
    K = max(table) if table else 0
    coeffs = np.zeros((K + 1, 2))
    for k, v in table.items():
        coeffs[k] = v
    return DistributionSpec(coeffs, w, L)


def _real_array(data, text, key, required=True):
    if key not in data:
        if required:
            raise SchemaError("missing required field", field=key)
        return None
    val = data[key]
    if not isinstance(val, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in val):
        raise SchemaError("expected an array of numbers", field=key, line=_line_of(text, key))
    return np.array(val, dtype=float)


def load_form(path):
    """Read a form-structure file into a QuadraticFormStructure."""
    data, text = load_toml(path)
    _unknown(data, {"a", "b", "lam"}, text)
    a = _real_array(data, text, "a")
    b = _real_array(data, text, "b")
    lam = _real_array(data, text, "lam", required=False)
    if len(a) % 2 == 0 or len(a) != len(b) or (lam is not None and len(lam) != len(a)):
        raise SchemaError("a, b (and lam) must share one odd length 2N+1", field="a", line=_line_of(text, "a"))
    try:
        return QuadraticFormStructure(a, b, lam)
    except (ValueError, ZerolocError) as exc:
        raise SchemaError(str(exc), field="a", line=_line_of(text, "a")) from exc


def load_toeplitz(path):
    """Read ``c = [c0, c1, ...]`` (reals or ``[re, im]`` pairs) into a HermitianToeplitz."""
    data, text = load_toml(path)
    _unknown(data, {"c"}, text)
    if "c" not in data:
        raise SchemaError("missing required field", field="c")
    vals = []
    for v in data["c"] if isinstance(data["c"], list) else [None]:
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            vals.append(complex(v))
        elif isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
            vals.append(complex(v[0], v[1]))
        else:
            raise SchemaError(f"bad entry {v!r}", field="c", line=_line_of(text, "c"))
    try:
        return HermitianToeplitz(np.array(vals))
    except ValueError as exc:
        raise SchemaError(str(exc), field="c", line=_line_of(text, "c")) from exc


def load_kernel_csv(path):
    """Two-column CSV ``x, h`` (header optional) -> arrays."""
    xs, hs = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                x, h = float(row[0]), float(row[1])
            except (ValueError, IndexError):
                if lineno == 1:
                    continue
                raise SchemaError(f"bad row {row!r}", field="x,h", line=lineno) from None
            xs.append(x)
            hs.append(h)
    if len(xs) < 2:
        raise SchemaError("need at least two samples", field="x,h")
    return np.array(xs), np.array(hs)


def timestamp():
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        return repr(complex(v))
    if isinstance(v, np.integer):
        return str(int(v))
    return "" if v is None else str(v)


def csv_text(header, rows, generated_at=None):
    """CSV with a leading ``# generated_at: ...`` comment line."""
    buf = _io.StringIO()
    buf.write(f"# generated_at: {generated_at or timestamp()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_text(payload, generated_at=None):
    """Versioned JSON summary; the timestamp sits alone on the second line
    so identical runs differ only there."""
    body = json.dumps(_jsonable(payload), indent=2, sort_keys=True)
    lines = [
        "{",
        f'  "generated_at": {json.dumps(generated_at or timestamp())},',
        f'  "schema": {json.dumps(REPORT_SCHEMA)},',
        '  "report": ' + body.replace("\n", "\n  "),
        "}",
    ]
    return "\n".join(lines) + "\n"


def write_csv(path, header, rows, generated_at=None):
    Path(path).write_text(csv_text(header, rows, generated_at))
    return Path(path)


def write_json(path, payload, generated_at=None):
    Path(path).write_text(json_text(payload, generated_at))
    return Path(path)
