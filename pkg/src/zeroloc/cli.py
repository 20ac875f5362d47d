"""Command-line entry point: ``zeroloc build-form | verify-zeros | repro``.

Exit codes: 0 success, 1 reproduction failure, 2 schema violation,
3 minimal eigenvalue not simple, 4 kernel vector not even, 5 zeros not
certified real.  ``ZEROLOC_CACHE_DIR`` enables the verify-zeros cache.
"""

import argparse
import hashlib
import json
import os
import shutil
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import io as zio
from .errors import EtaOrthogonal, NotSimple, SchemaError, ZerolocError
from .formbuilder import build_form, delta_shift
from .rankone import ModelOperator, build_dprime, dprime_spectrum
from .spectral import extremal_pair, sym_eig, truncation_sweep
from .zeros import DEFAULT_TOL_REAL, build_p, multiset_distance, poly_roots, xi_hat_eval, xi_hat_zeros

EXIT_OK = 0
EXIT_REPRO = 1
EXIT_SCHEMA = 2
EXIT_NOT_SIMPLE = 3
EXIT_NOT_EVEN = 4
EXIT_NOT_REAL = 5

CACHE_ENV = "ZEROLOC_CACHE_DIR"
REPRO_TARGETS = (
    "appendix-a",
    "appendix-b",
    "toeplitz-suite",
    "spectral-action",
    "finmain",
    "general-lambda",
    "shannon",
    "divided-differences",
    "continuous-kernel",
)


@dataclass
class RunConfig:
    command: str
    dist: Optional[Path] = None
    form: Optional[Path] = None
    N: Optional[int] = None
    ladder: list = field(default_factory=list)
    tol_real: float = DEFAULT_TOL_REAL
    tol_gap: Optional[float] = None
    psd_margin: float = 1e-9
    out: Path = Path(".")
    seed: Optional[int] = None
    grid: Optional[int] = None
    count: Optional[int] = None
    target: Optional[str] = None
    mode: str = "min"

    def __post_init__(self):
        for name in ("tol_real", "psd_margin"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.tol_gap is not None and not self.tol_gap > 0:
            raise ValueError("tol_gap must be positive")
        if any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise ValueError("ladder must be strictly ascending")

    def params(self):
        """Parameters that determine the output, for cache keys."""
        return {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(self).items())
                if k not in ("out", "dist", "form")}


def _parse_ladder(text):
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser():
    p = argparse.ArgumentParser(prog="zeroloc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")

    bf = sub.add_parser("build-form", help="materialize the quadratic-form matrix of a distribution")
    bf.add_argument("--dist", type=Path, required=True)
    bf.add_argument("--N", type=int, required=True)
    common(bf)

    vz = sub.add_parser("verify-zeros", help="minimal eigenvector -> kernel polynomial -> certified zeros")
    src = vz.add_mutually_exclusive_group(required=True)
    src.add_argument("--dist", type=Path)
    src.add_argument("--form", type=Path, help="form-structure file (a, b, lam)")
    vz.add_argument("--N", type=int, help="truncation (required with --dist)")
    vz.add_argument("--ladder", type=_parse_ladder, default=[], help="comma-separated N values for a truncation sweep")
    vz.add_argument("--tol-real", type=float, default=DEFAULT_TOL_REAL)
    vz.add_argument("--tol-gap", type=float, default=None)
    vz.add_argument("--mode", choices=("min", "kernel"), default="min",
                    help="min: shift by the minimal eigenvalue; kernel: use the null vector as given")
    common(vz)

    rp = sub.add_parser("repro", help="run a reproduction suite")
    rp.add_argument("target", choices=REPRO_TARGETS)
    rp.add_argument("--seed", type=int, default=None)
    rp.add_argument("--grid", type=int, default=None)
    rp.add_argument("--count", type=int, default=None)
    rp.add_argument("--ladder", type=_parse_ladder, default=[])
    common(rp)
    return p


# ---------------------------------------------------------------- cache

def _cache_key(cfg, inputs):
    h = hashlib.sha256()
    for path in inputs:
        h.update(Path(path).read_bytes())
        h.update(b"\0")
    h.update(json.dumps(cfg.params(), sort_keys=True, default=str).encode())
    return h.hexdigest()


def _cache_dir():
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def _cache_load(key, out):
    root = _cache_dir()
    if root is None or not (root / key / "exit_code").exists():
        return None
    entry = root / key
    out.mkdir(parents=True, exist_ok=True)
    for f in entry.iterdir():
        if f.name != "exit_code":
            shutil.copyfile(f, out / f.name)
    return int((entry / "exit_code").read_text())


def _cache_store(key, out, files, code):
    root = _cache_dir()
    if root is None:
        return
    entry = root / key
    entry.mkdir(parents=True, exist_ok=True)
    for name in files:
        shutil.copyfile(out / name, entry / name)
    (entry / "exit_code").write_text(str(code))


# ---------------------------------------------------------------- commands

def cmd_build_form(cfg):
    dist = zio.load_distribution(cfg.dist)
    Q = build_form(dist, cfg.N)
    cfg.out.mkdir(parents=True, exist_ok=True)
    A = Q.matrix()
    zio.write_csv(cfg.out / "form.csv", [f"q[{j}]" for j in Q.lam.astype(int)], A)
    zio.write_json(cfg.out / "form.json", {
        "command": "build-form",
        "N": cfg.N,
        "L": dist.L,
        "delta_weight": dist.delta_weight,
        "a": Q.a,
        "b": Q.b,
        "lam": Q.lam,
    })
    print(f"wrote {cfg.out / 'form.csv'} ({A.shape[0]}x{A.shape[1]})")
    return EXIT_OK


def _kernel_pair(A, tol_gap):
    """Eigenpair of smallest |eigenvalue| with its gap; NotSimple if clustered."""
    from .spectral import EigenPair, parity
    w, V = sym_eig(A)
    order = np.argsort(np.abs(w))
    i = order[0]
    gap = float(abs(w[order[1]] - w[i])) if len(w) > 1 else np.inf
    v = V[:, i]
    v = v / (np.sign(v[np.argmax(np.abs(v))]) or 1.0)
    pair = EigenPair(float(w[i]), v, gap, parity(v))
    tol = tol_gap if tol_gap is not None else 1e-8 * max(np.abs(w).max(), 1.0)
    if gap <= tol:
        raise NotSimple(gap, value=pair)
    return pair


def cmd_verify_zeros(cfg):
    inputs = [cfg.dist or cfg.form]
    key = _cache_key(cfg, inputs)
    cached = _cache_load(key, cfg.out)
    if cached is not None:
        print(f"cache hit {key[:12]}")
        return cached

    cfg.out.mkdir(parents=True, exist_ok=True)
    summary = {"command": "verify-zeros", "cache_key": key, "mode": cfg.mode,
               "tol_real": cfg.tol_real}
    files = ["summary.json"]
    if cfg.dist is not None:
        if cfg.N is None:
            raise SchemaError("--N is required with --dist", field="N")
        dist = zio.load_distribution(cfg.dist)
        Q = build_form(dist, cfg.N)
    else:
        dist = None
        Q = zio.load_form(cfg.form)
    summary["N"] = Q.N

    if cfg.ladder and dist is not None:
        lad = truncation_sweep(dist, cfg.ladder, cfg.tol_gap, cfg.tol_real)
        zio.write_csv(cfg.out / "ladder.csv", ["N", "lambda_min", "gap", "parity", "max_im_root"], lad.rows())
        files.append("ladder.csv")
        summary["ladder_monotone"] = lad.monotone

    def finish(code, status):
        summary["status"] = status
        summary["exit_code"] = code
        zio.write_json(cfg.out / "summary.json", summary)
        _cache_store(key, cfg.out, files, code)
        print(f"{status} (exit {code})")
        return code

    try:
        if cfg.mode == "min":
            pair = extremal_pair(Q.matrix(), "min", cfg.tol_gap)
        else:
            pair = _kernel_pair(Q.matrix(), cfg.tol_gap)
    except NotSimple as exc:
        summary["gap"] = exc.gap
        return finish(EXIT_NOT_SIMPLE, "eigenvalue not simple")
    summary.update(eigenvalue=pair.value, gap=pair.gap, parity=pair.parity)
    if pair.parity != "even":
        return finish(EXIT_NOT_EVEN, f"kernel vector is {pair.parity}")

    Q0 = delta_shift(Q, -pair.value / 2) if cfg.mode == "min" else Q
    D = ModelOperator(Q.lam)
    try:
        Dp = build_dprime(Q0, D, pair.vector)
    except EtaOrthogonal:
        return finish(EXIT_NOT_REAL, "eta orthogonal to xi; D' undefined")
    rep = poly_roots(build_p(Dp.xi, Q.lam), cfg.tol_real)
    spec = dprime_spectrum(Dp)
    summary.update(
        kernel_residual=Dp.kernel_residual,
        p_roots=[[z.real, z.imag] for z in rep.zeros],
        p_max_abs_imag=rep.max_abs_imag,
        p_certified_real=rep.certified_real,
        dprime_match=multiset_distance(np.concatenate([[0.0], rep.zeros]), spec),
    )
    certified = rep.certified_real
    if Q.is_circle_model:
        radius = 2 * np.pi * (Q.N + 4)
        zr = xi_hat_zeros(Dp.xi, radius, cfg.tol_real)
        flags = np.abs(zr.zeros.imag) <= cfg.tol_real * (1 + np.abs(zr.zeros))
        zio.write_csv(cfg.out / "zeros.csv", ["re", "im", "abs_xi_hat", "certified"],
                      zip(zr.zeros.real, zr.zeros.imag, zr.residuals, flags))
        s = np.linspace(-radius, radius, 2001)
        xi_n = Dp.xi / np.linalg.norm(Dp.xi)
        zio.write_csv(cfg.out / "xi_hat_trace.csv", ["s", "abs_xi_hat"], zip(s, np.abs(xi_hat_eval(xi_n, s))))
        files += ["zeros.csv", "xi_hat_trace.csv"]
        summary.update(xi_hat_zero_count=len(zr.zeros), xi_hat_max_abs_imag=zr.max_abs_imag,
                       xi_hat_certified=zr.certified_real)
        certified = certified and zr.certified_real
    else:
        flags = np.abs(rep.zeros.imag) <= cfg.tol_real * (1 + np.abs(rep.zeros))
        zio.write_csv(cfg.out / "zeros.csv", ["re", "im", "abs_P", "certified"],
                      zip(rep.zeros.real, rep.zeros.imag,
                          np.abs(build_p(Dp.xi, Q.lam)(rep.zeros)), flags))
        files.append("zeros.csv")
    if certified:
        return finish(EXIT_OK, "all zeros certified real")
    return finish(EXIT_NOT_REAL, "reality certification failed")


def _fixture_exit(fixtures, out):
    zio.write_json(out / "fixtures.json", {"fixtures": [f.summary() for f in fixtures]})
    for f in fixtures:
        print(f"{'PASS' if f.passed else 'FAIL'} {f.fixture_id}: deviation {f.deviation:.3e} "
              f"(tolerance {f.tolerance:.3e})")
    failed = [f for f in fixtures if not f.passed]
    if failed:
        print(f"first failing fixture: {failed[0].fixture_id}")
        return EXIT_REPRO
    return EXIT_OK


def _suite_fixtures(target, cfg):
    """Run a randomized suite; return (fixtures, csv header, csv rows)."""
    from . import suites
    from .replab.fixtures import FixtureReport as F

    def seed(default):
        return default if cfg.seed is None else cfg.seed

    def count(default):
        return default if cfg.count is None else cfg.count

    if target == "toeplitz-suite":
        r = suites.toeplitz_suite(count(1000), seed(7))
        neither = sum(p not in ("palindromic", "antipalindromic") for p in r.column("palindrome"))
        rank_bad = int(np.sum(r.column("rank") != r.column("rank_true")))
        fx = [F("toeplitz.root-modulus", 1e-7, None, r.worst("root_deviation"), 1e-7),
              F("toeplitz.cf-reconstruction", 1e-8, None, r.worst("cf_residual"), 1e-8),
              F("toeplitz.palindromic", 0, neither, float(neither), 0.0),
              F("toeplitz.rank", 0, rank_bad, float(rank_bad), 0.0)]
        keys = ["instance", "size", "rank_true", "rank", "root_deviation", "cf_residual",
                "node_error", "weight_error", "palindrome", "error"]
    elif target in ("finmain", "general-lambda"):
        r = suites.finmain_suite(count(500), seed(11 if target == "finmain" else 13),
                                 general_lambda=target == "general-lambda")
        notreal = len(r.records) - r.count("certified_real")
        fx = [F(f"{target}.commutator", 1e-12, None, r.worst("commutator"), 1e-12),
              F(f"{target}.selfadjoint", 1e-11, None, r.worst("selfadjoint"), 1e-11),
              F(f"{target}.det-identity", 1e-8, None, r.worst("det"), 1e-8),
              F(f"{target}.spectrum-match", 1e-7, None, r.worst("multiset"), 1e-7),
              F(f"{target}.roots-real", 0, notreal, float(notreal), 0.0),
              F(f"{target}.instances", ">0", len(r.records), 0.0 if r.records else 1.0, 0.0,
                details=dict(r.skipped))]
        keys = ["instance", "N", "commutator", "selfadjoint", "det", "multiset", "max_imag", "certified_real"]
    elif target == "shannon":
        r = suites.shannon_suite(count(50), seed(3))
        fx = [F("shannon.lattice", 1e-12, None, r.worst("lattice"), 1e-12),
              F("shannon.quadrature", 1e-9, None, r.worst("quadrature"), 1e-9)]
        keys = ["instance", "degree", "L", "lattice", "quadrature"]
    elif target == "spectral-action":
        r = suites.spectral_action_suite(count(100), seed(5), count(100))
        fd = [x for x in r.records if x["kind"] == "fd"]
        ce = [x for x in r.records if x["kind"] == "certified"]
        fx = [F("spectral-action.finite-differences", 1e-6, None,
                max((max(x["rel1"], x["rel2"]) for x in fd), default=0.0), 1e-6),
              F("spectral-action.certified", 1e-9, None,
                max((max(x["err1"], x["err2"]) for x in ce), default=0.0), 1e-9),
              F("spectral-action.certified-count", count(100), len(ce),
                float(count(100) - len(ce)), 0.0)]
        r.records = [{"kind": x["kind"], "instance": x["instance"],
                      "err_n1": x.get("rel1", x.get("err1")), "err_n2": x.get("rel2", x.get("err2"))}
                     for x in r.records]
        keys = ["kind", "instance", "err_n1", "err_n2"]
    elif target == "divided-differences":
        r = suites.divided_difference_suite(count(200), seed(9))
        fx = [F("dd.hermite", 1e-8, None, r.worst("hermite"), 1e-8),
              F("dd.permutation", 1e-12, None, r.worst("permutation"), 1e-12),
              F("dd.confluent", 1e-10, None, r.worst("confluent"), 1e-10)]
        keys = ["instance", "order", "hermite", "permutation", "confluent"]
    else:
        raise ValueError(target)
    return fx, keys, [[rec[k] for k in keys] for rec in r.records]


def cmd_repro(cfg):
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    target = cfg.target
    if target == "appendix-a":
        from .replab import appendix_a_fixtures
        ladder = cfg.ladder or [25, 50, 100, 200, 400]
        fixtures = appendix_a_fixtures(ladder)
        rep = next(f for f in fixtures if f.fixture_id == "A.limits-rate-recalibrated").details["report"]
        zio.write_csv(out / "limits.csv", ["N", "lambda_max", "gap_max", "lambda_min", "gap_min",
                                             "spectral_gap_top", "overlap_top", "overlap_bottom"], rep.rows())
    elif target == "appendix-b":
        from .replab import appendix_b_fixtures
        kw = {} if cfg.grid is None else {"grid": cfg.grid}
        fixtures, art = appendix_b_fixtures(seed=0 if cfg.seed is None else cfg.seed, **kw)
        zio.write_csv(out / "region_n2.csv", ["u", "v", "feasible", "realroot_ok"], art["n2"].rows())
        zio.write_csv(out / "odd_scan.csv", ["beta", "margin", "feasible", "v", "conditions_ok"],
                      art["odd"].rows())
    elif target == "continuous-kernel":
        fixtures = _continuous_fixtures(cfg, out)
    else:
        fixtures, keys, rows = _suite_fixtures(target, cfg)
        zio.write_csv(out / f"{target}.csv", keys, rows)
    return _fixture_exit(fixtures, out)


def _continuous_fixtures(cfg, out):
    from .contkernel import convergence_study, named_kernel
    from .replab.fixtures import FixtureReport as F
    ladder = cfg.ladder or [8, 16, 32, 64, 128]
    fixtures, rows = [], []
    for name in ("triangle", "gaussian"):
        rep = convergence_study(named_kernel(name), ladder)
        worst = max((r.max_abs_imag for r in rep.rungs if r.simple), default=0.0)
        fixtures.append(F(f"continuous.{name}.distances-decreasing", True, rep.distances_decreasing,
                          0.0 if rep.distances_decreasing else 1.0, 0.0))
        fixtures.append(F(f"continuous.{name}.zeros-real", 1e-6, worst, worst, 1e-6))
        for r in rep.rungs:
            rows.append([name, r.N_steps, r.eigenvalue, r.gap, r.l2_step, r.max_abs_imag, r.simple])
    zio.write_csv(out / "continuous.csv", ["kernel", "N", "eigenvalue", "gap", "l2_distance", "max_abs_imag", "simple"],
                  rows)
    return fixtures


COMMANDS = {"build-form": cmd_build_form, "verify-zeros": cmd_verify_zeros, "repro": cmd_repro}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            command=args.command,
            dist=getattr(args, "dist", None),
            form=getattr(args, "form", None),
            N=getattr(args, "N", None),
            ladder=getattr(args, "ladder", []),
            tol_real=getattr(args, "tol_real", DEFAULT_TOL_REAL),
            tol_gap=getattr(args, "tol_gap", None),
            out=args.out,
            seed=getattr(args, "seed", None),
            grid=getattr(args, "grid", None),
            count=getattr(args, "count", None),
            target=getattr(args, "target", None),
            mode=getattr(args, "mode", "min"),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        return COMMANDS[args.command](cfg)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (OSError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ZerolocError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_REPRO


if __name__ == "__main__":
    sys.exit(main())
