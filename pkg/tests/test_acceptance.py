"""Acceptance criteria 1-13 at full size.

Each test prints one ``PASS``/``FAIL`` line (visible without ``-s``) and
then asserts.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import numpy as np
import pytest

from zeroloc import suites
from zeroloc.contkernel import convergence_study, named_kernel
from zeroloc.replab import MU_TABLE_N4, appendix_limits, matrix_mc, mu_matrix
from zeroloc.replab.appendix_b import (
    REFERENCE_BETA_WINDOWS,
    n2_positivity_scan,
    odd_kernel_scan,
    reality_boundary_scan,
)


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail}")
        assert ok, detail
    return emit


def test_criterion_01_rational_table(verdict):
    computed = mu_matrix(4, exact=True)
    bad = sum(x != y for r1, r2 in zip(computed, MU_TABLE_N4) for x, y in zip(r1, r2))
    verdict(1, "rational 9x9 table", bad == 0, f"{bad} mismatching entries of 81")


def test_criterion_02_three_by_three_family(verdict):
    cs = np.linspace(-5, 5, 101)
    dev = vres = 0.0
    for c in cs:
        rep = matrix_mc(c)
        dev = max(dev, rep.eigenvalue_deviation)
        vres = max(vres, rep.eigenvector_residual)
        v = np.array([-1.0, 0.0, 1.0])
        vres = max(vres, np.linalg.norm(rep.matrix @ v - v) / np.linalg.norm(v))
    ok = dev <= 1e-10 and vres <= 1e-10
    verdict(2, "M(c) closed forms", ok, f"eigenvalue dev {dev:.2e}, eigenvector residual {vres:.2e}")


def test_criterion_03_reality_boundary(verdict):
    xs = np.round(np.arange(-3.0, 1.0 + 1e-9, 0.01), 10)
    xs, cert, exp = reality_boundary_scan(xs)
    wrong = cert != exp
    allowed = np.minimum(np.abs(xs + 2), np.abs(xs)) <= 1e-7
    bad = int(np.sum(wrong & ~allowed))
    verdict(3, "reality boundary x(x+2) >= 0", bad == 0,
            f"{len(xs)} points, {int(wrong.sum())} misclassified, {bad} away from x in {{-2, 0}}")


def test_criterion_04_extreme_eigenvalue_limits(verdict):
    rep = appendix_limits([25, 50, 100, 200, 400])
    final = max(rep.gap_max[-1], rep.gap_min[-1])
    recal = max(rep.extrapolated_gap("max"), rep.extrapolated_gap("min"))
    ok = rep.max_gaps_decreasing and rep.min_gaps_decreasing and final <= 5e-2 and final <= recal
    detail = (f"final gaps {rep.gap_max[-1]:.2e} (8/3), {rep.gap_min[-1]:.2e} (-8/5); "
              f"rates {rep.rate('max'):.2f}, {rep.rate('min'):.2f}; "
              f"thresholds 5e-2 and recalibrated {recal:.2e}")
    verdict(4, "limits 8/3 and -8/5", ok, detail)


def test_criterion_05_toeplitz_suite(verdict):
    r = suites.toeplitz_suite(count=1000, seed=7)
    neither = sum(p not in ("palindromic", "antipalindromic") for p in r.column("palindrome"))
    roots, cf = r.worst("root_deviation"), r.worst("cf_residual")
    ok = len(r.records) == 1000 and roots <= 1e-7 and cf <= 1e-8 and neither == 0
    verdict(5, "Toeplitz suite", ok,
            f"{len(r.records)} matrices, ||z|-1| {roots:.2e}, CF error {cf:.2e}, {neither} non-palindromic")


def _finmain(verdict, number, title, general):
    r = suites.finmain_suite(count=500, seed=13 if general else 11, general_lambda=general)
    worst = {k: r.worst(k) for k in ("commutator", "selfadjoint", "det", "multiset")}
    notreal = len(r.records) - r.count("certified_real")
    ok = (len(r.records) > 0 and worst["commutator"] <= 1e-12 and worst["selfadjoint"] <= 1e-11
          and worst["det"] <= 1e-8 and worst["multiset"] <= 1e-7 and notreal == 0)
    detail = (f"{len(r.records)} certified of 500 (skipped {dict(r.skipped)}); "
              + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()) + f", nonreal {notreal}")
    verdict(number, title, ok, detail)


def test_criterion_06_rank_one_property_suite(verdict):
    _finmain(verdict, 6, "rank-one property suite", general=False)


def test_criterion_07_general_lambda(verdict):
    _finmain(verdict, 7, "general-lambda property suite", general=True)


def test_criterion_08_shannon_identities(verdict):
    r = suites.shannon_suite(count=50, seed=3)
    lat, quad = r.worst("lattice"), r.worst("quadrature")
    ok = len(r.records) == 50 and lat <= 1e-12 and quad <= 1e-9
    verdict(8, "Shannon identities", ok, f"lattice {lat:.2e}, quadrature {quad:.2e}")


def test_criterion_09_spectral_action(verdict):
    r = suites.spectral_action_suite(count=100, seed=5, certified=100)
    fd = [x for x in r.records if x["kind"] == "fd"]
    ce = [x for x in r.records if x["kind"] == "certified"]
    fd_err = max(max(x["rel1"], x["rel2"]) for x in fd)
    ce_err = max(max(x["err1"], x["err2"]) for x in ce)
    ok = len(fd) == 100 and len(ce) == 100 and fd_err <= 1e-6 and ce_err <= 1e-9
    verdict(9, "spectral action derivatives", ok,
            f"{len(fd)} FD triples rel {fd_err:.2e}; {len(ce)} certified, scaled err {ce_err:.2e}")


def test_criterion_10_divided_differences(verdict):
    r = suites.divided_difference_suite(count=200, seed=9)
    h, p, c = r.worst("hermite"), r.worst("permutation"), r.worst("confluent")
    ok = len(r.records) == 200 and h <= 1e-8 and p <= 1e-12 and c <= 1e-10
    verdict(10, "divided differences", ok, f"hermite {h:.2e}, permutation {p:.2e}, confluent {c:.2e}")


def test_criterion_11_continuous_kernels(verdict):
    parts, ok = [], True
    for name in ("triangle", "gaussian"):
        rep = convergence_study(named_kernel(name), [8, 16, 32, 64, 128])
        simple = [r for r in rep.rungs if r.simple]
        worst = max((r.max_abs_imag for r in simple), default=0.0)
        ok = ok and rep.distances_decreasing and len(simple) > 0 and worst <= 1e-6
        parts.append(f"{name}: distances {['%.1e' % d for d in rep.distances]}, "
                     f"{len(simple)}/5 simple, max|Im| {worst:.1e}")
    verdict(11, "continuous kernels", ok, "; ".join(parts))


@pytest.mark.slow
def test_criterion_12_even_positivity_scan(verdict):
    axis = np.linspace(-6.0, 6.0, 200)
    scan = n2_positivity_scan(axis, axis)
    ok = scan.counterexamples == 0 and scan.nonreal_feasible == 0 and scan.boundary_mismatches == 0
    verdict(12, "200x200 even-kernel scan", ok,
            f"{int(scan.feasible.sum())} feasible, {scan.counterexamples} counterexamples, "
            f"{scan.boundary_mismatches} off-boundary mismatches (total {scan.total_mismatches})")


@pytest.mark.slow
def test_criterion_13_odd_kernel_scan(verdict):
    rep = odd_kernel_scan(step=1e-3)
    dev = rep.window_deviation(REFERENCE_BETA_WINDOWS)
    ok = rep.forbidden_hits == 0 and dev <= 1e-3
    verdict(13, "odd-kernel scan", ok,
            f"{len(rep.windows)} windows, endpoint deviation {dev:.2e}, {rep.forbidden_hits} forbidden v")
