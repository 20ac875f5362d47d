"""The distribution ``delta_0 + 2 pi b sin(2 pi x)`` on [0, 1].

Its form is ``2 I + b mu`` where ``mu`` is the sign-kernel matrix:
zero off the rows/columns -1, 0, 1 except on the diagonal.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from ..errors import NotSimple
from ..formbuilder import DistributionSpec, build_form, psi_derivative_eval, psi_eval
from ..spectral import extremal_pair, sym_eig
from ..zeros import build_p, poly_roots
from .fixtures import FixtureReport

__all__ = [
    "MU_TABLE_N4",
    "mu_matrix",
    "simple_distribution",
    "mu1_closed_form",
    "p1_polynomials",
    "fourier_sin",
    "fourier_cos",
    "limit_transforms",
    "transform_zeros",
    "appendix_limits",
    "LimitsReport",
    "appendix_a_fixtures",
    "LIMIT_MAX",
    "LIMIT_MIN",
]

LIMIT_MAX = Fraction(8, 3)
LIMIT_MIN = Fraction(-8, 5)

_F = Fraction
# rows and columns indexed -4..4
MU_TABLE_N4 = [
    [_F(-2, 15), 0, 0, _F(1, 3), 0, _F(-1, 5), 0, 0, 0],
    [0, _F(-1, 4), 0, _F(1, 2), 0, _F(-1, 4), 0, 0, 0],
    [0, 0, _F(-2, 3), 1, 0, _F(-1, 3), 0, 0, 0],
    [_F(1, 3), _F(1, 2), 1, _F(1, 2), -1, -1, _F(-1, 3), _F(-1, 4), _F(-1, 5)],
    [0, 0, 0, -1, 2, -1, 0, 0, 0],
    [_F(-1, 5), _F(-1, 4), _F(-1, 3), -1, -1, _F(1, 2), 1, _F(1, 2), _F(1, 3)],
    [0, 0, 0, _F(-1, 3), 0, 1, _F(-2, 3), 0, 0],
    [0, 0, 0, _F(-1, 4), 0, _F(1, 2), 0, _F(-1, 4), 0],
    [0, 0, 0, _F(-1, 5), 0, _F(1, 3), 0, 0, _F(-2, 15)],
]
MU_TABLE_N4 = [[Fraction(v) for v in row] for row in MU_TABLE_N4]


def _mu_entry(n, m):
    center = {(-1, -1): _F(1, 2), (0, 0): _F(2), (1, 1): _F(1, 2)}
    if -1 <= n <= 1 and -1 <= m <= 1:
        return center.get((n, m), _F(-1))
    if n == m:
        return _F(2, 1 - n * n)
    if m == -1:
        return _F(1, -1 - n)
    if n == -1:
        return _F(1, -1 - m)
    if m == 1:
        return _F(1, n - 1)
    if n == 1:
        return _F(1, m - 1)
    return _F(0)


def mu_matrix(N, exact=False):
    """The matrix mu on indices -N..N, as floats or as Fractions."""
    if N < 1:
        raise ValueError("N must be at least 1")
    idx = range(-N, N + 1)
    if exact:
        return [[_mu_entry(n, m) for m in idx] for n in idx]
    n = np.arange(-N, N + 1).astype(float)
    outer = np.abs(n) > 1
    d = np.nonzero(outer)[0]
    M = np.zeros((2 * N + 1, 2 * N + 1))
    M[d, d] = 2.0 / (1.0 - n[d] ** 2)
    c = N  # array position of index 0
    M[outer, c - 1] = M[c - 1, outer] = 1.0 / (-1.0 - n[outer])
    M[outer, c + 1] = M[c + 1, outer] = 1.0 / (n[outer] - 1.0)
    M[c - 1:c + 2, c - 1:c + 2] = [[0.5, -1, -1], [-1, 2, -1], [-1, -1, 0.5]]
    return M


def simple_distribution(b=1.0):
    """``delta_0 + 2 pi b sin(2 pi x)``: Fourier data ``a_1 = -i pi b``."""
    return DistributionSpec.from_fourier([0.0, 0.0], [0.0, -np.pi * b], delta_weight=1.0)


def mu1_closed_form():
    """Eigenvalues (descending) and eigenvectors of mu(1) in closed form."""
    r = np.sqrt(57.0)
    values = np.array([(r + 3) / 4, 1.5, (3 - r) / 4])
    vectors = np.array([
        [1.0, -(3 - r) / (r - 9), 1.0],
        [-1.0, 0.0, 1.0],
        [1.0, -(-r - 3) / (r + 9), 1.0],
    ])
    return values, vectors


def p1_polynomials():
    """Ascending coefficients of the quadratics for the extreme eigenvectors of mu(1)."""
    r = np.sqrt(57.0)
    plus = np.array([-r + 3, 0.0, 3 * (r - 7)])
    minus = np.array([-r - 3, 0.0, 3 * (r + 7)])
    return plus, minus


def fourier_sin(k, N):
    """``int_0^1 sin(k pi x) e^{-2 pi i n x} dx`` for ``n = -N..N`` (k odd)."""
    n = np.arange(-N, N + 1)
    return (2 * k / (np.pi * (k**2 - 4 * n**2))).astype(complex)


def fourier_cos(k, N):
    """``int_0^1 cos(k pi x) e^{-2 pi i n x} dx`` for ``n = -N..N`` (k odd)."""
    n = np.arange(-N, N + 1)
    return 4j * n / (np.pi * (k**2 - 4 * n**2))


def _span_overlap(v, basis):
    """Norm of the projection of unit ``v`` onto span(basis)."""
    Qm, _ = np.linalg.qr(np.column_stack(basis))
    return float(np.linalg.norm(Qm.conj().T @ v))


def limit_transforms():
    """Transforms of ``sin/cos(pi x)`` and ``sin/cos(3 pi x)`` recentred to [-1/2, 1/2]."""
    def safe(num, den):
        def g(s):
            s = np.asarray(s, dtype=float)
            return num(s) / den(s)
        return g

    h_plus = safe(lambda s: 2 * np.pi * np.cos(s / 2), lambda s: np.pi**2 - s**2)
    h_minus = safe(lambda s: 2j * s * np.cos(s / 2), lambda s: np.pi**2 - s**2)
    k_plus = safe(lambda s: 6 * np.pi * np.cos(s / 2), lambda s: 9 * np.pi**2 - s**2)
    k_minus = safe(lambda s: -2j * s * np.cos(s / 2), lambda s: s**2 - 9 * np.pi**2)
    return {"h+": h_plus, "h-": h_minus, "k+": k_plus, "k-": k_minus}


def transform_zeros(name, radius=40.0, step=0.01):
    """Real zeros of a limit transform in ``[-radius, radius]``.

    Sign changes of the real-valued profile (``h-``/``k-`` divided by i)
    on a grid offset from the poles, polished with brentq.
    """
    fun = limit_transforms()[name]
    real = (lambda s: fun(s).real) if name.endswith("+") else (lambda s: (fun(s) / 1j).real)
    grid = np.arange(-radius, radius, step) + step / np.pi
    vals = real(grid)
    roots = []
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        roots.append(brentq(real, grid[i], grid[i + 1], xtol=1e-14))
    return np.array(roots)


def expected_transform_zeros(name, radius=40.0):
    odd = np.pi * np.arange(-int(radius / np.pi) - 1, int(radius / np.pi) + 2)
    odd = odd[(np.round(odd / np.pi) % 2 == 1) & (np.abs(odd) <= radius)]
    excluded = {"h+": 1, "h-": 1, "k+": 3, "k-": 3}[name]
    z = odd[np.abs(np.round(odd / np.pi)) != excluded]
    if name.endswith("-"):
        z = np.sort(np.append(z, 0.0))
    return z


@dataclass
class LimitsReport:
    N: list = field(default_factory=list)
    lambda_max: list = field(default_factory=list)
    lambda_min: list = field(default_factory=list)
    gap_max: list = field(default_factory=list)
    gap_min: list = field(default_factory=list)
    spectral_gap_top: list = field(default_factory=list)
    overlap_top: list = field(default_factory=list)
    overlap_bottom: list = field(default_factory=list)

    @staticmethod
    def _strictly_decreasing(x):
        return all(b < a for a, b in zip(x, x[1:]))

    @property
    def max_gaps_decreasing(self):
        return self._strictly_decreasing(self.gap_max)

    @property
    def min_gaps_decreasing(self):
        return self._strictly_decreasing(self.gap_min)

    def rate(self, which="max"):
        """Fitted exponent p in ``gap ~ C N^-p`` (log-log least squares)."""
        g = np.asarray(self.gap_max if which == "max" else self.gap_min)
        p = np.polyfit(np.log(self.N), np.log(g), 1)
        return float(-p[0])

    def extrapolated_gap(self, which="max", factor=10.0):
        """Gap predicted by the rate fit at the last rung; ``factor`` is a safety margin."""
        g = np.asarray(self.gap_max if which == "max" else self.gap_min)
        p = np.polyfit(np.log(self.N), np.log(g), 1)
        return float(factor * np.exp(np.polyval(p, np.log(self.N[-1]))))

    def rows(self):
        return zip(self.N, self.lambda_max, self.gap_max, self.lambda_min, self.gap_min,
                   self.spectral_gap_top, self.overlap_top, self.overlap_bottom)


def appendix_limits(N_list):
    """Extreme eigenvalues of mu(N) against the limits 8/3 and -8/5.

    Also records the overlap of the extreme eigenvectors with the Fourier
    data of ``{sin, cos}(pi x)`` (top) and ``{sin, cos}(3 pi x)`` (bottom),
    and the gap between the two largest eigenvalues, which closes as the
    limit becomes doubly degenerate.
    """
    N_list = [int(n) for n in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    rep = LimitsReport()
    for N in N_list:
        w, U = sym_eig(mu_matrix(N))
        rep.N.append(N)
        rep.lambda_max.append(float(w[-1]))
        rep.lambda_min.append(float(w[0]))
        rep.gap_max.append(abs(float(w[-1]) - 8 / 3))
        rep.gap_min.append(abs(float(w[0]) + 8 / 5))
        rep.spectral_gap_top.append(float(w[-1] - w[-2]))
        rep.overlap_top.append(_span_overlap(U[:, -1], [fourier_sin(1, N), fourier_cos(1, N)]))
        rep.overlap_bottom.append(_span_overlap(U[:, 0], [fourier_sin(3, N), fourier_cos(3, N)]))
    return rep


def _exact_table_deviation():
    computed = mu_matrix(4, exact=True)
    bad = sum(1 for r1, r2 in zip(computed, MU_TABLE_N4) for x, y in zip(r1, r2) if x != y)
    return computed, bad


def appendix_a_fixtures(ladder=(25, 50, 100, 200, 400), threshold=5e-2):
    """All reproducible values of the sign-kernel example, as FixtureReports."""
    out = []
    computed, bad = _exact_table_deviation()
    out.append(FixtureReport("A.mu-table-N4", "reference 9x9 table", f"{bad} mismatching entries",
                             float(bad), 0.0, "exact rational comparison"))

    fl = np.array([[float(x) for x in row] for row in computed])
    dev = np.abs(fl - mu_matrix(4)).max()
    out.append(FixtureReport("A.mu-float-vs-exact", 0.0, dev, dev, 1e-15))

    b = 0.7
    Q = build_form(simple_distribution(b), 6).matrix()
    dev = np.abs(Q - (2 * np.eye(13) + b * mu_matrix(6))).max()
    out.append(FixtureReport("A.form-equals-2I+b*mu", 0.0, dev, dev, 1e-12, "formbuilder oracle"))

    d = simple_distribution(b)
    psi_dev = max(abs(psi_eval(d, 1) + b), abs(psi_eval(d, -1) - b))
    out.append(FixtureReport("A.psi(+-1)=-+b", [b, -b], [psi_eval(d, -1), psi_eval(d, 1)], psi_dev, 1e-12))
    ders = [psi_derivative_eval(d, n) for n in (-3, -2, -1, 0, 1, 2, 3)]
    exp = [2 + 2 * b / (1 - n * n) if abs(n) != 1 else b / 2 + 2 for n in (-3, -2, -1, 0, 1, 2, 3)]
    dev = float(np.abs(np.subtract(ders, exp)).max())
    out.append(FixtureReport("A.psi-prime(n)", exp, ders, dev, 1e-12))

    vals, vecs = mu1_closed_form()
    w, U = sym_eig(mu_matrix(1))
    dev = np.abs(np.sort(w)[::-1] - vals).max()
    out.append(FixtureReport("A.mu1-eigenvalues", vals, w, dev, 1e-10))
    vdev = 0.0
    for k, idx in enumerate((2, 1, 0)):
        u = vecs[k] / np.linalg.norm(vecs[k])
        vdev = max(vdev, 1 - abs(u @ U[:, idx]))
    out.append(FixtureReport("A.mu1-eigenvectors", vecs, U, vdev, 1e-10))

    top = extremal_pair(mu_matrix(1), "max")
    bottom = extremal_pair(mu_matrix(1), "min")
    plus, minus = p1_polynomials()
    pdev = 0.0
    for pair, ref in ((top, plus), (bottom, minus)):
        c = build_p(pair.vector).coeffs
        c = c / c[-1] * ref[-1]
        pdev = max(pdev, np.abs(c - ref).max() / np.abs(ref).max())
    out.append(FixtureReport("A.P1-polynomials", [plus, minus], None, pdev, 1e-10))
    r = np.sqrt(57.0)
    rdev = 0.0
    for pair, sgn in ((top, 1), (bottom, -1)):
        roots = np.sort(poly_roots(build_p(pair.vector)).zeros.real)
        ref = np.sqrt((r - 3 * sgn) / (3 * (r - 7 * sgn)))
        rdev = max(rdev, np.abs(roots - [-ref, ref]).max())
    out.append(FixtureReport("A.P1-roots", None, None, rdev, 1e-10))

    rep = appendix_limits(ladder)
    ok = rep.max_gaps_decreasing and rep.min_gaps_decreasing
    out.append(FixtureReport("A.limits-decreasing", "strictly decreasing gaps",
                             list(zip(rep.gap_max, rep.gap_min)), 0.0 if ok else 1.0, 0.0))
    final = max(rep.gap_max[-1], rep.gap_min[-1])
    out.append(FixtureReport("A.limits-threshold", threshold, final, final, threshold,
                             "provisional threshold at the last rung"))
    recal = max(rep.extrapolated_gap("max"), rep.extrapolated_gap("min"))
    out.append(FixtureReport("A.limits-rate-recalibrated", recal, final, final, recal,
                             f"rate fit: p_max={rep.rate('max'):.2f}, p_min={rep.rate('min'):.2f}",
                             {"report": rep}))

    zdev = 0.0
    for name in ("h+", "h-", "k+", "k-"):
        found = transform_zeros(name)
        exp_z = expected_transform_zeros(name)
        zdev = max(zdev, np.inf if len(found) != len(exp_z) else np.abs(found - exp_z).max())
    out.append(FixtureReport("A.limit-transform-zeros", "odd multiples of pi with exclusions", None, zdev, 1e-10))
    return out
