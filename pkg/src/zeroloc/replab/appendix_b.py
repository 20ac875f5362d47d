"""Explicit checks for N = 1 and N = 2.

* ``M(c)``: the normalized 3x3 case.
* N = 2 even kernels: a 5x5 form ``mu(a, b, y, z, t)`` whose kernel contains
  ``xi = u e1 + v e2 + w e3``; (y, z, t) are eliminated so that (a, b)
  span the admissible subspace.  Feasibility = some (a, b) makes the form
  positive definite on the orthogonal complement of xi.
* N = 2 odd kernels: the odd block is the rank-one projection onto
  ``(cos b, sin b)``; feasibility = some (a, y) makes the even block
  positive definite.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize, minimize_scalar

from ..spectral import sym_eig
from ..errors import DegenerateDegree
from ..zeros import ZeroReport, build_p, poly_roots
from .fixtures import FixtureReport

__all__ = [
    "matrix_mc",
    "mc_closed_form",
    "MCReport",
    "reality_boundary_scan",
    "mu5",
    "kernel_subspace",
    "n2_xi",
    "even_basis",
    "odd_basis",
    "positivity_conditions",
    "realroopol",
    "realroopol1",
    "reference_region",
    "boundary_curve",
    "n2_feasibility",
    "n2_positivity_scan",
    "N2ScanReport",
    "odd_even_block",
    "odd_solution",
    "odd_positivity_conditions",
    "odd_feasibility",
    "odd_kernel_scan",
    "OddScanReport",
    "REFERENCE_BETA_WINDOWS",
    "monic_nonneg_roots_check",
    "appendix_b_fixtures",
]

S2 = np.sqrt(2.0)
PSD_MARGIN = 1e-9


# ---------------------------------------------------------------- N = 1

def matrix_mc(c):
    """``M(c)`` with its numerical spectrum compared to the closed forms.

    Returns an MCReport; eigenvectors are checked by residual, which stays
    meaningful at ``c = 0`` where the eigenvalue 1 is double.
    """
    M = np.array([[0.0, -1, -1], [-1, c, -1], [-1, -1, 0]])
    w, U = sym_eig(M)
    vals, vecs = mc_closed_form(c)
    dev = float(np.abs(np.sort(vals) - w).max())
    vres = 0.0
    for lam, v in zip(vals, vecs):
        if np.all(np.isfinite(v)):
            vres = max(vres, np.linalg.norm(M @ v - lam * v) / np.linalg.norm(v))
    return MCReport(c, M, w, np.sort(vals), dev, float(vres))


def mc_closed_form(c):
    """Eigenvalues ``1, (c - 1 -+ r)/2`` with ``r = sqrt(c^2 + 2c + 9)`` and vectors."""
    r = np.sqrt(c * c + 2 * c + 9)
    vals = np.array([1.0, (c - 1 - r) / 2, (c - 1 + r) / 2])
    with np.errstate(divide="ignore", invalid="ignore"):
        X = -(-r + c - 3) / (r + c + 3)
        Y = -(-r - c + 3) / (r - c - 3)
    vecs = np.array([[-1.0, 0.0, 1.0], [1.0, X, 1.0], [1.0, Y, 1.0]])
    return vals, vecs


@dataclass
class MCReport:
    c: float
    matrix: np.ndarray
    computed: np.ndarray
    closed_form: np.ndarray
    eigenvalue_deviation: float
    eigenvector_residual: float


def reality_boundary_scan(xs=None, tol=1e-7):
    """Certify the roots of the kernel polynomial of ``(1, x, 1)`` along x.

    Returns (xs, certified, expected) with expected ``x (x + 2) >= 0``.
    At ``x = -2`` the degree drops and the remaining (empty) root set is
    certified vacuously.
    """
    if xs is None:
        xs = np.round(np.arange(-3.0, 1.0 + 1e-9, 0.01), 10)
    cert = []
    for x in xs:
        P = build_p(np.array([1.0, x, 1.0]))
        try:
            rep = poly_roots(P, tol=tol)
        except DegenerateDegree:
            c = np.trim_zeros(P.coeffs, "b")
            rep = ZeroReport.from_zeros(np.roots(c[::-1]), tol)
        cert.append(rep.certified_real)
    return np.asarray(xs), np.array(cert), np.asarray(xs) * (np.asarray(xs) + 2) >= 0


# ---------------------------------------------------------------- N = 2

def mu5(a, b, y, z, t):
    """Symmetric 5x5 form on indices -2..2 with the flip symmetry."""
    return np.array([
        [t + z, b - a, b / 2, (a + b) / 3, b / 2],
        [b - a, t + y, a, a, (a + b) / 3],
        [b / 2, a, t, a, b / 2],
        [(a + b) / 3, a, a, t + y, b - a],
        [b / 2, (a + b) / 3, b / 2, b - a, t + z],
    ])


def kernel_subspace(a, b, u, v, w):
    """(y, z, t) making ``mu5(a, b, y, z, t) xi(u, v, w) = 0``."""
    y = b * w * (3 * S2 * v - 8 * u) / (6 * u * v) - a * (3 * S2 * u**2 + 3 * u * v - 2 * u * w - 3 * S2 * v**2) / (3 * u * v)
    z = a * v * (2 * u + 3 * S2 * w) / (3 * u * w) - b * (3 * S2 * u**2 + 8 * u * v + 3 * u * w - 3 * S2 * w**2) / (6 * u * w)
    t = -S2 * a * v / u - b * w / (S2 * u)
    return y, z, t


def even_basis():
    E = np.array([[0, 0, 1, 0, 0], [0, 1, 0, 1, 0], [1, 0, 0, 0, 1]], dtype=float)
    E[1:] /= S2
    return E


def odd_basis():
    return np.array([[1, 0, 0, 0, -1], [0, 1, 0, -1, 0]], dtype=float) / S2


def n2_xi(u, v, w=1.0):
    return np.array([u, v, w]) @ even_basis()


def positivity_conditions(a, b, u, v, w=1.0):
    """Trace and determinant of the odd block and of the even block on xi-perp,
    as the four reference closed forms."""
    c1 = -(3 * S2 * a * u + 6 * a * v - 2 * a * w + 4 * b * w) / (3 * v) - (-4 * a * v + 3 * S2 * b * u + 8 * b * v + 6 * b * w) / (6 * w)
    c2 = (-2 * a**2 * v * (S2 * u + 2 * (v + w)) + a * b * (3 * u**2 + S2 * u * (7 * v + 2 * w) + 8 * v**2 + 6 * v * w - 2 * w**2)
          + 2 * b**2 * w * (S2 * u + 2 * (v + w))) / (3 * v * w)
    c3 = (2 * a * (-3 * u**2 * w + S2 * u * (v**2 + w**2) - 3 * v**2 * w)
          - b * (3 * u**2 * v + 4 * S2 * u * (v**2 + w**2) + 3 * v * w**2)) / (3 * S2 * u * v * w)
    c4 = -((u * u + v * v + w * w) * (2 * S2 * a * a * v + a * b * (S2 * (w - 4 * v) - 3 * u) - 2 * S2 * b * b * w)) / (3 * u * v * w)
    return np.array([c1, c2, c3, c4])


def realroopol(u, v, w=1.0):
    """Both reference conditions for real roots of the even N = 2 polynomial."""
    return (5 * u + S2 * (4 * v + w)) / u > 0 and (u + S2 * v + S2 * w) / u > 0


def realroopol1(u, v):
    """The reference case split of :func:`realroopol` at ``w = 1``."""
    return bool(
        (u < 0 and v < (-u - S2) / S2)
        or (0 < u < 3 * S2 and v > (-5 * u - S2) / (4 * S2))
        or (u >= 3 * S2 and v > (-u - S2) / S2)
    )


def boundary_curve(u, branch=1):
    """``f(u) = (-3 sqrt2 u - 2)/8 + branch * sqrt3 sqrt(u) / (2 * 2^(1/4))``."""
    return (-3 * S2 * u - 2) / 8 + branch * np.sqrt(3) * np.sqrt(u) / (2 * 2**0.25)


def reference_region(u, v):
    """The reference reduction of the four positivity conditions (w = 1)."""
    g = (-S2 * u - 2) / 2
    if u < -S2:
        return bool(v < 0 or 0 < v < g)
    if u == -S2:
        return bool(v < 0)
    if u < 0:
        return bool(v < g)
    f = boundary_curve(u)
    if u <= 3 * S2:
        return bool(f < v < 0 or v > 0)
    return bool(g < v < boundary_curve(u, -1) or f < v < 0 or v > 0)


def _n2_pencil(u, v, w):
    """Projected basis forms A, B with mu(a, b) = a A + b B restricted to xi-perp."""
    P = null_space(n2_xi(u, v, w)[None, :])
    A = mu5(1.0, 0.0, *kernel_subspace(1.0, 0.0, u, v, w))
    B = mu5(0.0, 1.0, *kernel_subspace(0.0, 1.0, u, v, w))
    gram = np.array([[np.sum(A * A), np.sum(A * B)], [np.sum(A * B), np.sum(B * B)]])
    return P.T @ A @ P, P.T @ B @ P, gram


def n2_feasibility(u, v, w=1.0, n_angles=180):
    """Best normalized PSD margin over directions ``(a, b) = (cos th, sin th)``.

    The margin is the smallest eigenvalue on xi-perp of ``mu / ||mu||_F``;
    positive scaling is irrelevant, so a direction search suffices.  A
    coarse angular grid is followed by bounded refinement around the best
    angle when the grid finds no feasible direction.
    """
    Ap, Bp, gram = _n2_pencil(u, v, w)

    def margin(th):
        th = np.atleast_1d(th)
        c, s = np.cos(th), np.sin(th)
        mats = c[:, None, None] * Ap + s[:, None, None] * Bp
        norms = np.sqrt(c * c * gram[0, 0] + 2 * c * s * gram[0, 1] + s * s * gram[1, 1])
        return np.linalg.eigvalsh(mats)[:, 0] / norms

    th = np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
    m = margin(th)
    i = int(np.argmax(m))
    best, best_th = float(m[i]), float(th[i])
    if best <= PSD_MARGIN:
        h = 2 * np.pi / n_angles
        r = minimize_scalar(lambda t: -margin(t)[0], bounds=(best_th - h, best_th + h),
                            method="bounded", options={"xatol": 1e-12})
        if -r.fun > best:
            best, best_th = float(-r.fun), float(r.x)
    return best, best_th


@dataclass
class N2ScanReport:
    us: np.ndarray
    vs: np.ndarray
    margin: np.ndarray
    feasible: np.ndarray
    realroot_ok: np.ndarray
    roots_real: np.ndarray
    reference: np.ndarray
    near_boundary: np.ndarray

    @property
    def counterexamples(self):
        """Feasible grid points outside the reference real-root region."""
        return int(np.sum(self.feasible & ~self.realroot_ok))

    @property
    def nonreal_feasible(self):
        """Feasible grid points whose kernel polynomial has nonreal roots."""
        return int(np.sum(self.feasible & ~self.roots_real))

    @property
    def boundary_mismatches(self):
        """Disagreements with the reference region away from its boundary curves."""
        return int(np.sum((self.feasible != self.reference) & ~self.near_boundary))

    @property
    def total_mismatches(self):
        return int(np.sum(self.feasible != self.reference))

    def rows(self):
        for i, u in enumerate(self.us):
            for j, v in enumerate(self.vs):
                yield (u, v, int(self.feasible[i, j]), int(self.realroot_ok[i, j]))


def _near_region_boundary(u, v, du, dv):
    """True when (u, v) lies within one grid cell of a reference boundary."""
    if abs(u + S2) <= du or abs(u - 3 * S2) <= du or abs(u - S2 / 3) <= du:
        return True
    curves = [0.0, (-S2 * u - 2) / 2]
    if u > 0:
        curves += [boundary_curve(u), boundary_curve(u, -1)]
    for c in curves:
        if abs(v - c) <= dv:
            return True
    return False


def n2_positivity_scan(us, vs, w=1.0, n_angles=180):
    """Feasibility map on a (u, v) grid; axes must be excluded.

    Records the reference real-root region, actual reality of the kernel
    polynomial roots, the reference reduced region and a boundary mask.
    """
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if np.any(us == 0) or np.any(vs == 0):
        raise ValueError("grid must exclude the u = 0 and v = 0 axes")
    shape = (len(us), len(vs))
    margin = np.zeros(shape)
    rr = np.zeros(shape, bool)
    real = np.zeros(shape, bool)
    reference = np.zeros(shape, bool)
    near = np.zeros(shape, bool)
    du = np.abs(np.diff(us)).max() if len(us) > 1 else 0.0
    dv = np.abs(np.diff(vs)).max() if len(vs) > 1 else 0.0
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            margin[i, j] = n2_feasibility(u, v, w, n_angles)[0]
            rr[i, j] = realroopol1(u, v) if w == 1.0 else realroopol(u, v, w)
            real[i, j] = poly_roots(build_p(n2_xi(u, v, w))).certified_real
            reference[i, j] = reference_region(u, v)
            near[i, j] = _near_region_boundary(u, v, du, dv)
    feasible = margin > PSD_MARGIN
    return N2ScanReport(us, vs, margin, feasible, rr, real, reference, near)


# ---------------------------------------------------------------- odd N = 2

REFERENCE_BETA_WINDOWS = (
    (-np.pi, -2 * np.arctan(np.sqrt(5) + 2)),
    (2 * np.arctan((-np.sqrt(5) - 1) / 2), -2 * np.arctan(2 - np.sqrt(5))),
    (2 * np.arctan((np.sqrt(5) - 1) / 2), np.pi),
)


def odd_solution(beta, a, y):
    """(b, z, t) making the odd block the projection onto (cos beta, sin beta)."""
    s, c = np.sin(beta), np.cos(beta)
    b = 2 * a + 1.5 * s * c
    z = 0.25 * (-4 * s * s + 4 * c * c + 3 * s * c) + y
    t = a + s * s - y
    return b, z, t


def odd_even_block(beta, a, y):
    """Even block of the solution form, in the reference closed form."""
    s, c = np.sin(beta), np.cos(beta)
    S = np.sin(2 * beta)
    return np.array([
        [a + s * s - y, S2 * a, (2 * a + 0.75 * S) / S2],
        [S2 * a, 2 * a + s * s, 2 * a + S],
        [(2 * a + 0.75 * S) / S2, 2 * a + S, 2 * a + 0.75 * S + c * c],
    ])


def odd_positivity_conditions(beta, a, y):
    """The reference ``(-a3, a2, -a1)`` of the even block's characteristic polynomial."""
    s, c = np.sin(beta), np.cos(beta)
    m3 = (4 * a * s + c * (3 * s * s - 2 * a)) * (4 * s**3 - 4 * y * s + c * (8 * y - 11 * s * s)) / 8
    p2 = (-13 / 4 * a * np.sin(2 * beta) - (2 * a + 0.5) * np.cos(2 * beta) - 4 * a * y + 5 * a
          + 0.75 * np.sin(2 * beta) - 3 / 8 * np.sin(4 * beta) + 33 / 64 * np.cos(4 * beta)
          - 0.75 * y * np.sin(2 * beta) - y - 1 / 64)
    m1 = 5 * a + 2 * s * s + c * c + 1.5 * s * c - y
    return np.array([m3, p2, m1])


_ODD_GRID = np.linspace(-9.0, 9.0, 37)


def _odd_margin(beta, p, q):
    """Noise-aware smallest eigenvalue of the even block at (a, y) = sinh(p, q)."""
    mats = odd_even_block(beta, np.sinh(p), np.sinh(q))
    if mats.ndim > 2:
        mats = np.moveaxis(mats, (0, 1), (-2, -1))
    w = np.linalg.eigvalsh(mats)
    return w[..., 0] - 1e-12 * np.abs(w).max(axis=-1)


def odd_feasibility(beta):
    """Search (a, y) for a positive definite even block.

    (a, y) = sinh(p, q) with |p|, |q| <= 9 covers many orders of magnitude.
    A 37 x 37 grid is followed by bounded Nelder-Mead from the best cell.
    Returns (margin, a, y).
    """
    P, Qg = np.meshgrid(_ODD_GRID, _ODD_GRID, indexing="ij")
    g = _odd_margin(beta, P, Qg)
    i, j = np.unravel_index(np.argmax(g), g.shape)
    best = (float(g[i, j]), float(P[i, j]), float(Qg[i, j]))
    if best[0] <= PSD_MARGIN:
        r = minimize(lambda x: -_odd_margin(beta, x[0], x[1]), [best[1], best[2]],
                     method="Nelder-Mead", bounds=[(-9, 9), (-9, 9)],
                     options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
        if -r.fun > best[0]:
            best = (float(-r.fun), float(r.x[0]), float(r.x[1]))
    return best[0], float(np.sinh(best[1])), float(np.sinh(best[2]))


@dataclass
class OddScanReport:
    betas: np.ndarray
    margin: np.ndarray
    feasible: np.ndarray
    v: np.ndarray
    conditions_ok: np.ndarray
    windows: list = field(default_factory=list)

    @property
    def forbidden_hits(self):
        """Feasible betas whose v = -cot(beta) falls inside (-2, -1/2)."""
        return int(np.sum(self.feasible & (self.v > -2) & (self.v < -0.5)))

    def window_deviation(self, reference=REFERENCE_BETA_WINDOWS):
        """Largest endpoint distance to the reference windows (inf if counts differ)."""
        if len(self.windows) != len(reference):
            return np.inf
        return float(max(max(abs(a - c), abs(b - d))
                         for (a, b), (c, d) in zip(self.windows, reference)))

    def rows(self):
        for b, m, f, v, c in zip(self.betas, self.margin, self.feasible, self.v, self.conditions_ok):
            yield (b, m, int(f), v, int(c))


def _windows(betas, feasible, step, domain=(-np.pi, np.pi)):
    """Maximal runs of feasible grid points, widened by half a step.

    Runs touching the first or last grid point extend to the domain edge.
    """
    out = []
    start = None
    for k, f in enumerate(feasible):
        if f and start is None:
            start = k
        if (not f or k == len(feasible) - 1) and start is not None:
            end = k if f else k - 1
            lo = betas[start] - step / 2 if start > 0 else domain[0]
            hi = betas[end] + step / 2 if end < len(betas) - 1 else domain[1]
            out.append((float(lo), float(hi)))
            start = None
    return out


def odd_kernel_scan(betas=None, step=1e-3):
    """Feasibility of odd kernel vectors ``n1 + v n2`` along beta in (-pi, pi].

    For feasible beta the reference conditions are evaluated at the (a, y)
    found, and the Fact's sign test must agree with them.
    """
    if betas is None:
        betas = -np.pi + step * np.arange(1, int(round(2 * np.pi / step)) + 1)
        betas = betas[betas <= np.pi]
    betas = np.asarray(betas, dtype=float)
    margin = np.zeros(len(betas))
    cond_ok = np.ones(len(betas), bool)
    for k, beta in enumerate(betas):
        m, a, y = odd_feasibility(beta)
        margin[k] = m
        if m > PSD_MARGIN:
            cond_ok[k] = bool(np.all(odd_positivity_conditions(beta, a, y) >= 0))
    feasible = margin > PSD_MARGIN
    with np.errstate(divide="ignore"):
        v = -1.0 / np.tan(betas)
    rep = OddScanReport(betas, margin, feasible, v, cond_ok)
    rep.windows = _windows(betas, feasible, float(np.median(np.diff(betas))) if len(betas) > 1 else 0.0)
    return rep


# ---------------------------------------------------------------- Fact

def monic_nonneg_roots_check(coeffs):
    """Sign test for nonnegative roots of a real-rooted monic polynomial.

    ``coeffs`` are descending ``[1, a_1, ..., a_n]``; returns True iff
    ``(-1)^j a_j >= 0`` for all j.
    """
    c = np.asarray(coeffs, dtype=float)
    if c[0] != 1:
        raise ValueError("polynomial must be monic")
    signs = (-1.0) ** np.arange(len(c))
    return bool(np.all(signs[1:] * c[1:] >= 0))


# ---------------------------------------------------------------- fixtures

def appendix_b_fixtures(grid=200, odd_step=1e-3, seed=0, span=6.0):
    """Run all N = 1, 2 checks and return (fixtures, artifacts)."""
    out = []
    art = {}
    cs = np.linspace(-5, 5, 101)
    reps = [matrix_mc(c) for c in cs]
    dev = max(r.eigenvalue_deviation for r in reps)
    vres = max(r.eigenvector_residual for r in reps)
    out.append(FixtureReport("B.mc-eigenvalues", "closed forms", None, dev, 1e-10))
    out.append(FixtureReport("B.mc-eigenvectors", "closed forms (residual)", None, vres, 1e-10))
    art["mc"] = reps

    xs, cert, exp = reality_boundary_scan()
    bad = (cert != exp) & (np.minimum(np.abs(xs + 2), np.abs(xs)) > 1e-7)
    out.append(FixtureReport("B.one-x-one-reality", "x(x+2) >= 0", None, float(bad.sum()), 0.0))

    rng = np.random.default_rng(seed)
    kdev = 0.0
    cdev = 0.0
    for _ in range(50):
        a, b, u, v, w = rng.standard_normal(5)
        M = mu5(a, b, *kernel_subspace(a, b, u, v, w))
        kdev = max(kdev, np.abs(M @ n2_xi(u, v, w)).max() / np.abs(M).max())
        al = odd_basis() @ M @ odd_basis().T
        B = null_space(np.array([[u, v, w]]))
        sr = B.T @ (even_basis() @ M @ even_basis().T) @ B
        ref = np.array([np.trace(al), np.linalg.det(al), np.trace(sr), np.linalg.det(sr)])
        cdev = max(cdev, np.abs(positivity_conditions(a, b, u, v, w) - ref).max() / max(1.0, np.abs(ref).max()))
    out.append(FixtureReport("B.kernel-subspace", 0.0, None, kdev, 1e-12))
    out.append(FixtureReport("B.four-positivity-conditions", "trace/det closed forms", None, cdev, 1e-10))

    odev = 0.0
    for _ in range(50):
        beta, a, y = rng.standard_normal(3)
        b, z, t = odd_solution(beta, a, y)
        M = mu5(a, b, y, z, t)
        s, c = np.sin(beta), np.cos(beta)
        odev = max(odev, np.abs(odd_basis() @ M @ odd_basis().T - [[c * c, s * c], [s * c, s * s]]).max())
        odev = max(odev, np.abs(even_basis() @ M @ even_basis().T - odd_even_block(beta, a, y)).max())
        co = np.poly(odd_even_block(beta, a, y))
        odev = max(odev, np.abs(odd_positivity_conditions(beta, a, y) - [-co[3], co[2], -co[1]]).max())
    out.append(FixtureReport("B.odd-reduction", 0.0, None, odev, 1e-10))

    fails = 0
    for _ in range(200):
        n = int(rng.integers(1, 7))
        roots = rng.uniform(-3, 3, n)
        if rng.random() < 0.3:
            roots = np.abs(roots)
        fails += monic_nonneg_roots_check(np.poly(roots)) != bool(np.all(roots >= 0))
    out.append(FixtureReport("B.monic-fact", 0, fails, float(fails), 0.0))

    axis = np.linspace(-span, span, grid)
    scan = n2_positivity_scan(axis, axis)
    art["n2"] = scan
    out.append(FixtureReport("B.n2-counterexamples", 0, scan.counterexamples, float(scan.counterexamples), 0.0,
                             "feasible grid points outside the reference real-root region"))
    out.append(FixtureReport("B.n2-feasible-roots-real", 0, scan.nonreal_feasible, float(scan.nonreal_feasible), 0.0))
    out.append(FixtureReport("B.n2-boundary-tracking", 0, scan.boundary_mismatches,
                             float(scan.boundary_mismatches), 0.0,
                             f"mismatches off-boundary (total {scan.total_mismatches})"))

    odd = odd_kernel_scan(step=odd_step)
    art["odd"] = odd
    out.append(FixtureReport("B.odd-forbidden-v", 0, odd.forbidden_hits, float(odd.forbidden_hits), 0.0))
    out.append(FixtureReport("B.odd-windows", REFERENCE_BETA_WINDOWS, odd.windows, odd.window_deviation(), 1e-3))
    bad_cond = int(np.sum(odd.feasible & ~odd.conditions_ok))
    out.append(FixtureReport("B.odd-reference-conditions", 0, bad_cond, float(bad_cond), 0.0))
    return out, art
