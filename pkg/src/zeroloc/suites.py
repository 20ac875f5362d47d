"""Seeded randomized property suites shared by the CLI and the tests."""

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import EtaOrthogonal, NotSimple, ZerolocError
from .formbuilder import DistributionSpec, QuadraticFormStructure, build_form, delta_shift
from .rankone import (
    ModelOperator,
    build_dprime,
    commutator_residual,
    det_identity_residual,
    dprime_spectrum,
    q_selfadjoint_residual,
)
from .specaction import (
    SmoothFunction,
    divided_difference,
    gateaux_n,
    hermite_dd,
    richardson_derivative,
    trace_oracle,
)
from .spectral import extremal_pair
from .toeplitz import HermitianToeplitz, cf_decompose, kernel_polynomial_roots, kernel_vector, palindrome_check
from .zeros import build_p, multiset_distance, poly_roots, shannon_transform

__all__ = [
    "SuiteResult",
    "random_circle_nodes",
    "toeplitz_suite",
    "random_distribution",
    "random_general_structure",
    "certified_instance",
    "finmain_suite",
    "shannon_suite",
    "spectral_action_suite",
    "divided_difference_suite",
]


@dataclass
class SuiteResult:
    name: str
    records: list = field(default_factory=list)
    skipped: dict = field(default_factory=dict)

    def skip(self, reason):
        self.skipped[reason] = self.skipped.get(reason, 0) + 1

    def column(self, key):
        return np.array([r[key] for r in self.records])

    def worst(self, key):
        col = self.column(key)
        return float(np.max(col)) if len(col) else 0.0

    def count(self, key):
        return int(np.sum(self.column(key))) if self.records else 0


# ---------------------------------------------------------------- Toeplitz

def _circular_separation(theta):
    t = np.sort(np.mod(theta, 2 * np.pi))
    gaps = np.diff(np.concatenate([t, [t[0] + 2 * np.pi]]))
    return gaps.min()


def random_circle_nodes(rng, r, min_sep=0.1):
    """Conjugate-closed set of ``r`` unit-circle nodes with angular separation
    at least ``min_sep`` (so the Toeplitz matrix is real)."""
    while True:
        pairs = r // 2
        reals = []
        if r % 2 == 1:
            reals = [rng.choice([0.0, np.pi])]
        elif pairs > 1 and rng.random() < 0.25:
            reals = [0.0, np.pi]
            pairs -= 1
        theta = rng.uniform(0, np.pi, pairs)
        all_theta = np.concatenate([theta, -theta, reals])
        if len(all_theta) < 2 or _circular_separation(all_theta) >= min_sep:
            w = rng.uniform(0.5, 2.0, pairs)
            weights = np.concatenate([w, w, rng.uniform(0.5, 2.0, len(reals))])
            return np.exp(1j * all_theta), weights


def _match_nodes(found, true, w_found, w_true):
    cost = np.abs(found[:, None] - true[None, :])
    from scipy.optimize import linear_sum_assignment
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max()), float(np.abs(w_found[r] - w_true[c]).max())


def toeplitz_suite(count=1000, seed=7, sizes=(4, 12), min_sep=0.1, tol=1e-13):
    """Rank-deficient PSD Toeplitz matrices built from unit-circle nodes.

    Matrix size ``n + 1`` is drawn from ``sizes``; the rank is ``n``.
    Records root deviation, CF reconstruction error, node/weight errors,
    detected rank and the palindrome class of the kernel vector.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("toeplitz")
    for k in range(count):
        size = int(rng.integers(sizes[0], sizes[1] + 1))
        n = size - 1
        nodes, weights = random_circle_nodes(rng, n, min_sep)
        T = HermitianToeplitz.from_nodes(nodes, weights, n)
        rec = {"instance": k, "size": size, "rank_true": n}
        try:
            xi = kernel_vector(T, tol=tol)
            rec["root_deviation"] = kernel_polynomial_roots(xi).max_deviation
            rec["palindrome"] = palindrome_check(xi)
            cf = cf_decompose(T, tol=tol)
            rec["rank"] = cf.rank
            rec["cf_residual"] = cf.residual
            if cf.rank == n:
                rec["node_error"], rec["weight_error"] = _match_nodes(cf.nodes, nodes, cf.weights, weights)
            else:
                rec["node_error"] = rec["weight_error"] = np.inf
            rec["error"] = ""
        except ZerolocError as exc:
            rec.update(root_deviation=np.inf, palindrome="error", rank=-1, cf_residual=np.inf,
                       node_error=np.inf, weight_error=np.inf, error=type(exc).__name__)
        res.records.append(rec)
    return res


# ---------------------------------------------------------------- finmain

def random_distribution(rng, N):
    """Random real distribution with Fourier support ``0..N`` and a Dirac weight."""
    x = rng.standard_normal(N + 1)
    y = np.concatenate([[0.0], rng.standard_normal(N)])
    return DistributionSpec.from_fourier(x, y, delta_weight=rng.uniform(0, 2))


def random_general_structure(rng, N):
    """Structure with random antisymmetric simple spectrum (gaps in [0.3, 1.5])."""
    lam = np.cumsum(rng.uniform(0.3, 1.5, N))
    return QuadraticFormStructure.from_half(rng.standard_normal(N + 1), rng.standard_normal(N), lam)


def certified_instance(Q):
    """Shift Q to a PSD form with kernel; return (Q0, D, Dp) or raise.

    Raises NotSimple, NotEven-like ZerolocError, or EtaOrthogonal.
    """
    pair = extremal_pair(Q.matrix(), "min")
    if pair.parity != "even":
        raise ZerolocError(f"min eigenvector is {pair.parity}")
    Q0 = delta_shift(Q, -pair.value / 2)
    D = ModelOperator(Q.lam)
    Dp = build_dprime(Q0, D, pair.vector)
    return Q0, D, Dp


def finmain_suite(count=500, seed=11, max_N=12, general_lambda=False, n_det=20):
    """Property checks on certified instances (even simple minimal kernel).

    Per instance: commutator residual, Q-self-adjointness (relative to
    ``||Q|| ||D'||``), worst det-identity residual over ``n_det`` random
    complex s, multiset match of ``{0} U roots(P)`` with spec(D'), and the
    reality certificate of the roots.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("finmain-general" if general_lambda else "finmain")
    for k in range(count):
        N = int(rng.integers(1, max_N + 1))
        Q = random_general_structure(rng, N) if general_lambda else build_form(random_distribution(rng, N), N)
        s_vals = rng.uniform(0, 1, n_det) ** 0.5 * np.exp(2j * np.pi * rng.uniform(0, 1, n_det))
        try:
            Q0, D, Dp = certified_instance(Q)
        except NotSimple:
            res.skip("not simple")
            continue
        except EtaOrthogonal:
            res.skip("eta orthogonal")
            continue
        except ZerolocError:
            res.skip("odd kernel")
            continue
        A = Q0.matrix()
        scale = np.linalg.norm(A, 2) * np.linalg.norm(Dp.matrix, 2)
        radius = 2 * np.abs(D.lam).max()
        rep = poly_roots(build_p(Dp.xi, D.lam))
        spec = dprime_spectrum(Dp)
        res.records.append({
            "instance": k,
            "N": N,
            "commutator": commutator_residual(Q0, D),
            "selfadjoint": q_selfadjoint_residual(Q0, Dp) / scale,
            "det": max(det_identity_residual(Dp, radius * s) for s in s_vals),
            "multiset": multiset_distance(np.concatenate([[0.0], rep.zeros]), spec),
            "max_imag": rep.max_abs_imag,
            "certified_real": rep.certified_real,
            "kernel": Dp.kernel_residual,
        })
    return res


# ---------------------------------------------------------------- Shannon

def _quad_transform(fhat, L, s):
    """``int_{-L/2}^{L/2} f(x + L/2) e^{-isx} dx`` by adaptive quadrature."""
    M = len(fhat) // 2
    n = np.arange(-M, M + 1)

    def g(x):
        f = np.sum(fhat * np.exp(2j * np.pi * n * (x + L / 2) / L)) / L
        return f * np.exp(-1j * s * x)

    re = integrate.quad(lambda x: g(x).real, -L / 2, L / 2, epsabs=1e-12, epsrel=1e-12, limit=400)[0]
    im = integrate.quad(lambda x: g(x).imag, -L / 2, L / 2, epsabs=1e-12, epsrel=1e-12, limit=400)[0]
    return re + 1j * im


def shannon_suite(count=50, seed=3, max_degree=8, n_s=30):
    """Lattice identity and quadrature agreement for random trig polynomials."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("shannon")
    for k in range(count):
        M = int(rng.integers(0, max_degree + 1))
        L = float(rng.uniform(0.5, 2.0))
        fhat = rng.standard_normal(2 * M + 1) + 1j * rng.standard_normal(2 * M + 1)
        n = np.arange(-M - 2, M + 3)
        lattice = shannon_transform(fhat, L, 2 * np.pi * n / L)
        padded = np.concatenate([[0, 0], fhat, [0, 0]])
        expect = np.where(n % 2 == 0, 1, -1) * padded
        s = rng.uniform(-20, 20, n_s) + 1j * rng.uniform(-2, 2, n_s)
        vals = shannon_transform(fhat, L, s)
        quad = np.array([_quad_transform(fhat, L, si) for si in s])
        res.records.append({
            "instance": k,
            "degree": M,
            "L": L,
            "lattice": float(np.abs(lattice - expect).max()),
            "quadrature": float(np.abs(vals - quad).max()),
        })
    return res


# ---------------------------------------------------------------- spectral action

def spectral_action_suite(count=100, seed=5, certified=100):
    """Gateaux derivatives vs finite differences, and the certified identity.

    Part one: random polynomial f (degree 2..6, so neither derivative vanishes
    identically), simple spectrum, generic R.
    Part two: certified instances with ``R = -|D xi><eta|`` and derivative
    data ``f'(lambda_j) = b_j``, ``f''(lambda_j) = a_j``; both derivatives
    must equal ``<D xi, Q D xi>``.
    """
    rng = np.random.default_rng(seed)
    res = SuiteResult("spectral-action")
    for k in range(count):
        deg = int(rng.integers(2, 7))
        f = SmoothFunction.polynomial(rng.standard_normal(deg + 1))
        m = int(rng.integers(3, 9))
        lam = np.sort(rng.uniform(-2, 2, m))
        while np.diff(lam).min() < 1e-2:
            lam = np.sort(rng.uniform(-2, 2, m))
        R = rng.standard_normal((m, m))
        rec = {"kind": "fd", "instance": k, "degree": deg}
        for order in (1, 2):
            g = gateaux_n(f, lam, R, order)
            fd = richardson_derivative(lambda t: trace_oracle(f.f, lam, R, t), order)
            rec[f"rel{order}"] = abs(g - fd) / max(abs(g), abs(fd), 1e-300)
        res.records.append(rec)
    done = 0
    attempts = 0
    while done < certified and attempts < 50 * certified:
        attempts += 1
        N = int(rng.integers(1, 9))
        Q = build_form(random_distribution(rng, N), N)
        try:
            Q0, D, Dp = certified_instance(Q)
        except ZerolocError:
            continue
        Dxi = D.lam * Dp.xi
        target = float(Dxi @ Q0.matrix() @ Dxi)
        R = -np.outer(Dxi, np.ones(len(Dxi)))
        f = SmoothFunction.nodal(D.lam, Q0.b, Q0.a)
        scale = np.linalg.norm(Q0.matrix(), 2) * float(Dxi @ Dxi)
        g1 = gateaux_n(f, D.lam, R, 1)
        g2 = gateaux_n(f, D.lam, R, 2)
        res.records.append({
            "kind": "certified",
            "instance": done,
            "N": N,
            "err1": abs(g1 - target) / scale,
            "err2": abs(g2 - target) / scale,
        })
        done += 1
    return res


# ---------------------------------------------------------------- divided differences

def _random_smooth(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        r = float(rng.uniform(-2, 2))
        return SmoothFunction.exponential(r, max_order=6)
    if kind == 1:
        w, ph = float(rng.uniform(0.5, 3)), float(rng.uniform(0, np.pi))
        ders = [(lambda m: (lambda x: w**m * np.sin(w * np.asarray(x) + ph + m * np.pi / 2)))(m)
                for m in range(1, 7)]
        return SmoothFunction(lambda x: np.sin(w * np.asarray(x) + ph), ders, "sine")
    return SmoothFunction.polynomial(rng.standard_normal(int(rng.integers(1, 8))), max_order=6)


def divided_difference_suite(count=200, seed=9, max_order=4, min_sep=0.05):
    """Recursion vs Hermite integral, permutation invariance, confluence."""
    rng = np.random.default_rng(seed)
    res = SuiteResult("divided-differences")
    for k in range(count):
        f = _random_smooth(rng)
        order = int(rng.integers(1, max_order + 1))
        pts = rng.uniform(-1, 1, order + 1)
        while order and np.diff(np.sort(pts)).min() < min_sep:
            pts = rng.uniform(-1, 1, order + 1)
        rec_val = divided_difference(f, pts)
        herm = hermite_dd(f, pts)
        perm = divided_difference(f, rng.permutation(pts))
        x0 = float(pts[0])
        conf = abs(divided_difference(f, [x0, x0]) - float(f.derivative(1)(x0)))
        res.records.append({
            "instance": k,
            "order": order,
            "hermite": abs(rec_val - herm),
            "permutation": abs(rec_val - perm) / max(abs(rec_val), 1e-300),
            "confluent": conf,
        })
    return res
