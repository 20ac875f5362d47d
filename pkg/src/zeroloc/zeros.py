"""Kernel polynomial P(s), the entire transform of the kernel vector,
the Shannon transform, and zero-reality certification."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from ._roots import companion_roots
from .errors import DegenerateDegree, RepeatedLambda

__all__ = [
    "KernelPolynomial",
    "ZeroReport",
    "build_p",
    "poly_roots",
    "xi_hat_eval",
    "xi_hat_zeros",
    "shannon_transform",
    "multiset_distance",
    "DEFAULT_TOL_REAL",
]

DEFAULT_TOL_REAL = 1e-7


@dataclass(frozen=True, eq=False)
class KernelPolynomial:
    """``P(s) = sum_k xi_k prod_{j != k} (lambda_j - s)``, ascending coefficients."""

    xi: np.ndarray
    lam: np.ndarray
    coeffs: np.ndarray

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __call__(self, s):
        return np.polynomial.polynomial.polyval(s, self.coeffs)

    def direct(self, s):
        """Evaluate from the product form, without the monomial basis."""
        s = np.asarray(s, dtype=complex)
        diff = self.lam[:, None] - s.ravel()[None, :]
        out = np.zeros(s.size, dtype=complex)
        for k in range(len(self.lam)):
            out += self.xi[k] * np.prod(np.delete(diff, k, axis=0), axis=0)
        out = out.reshape(s.shape)
        return out[()] if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class ZeroReport:
    zeros: np.ndarray
    max_abs_imag: float
    certified_real: bool
    tol: float
    residuals: np.ndarray = None

    @classmethod
    def from_zeros(cls, zeros, tol=DEFAULT_TOL_REAL, residuals=None):
        z = np.asarray(zeros, dtype=complex)
        order = np.lexsort((z.imag, z.real))
        z = z[order]
        if residuals is not None:
            residuals = np.asarray(residuals, dtype=float)[order]
        if len(z) == 0:
            return cls(z, 0.0, True, tol, residuals)
        imag = np.abs(z.imag)
        ok = bool(np.all(imag <= tol * (1 + np.abs(z))))
        return cls(z, float(imag.max()), ok, tol, residuals)


def _exact_linear_product(lam):
    """Ascending coefficients of prod_j (lam_j - s) as Fractions."""
    coeffs = [Fraction(1)]
    for l in lam:
        lf = Fraction(l)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += lf * c
            nxt[i + 1] -= c
        coeffs = nxt
    return coeffs


def _divide_linear(F, l):
    """Exact quotient of F(s) by (l - s); F must vanish at s = l."""
    n = len(F) - 1
    G = [Fraction(0)] * n
    G[n - 1] = -F[n]
    for i in range(n - 1, 0, -1):
        G[i - 1] = l * G[i] - F[i]
    return G


def build_p(xi, lam=None):
    """Assemble the kernel polynomial of ``xi`` for model eigenvalues ``lam``.

    Coefficients are accumulated exactly in rational arithmetic from the
    binary floating-point inputs and rounded once, so the wide dynamic
    range of the products causes no cancellation error.

    Raises
    ------
    RepeatedLambda
    """
    xi = np.asarray(xi, dtype=float)
    n = len(xi)
    if lam is None:
        N = n // 2
        lam = np.arange(-N, N + 1, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if lam.shape != xi.shape:
        raise ValueError("xi and lambda must have equal length")
    if len(np.unique(lam)) != len(lam):
        raise RepeatedLambda("lambda values must be pairwise distinct")
    F = _exact_linear_product(lam)
    acc = [Fraction(0)] * max(n, 1)
    for k in range(n):
        if xi[k] == 0:
            continue
        G = _divide_linear(F, Fraction(lam[k]))
        xk = Fraction(xi[k])
        for i, g in enumerate(G):
            acc[i] += xk * g
    coeffs = np.array([float(c) for c in acc])
    return KernelPolynomial(xi, lam, coeffs)


def poly_roots(P, tol=DEFAULT_TOL_REAL, lead_tol=1e-12):
    """Roots of a kernel polynomial with a reality certificate.

    Raises DegenerateDegree if the leading coefficient ``+-sum xi`` is below
    ``lead_tol * ||xi||_1``.  For a bare coefficient array only an exactly
    vanishing leading coefficient is rejected.
    """
    if isinstance(P, KernelPolynomial):
        c = np.asarray(P.coeffs, dtype=float)
        ref = np.abs(P.xi).sum()
    else:
        c = np.asarray(P, dtype=float)
        ref = 0.0
    if len(c) == 0 or c[-1] == 0 or abs(c[-1]) <= lead_tol * ref:
        raise DegenerateDegree(f"leading coefficient {c[-1] if len(c) else 0:.3e}")
    return ZeroReport.from_zeros(companion_roots(c), tol)


def _sinc(t, window):
    """sin(t)/t for complex t, with a series inside |t| < window."""
    t = np.asarray(t, dtype=complex)
    out = np.empty_like(t)
    small = np.abs(t) < window
    ts = t[small]
    out[small] = 1 - ts**2 / 6 + ts**4 / 120
    tb = t[~small]
    out[~small] = np.sin(tb) / tb
    return out


def xi_hat_eval(xi, z, window=1e-6):
    """Entire transform ``int_0^1 sum_j xi_j e^{2 pi i j x} e^{-i z x} dx``.

    Each summand is ``xi_j e^{-i w/2} sinc(w/2)`` with ``w = z - 2 pi j``,
    which equals ``2 e^{-iz/2} sin(z/2) xi_j / (z - 2 pi j)`` and stays
    finite at the lattice points.  Indices run ``-N..N``.
    """
    xi = np.asarray(xi)
    N = len(xi) // 2
    z = np.asarray(z, dtype=complex)
    zf = z.ravel()
    j = np.arange(-N, N + 1)
    w = zf[:, None] - 2 * np.pi * j[None, :]
    terms = np.exp(-0.5j * w) * _sinc(w / 2, window / 2)
    out = terms @ xi
    out = out.reshape(z.shape)
    return out[()] if out.ndim == 0 else out


def xi_hat_zeros(xi, search_radius, tol=DEFAULT_TOL_REAL, verify_tol=1e-8):
    """Zeros of the entire transform within ``|z| <= search_radius``.

    The zero set is ``{2 pi m : |m| > N}`` together with ``2 pi r`` for the
    roots ``r`` of P (roots at lattice points with ``xi_m = 0`` appear there).
    Residuals ``|xi_hat(z)| / ||xi||`` are attached; zeros whose residual
    exceeds ``verify_tol`` make the report uncertified.
    """
    xi = np.asarray(xi, dtype=float)
    xi = xi / np.linalg.norm(xi)
    N = len(xi) // 2
    P = build_p(xi)
    rep = poly_roots(P, tol)
    zs = [2 * np.pi * r for r in rep.zeros if abs(2 * np.pi * r) <= search_radius]
    M = int(np.floor(search_radius / (2 * np.pi)))
    for m in range(N + 1, M + 1):
        zs += [2 * np.pi * m, -2 * np.pi * m]
    zs = np.array(zs, dtype=complex)
    res = np.abs(xi_hat_eval(xi, zs)) if len(zs) else np.zeros(0)
    out = ZeroReport.from_zeros(zs, tol, res)
    if len(zs) and res.max() > verify_tol:
        return ZeroReport(out.zeros, out.max_abs_imag, False, tol, out.residuals)
    return out


def shannon_transform(fhat, L, s, window=1e-6):
    """Fourier transform of the recentred function from its Fourier data.

    ``fhat`` holds ``fhat(n)`` for ``n = -M..M``.  Returns
    ``sin(L s / 2) sum_n fhat(n) / (L s / 2 - n pi)`` evaluated term-wise as
    ``(-1)^n fhat(n) sinc(L s / 2 - n pi)``, exact at the lattice ``2 pi n / L``.
    """
    fhat = np.asarray(fhat, dtype=complex)
    M = len(fhat) // 2
    n = np.arange(-M, M + 1)
    s = np.asarray(s, dtype=complex)
    sf = s.ravel()
    w = L * sf[:, None] / 2 - n[None, :] * np.pi
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    out = (_sinc(w, window) * sign[None, :]) @ fhat
    out = out.reshape(s.shape)
    return out[()] if out.ndim == 0 else out


def multiset_distance(a, b):
    """Largest distance after optimally matching two equal-size multisets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return np.inf
    if len(a) == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())
