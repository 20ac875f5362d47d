"""Divided differences and Gateaux derivatives of ``tr f(D + tR)``.

For diagonal ``D = diag(lambda)`` with simple spectrum,

    d/dt   tr f(D + tR)|_0 = sum_j R_jj f'(lambda_j)
    d2/dt2 tr f(D + tR)|_0 = sum_ij R_ij R_ji f'[lambda_i, lambda_j]

and the second line also equals ``2 sum_ij R_ij R_ji f[lambda_i, lambda_j, lambda_i]``.
"""

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DerivativeUnavailable, IdentityMismatch

__all__ = [
    "SmoothFunction",
    "DividedDifferenceRequest",
    "divided_difference",
    "hermite_dd",
    "gateaux_n",
    "trace_oracle",
    "richardson_derivative",
    "CLUSTER_TOL",
]

CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class SmoothFunction:
    """A function with explicit derivative callables.

    ``derivatives[m - 1]`` evaluates the m-th derivative.  ``f`` may be
    None when only derivative data is known (e.g. values on a spectrum).
    """

    f: Optional[Callable]
    derivatives: Sequence[Callable] = ()
    name: str = ""

    def __call__(self, x):
        if self.f is None:
            raise DerivativeUnavailable(0)
        return self.f(x)

    def derivative(self, m):
        if m == 0:
            if self.f is None:
                raise DerivativeUnavailable(0)
            return self.f
        if m - 1 >= len(self.derivatives):
            raise DerivativeUnavailable(m)
        return self.derivatives[m - 1]

    @property
    def has_values(self):
        return self.f is not None

    @classmethod
    def polynomial(cls, coeffs, max_order=None):
        """Polynomial with ascending ``coeffs``; exact derivatives of every order."""
        p = np.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
        order = max(p.degree() + 1, 1) if max_order is None else max_order
        ders = [p.deriv(m) for m in range(1, order + 1)]
        return cls(p, ders, "polynomial")

    @classmethod
    def exponential(cls, rate=1.0, max_order=8):
        """``exp(rate x)`` with derivatives up to ``max_order``."""
        ders = [
            (lambda m: (lambda x: rate**m * np.exp(rate * np.asarray(x))))(m)
            for m in range(1, max_order + 1)
        ]
        return cls(lambda x: np.exp(rate * np.asarray(x)), ders, "exp")

    @classmethod
    def nodal(cls, nodes, first, second):
        """Derivative data on a finite node set: ``f'(nodes) = first``,
        ``f''(nodes) = second``.  Values of f itself are not available."""
        nodes = np.asarray(nodes, dtype=float)
        first = np.asarray(first, dtype=float)
        second = np.asarray(second, dtype=float)

        def lookup(table):
            def g(x):
                x = np.asarray(x, dtype=float)
                idx = np.abs(x[..., None] - nodes).argmin(axis=-1)
                if np.any(np.abs(nodes[idx] - x) > CLUSTER_TOL):
                    raise DerivativeUnavailable(1)
                return table[idx]
            return g

        return cls(None, [lookup(first), lookup(second)], "nodal")


@dataclass(frozen=True)
class DividedDifferenceRequest:
    f: SmoothFunction
    points: tuple = field(default_factory=tuple)

    @property
    def order(self):
        return len(self.points) - 1


def divided_difference(f, points=None, cluster_tol=CLUSTER_TOL):
    """``f[x_0, ..., x_n]`` by the recursion, with confluent clusters.

    Points are sorted first, which makes the result permutation-invariant;
    a run of points within ``cluster_tol`` of its first element uses
    ``f^{(m)}(x) / m!``.  Accepts a DividedDifferenceRequest or ``(f, points)``.
    """
    if isinstance(f, DividedDifferenceRequest):
        f, points = f.f, f.points
    x = np.sort(np.asarray(points, dtype=float))
    n = len(x)
    if n == 0:
        raise ValueError("at least one point is required")
    table = [float(f.derivative(0)(xi)) if f.has_values else None for xi in x]
    if not f.has_values and n > 1 and np.ptp(x) >= cluster_tol:
        raise DerivativeUnavailable(0)
    for k in range(1, n):
        nxt = []
        for i in range(n - k):
            span = x[i + k] - x[i]
            if span < cluster_tol:
                nxt.append(float(f.derivative(k)(x[i])) / factorial(k))
            else:
                nxt.append((table[i + 1] - table[i]) / span)
        table = nxt
    if table[0] is None:
        raise DerivativeUnavailable(0)
    return table[0]


def hermite_dd(f, points=None, quadrature_order=20):
    """Hermite-Genocchi integral ``int_{Delta_n} f^{(n)}(sum s_k x_k) ds``.

    The simplex is mapped from the unit cube by the collapsed coordinates
    ``s_k = u_k prod_{i<k} (1 - u_i)``, Jacobian
    ``prod_k (1 - u_k)^{n-k}``, and integrated with tensor Gauss-Legendre.
    """
    if isinstance(f, DividedDifferenceRequest):
        f, points = f.f, f.points
    x = np.asarray(points, dtype=float)
    n = len(x) - 1
    if n == 0:
        return float(f.derivative(0)(x[0]))
    t, w = np.polynomial.legendre.leggauss(quadrature_order)
    t = 0.5 * (t + 1)
    w = 0.5 * w
    grids = np.meshgrid(*([t] * n), indexing="ij")
    wgrid = np.ones_like(grids[0])
    for g_w in np.meshgrid(*([w] * n), indexing="ij"):
        wgrid = wgrid * g_w
    remaining = np.ones_like(grids[0])
    arg = np.zeros_like(grids[0])
    jac = np.ones_like(grids[0])
    for k in range(n):
        u = grids[k]
        arg = arg + remaining * u * x[k + 1]
        jac = jac * (1 - u) ** (n - 1 - k)
        remaining = remaining * (1 - u)
    arg = arg + remaining * x[0]
    vals = np.asarray(f.derivative(n)(arg), dtype=float)
    return float(np.sum(wgrid * jac * vals))


def _first_derivative_matrix(f, lam):
    """``f'[lambda_i, lambda_j]`` with ``f''(lambda_i)`` on the diagonal."""
    d1 = np.asarray(f.derivative(1)(lam), dtype=float)
    d2 = np.asarray(f.derivative(2)(lam), dtype=float)
    dl = lam[:, None] - lam[None, :]
    close = np.abs(dl) < CLUSTER_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        F = (d1[:, None] - d1[None, :]) / dl
    F[close] = np.broadcast_to(d2[:, None], F.shape)[close]
    return F


def gateaux_n(f, lam, R, n, cross_check=True, rtol=1e-9):
    """n-th derivative of ``t -> tr f(diag(lam) + tR)`` at 0, for n = 1, 2.

    Evaluated with divided differences of ``f'``.  When values of f are
    available and ``cross_check`` is set, the form
    ``n! sum R_{i1 i2} ... R_{in i1} f[lambda_i1, ..., lambda_in, lambda_i1]``
    is also evaluated; disagreement beyond ``rtol`` raises IdentityMismatch.
    """
    lam = np.asarray(lam, dtype=float)
    R = np.asarray(R, dtype=float)
    if n == 1:
        value = float(np.sum(np.diag(R) * f.derivative(1)(lam)))
    elif n == 2:
        value = float(np.sum(R * R.T * _first_derivative_matrix(f, lam)))
    else:
        raise ValueError("only n = 1 and n = 2 are supported")
    if cross_check and f.has_values:
        m = len(lam)
        if n == 1:
            alt = sum(R[i, i] * divided_difference(f, [lam[i], lam[i]]) for i in range(m))
        else:
            alt = 2 * sum(
                R[i, j] * R[j, i] * divided_difference(f, [lam[i], lam[j], lam[i]])
                for i in range(m)
                for j in range(m)
            )
        scale = max(abs(value), abs(alt), np.abs(R).max() ** n * np.abs(f.derivative(1)(lam)).max(), 1e-300)
        if abs(value - alt) > rtol * scale:
            raise IdentityMismatch(f"n={n}: {value!r} vs {alt!r}")
    return value


def trace_oracle(f_poly, D, R, t, dtype=np.longdouble):
    """``tr f(D + tR)`` for a polynomial f by Horner's rule on matrices.

    ``f_poly`` is an ascending coefficient list or numpy Polynomial (degree
    at most 12); ``D`` is a diagonal matrix or the vector of its entries.
    Arithmetic runs in ``dtype`` (extended precision by default) and the
    result keeps that type, so difference quotients built from it are not
    swamped by float64 rounding.
    """
    coeffs = np.asarray(getattr(f_poly, "coef", f_poly), dtype=dtype)
    if len(coeffs) - 1 > 12:
        raise ValueError("polynomial degree must be at most 12")
    D = np.asarray(D, dtype=dtype)
    if D.ndim == 1:
        D = np.diag(D)
    A = D + dtype(t) * np.asarray(R, dtype=dtype)
    eye = np.eye(len(A), dtype=dtype)
    acc = coeffs[-1] * eye
    for c in coeffs[-2::-1]:
        acc = acc @ A + c * eye
    return np.trace(acc)


def richardson_derivative(fun, n, steps=(1e-3, 1e-4)):
    """Central-difference derivative of order 1 or 2 at 0 with one Richardson step."""
    def central(h):
        if n == 1:
            return (fun(h) - fun(-h)) / (2 * h)
        if n == 2:
            return (fun(h) - 2 * fun(0.0) + fun(-h)) / h**2
        raise ValueError("n must be 1 or 2")

    h1, h2 = steps
    r2 = (h1 / h2) ** 2
    return float((r2 * central(h2) - central(h1)) / (r2 - 1))
