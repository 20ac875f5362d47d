"""Toeplitz discretization of convolution kernels ``h(x - y)`` on [0, L].

The extremal eigenvector of the step discretization is a step function
``sum_j a_j chi_j``; its Fourier transform factors as
``P(e^{-i s alpha}) * chi0_hat(s)`` with ``P(z) = sum_j a_j z^j``, so its
zeros form an explicit lattice built from the roots of P.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Callable

import numpy as np

from .errors import NotSimple, ZerolocError
from .spectral import extremal_pair
from .toeplitz import HermitianToeplitz, kernel_polynomial_roots, kernel_vector
from .zeros import ZeroReport, _sinc

__all__ = [
    "ContinuousKernel",
    "StepEigenvector",
    "named_kernel",
    "tabulated_kernel",
    "discretize",
    "hs_distance",
    "step_eigen",
    "step_l2_distance",
    "convergence_study",
    "KERNEL_CATALOG",
]


@dataclass(frozen=True)
class ContinuousKernel:
    """Even continuous function ``h`` on ``[-L, L]``."""

    h: Callable
    L: float = 1.0
    name: str = ""

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        x = np.linspace(0, self.L, 257)
        hp, hm = np.asarray(self.h(x), float), np.asarray(self.h(-x), float)
        if np.abs(hp - hm).max() > 1e-12 * max(1.0, np.abs(hp).max()):
            raise ValueError(f"kernel {self.name!r} is not even")

    def __call__(self, x):
        return np.asarray(self.h(np.asarray(x, dtype=float)), dtype=float)


def _appendix_alpha(L):
    # the cosine mode of period 2L: an even kernel with an explicit spectrum
    return lambda x: np.cos(np.pi * x / L)


KERNEL_CATALOG = {
    "constant": lambda L: (lambda x: np.ones_like(x)),
    "triangle": lambda L: (lambda x: 1 - np.abs(x) / L),
    "gaussian": lambda L: (lambda x: np.exp(-x**2)),
    "appendix-alpha": _appendix_alpha,
}


def named_kernel(name, L=1.0):
    """Built-in kernel from the catalog (constant, triangle, gaussian, appendix-alpha)."""
    try:
        make = KERNEL_CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(KERNEL_CATALOG)}")
    return ContinuousKernel(make(L), L, name)


def tabulated_kernel(xs, hs, L=None):
    """Linear interpolation of samples; nonnegative tables are mirrored."""
    xs = np.asarray(xs, dtype=float)
    hs = np.asarray(hs, dtype=float)
    order = np.argsort(xs)
    xs, hs = xs[order], hs[order]
    if L is None:
        L = float(np.abs(xs).max())
    if xs[0] >= 0:
        fun = lambda x: np.interp(np.abs(x), xs, hs)
    else:
        fun = lambda x: np.interp(x, xs, hs)
    return ContinuousKernel(fun, L, "tabulated")


def discretize(k, N_steps):
    """Real symmetric Toeplitz ``alpha * h(|i - j| alpha)``, ``alpha = L / N_steps``."""
    N_steps = int(N_steps)
    if N_steps < 2:
        raise ValueError("N_steps must be at least 2")
    alpha = k.L / N_steps
    return HermitianToeplitz(alpha * k(np.arange(N_steps) * alpha))


def hs_distance(k, N_steps, order=8):
    """Hilbert-Schmidt norm of ``K - R_n`` on ``L^2[0, L]``.

    ``R_n`` has the piecewise-constant kernel ``h_{|i - j|}`` on cell pairs.
    The double integral is done cell pair by cell pair with tensor
    Gauss-Legendre; only the cell offset ``d = i - j`` matters.
    """
    alpha = k.L / N_steps
    t, wt = np.polynomial.legendre.leggauss(order)
    t = 0.5 * (t + 1)
    wt = 0.5 * wt
    dt = (t[:, None] - t[None, :]).ravel()
    ww = (wt[:, None] * wt[None, :]).ravel()
    total = 0.0
    for d in range(-(N_steps - 1), N_steps):
        diff = k((d + dt) * alpha) - k(np.array(abs(d) * alpha))
        total += (N_steps - abs(d)) * alpha**2 * np.sum(ww * diff**2)
    return float(np.sqrt(total))


@dataclass(frozen=True, eq=False)
class StepEigenvector:
    """Unit step function ``sum_j a_j chi_j`` with ``chi_j`` the indicator of
    ``[j alpha, (j+1) alpha)``."""

    alpha: float
    a: np.ndarray
    eigenvalue: float
    gap: float

    @property
    def N_steps(self):
        return len(self.a)

    def chi0_hat(self, s):
        """``int_0^alpha e^{-isx} dx``."""
        s = np.asarray(s, dtype=complex)
        w = self.alpha * s
        out = self.alpha * np.exp(-0.5j * w) * _sinc(w.ravel() / 2, 1e-6).reshape(w.shape)
        return out[()] if out.ndim == 0 else out

    def transform(self, s):
        """``P(e^{-i s alpha}) * chi0_hat(s)``."""
        s = np.asarray(s, dtype=complex)
        z = np.exp(-1j * s * self.alpha)
        return np.polynomial.polynomial.polyval(z, self.a) * self.chi0_hat(s)

    def polynomial_roots(self):
        return kernel_polynomial_roots(self.a)

    def zero_lattice(self, window):
        """Zeros of :meth:`transform` with ``|Re s| <= window``.

        Lattice ``{2 pi n / alpha, n != 0}`` plus ``s_k + 2 pi n / alpha``
        where ``e^{-i s_k alpha}`` runs over the roots of P.
        """
        period = 2 * np.pi / self.alpha
        roots = self.polynomial_roots().roots
        base = (-np.angle(roots) + 1j * np.log(np.abs(roots))) / self.alpha
        nmax = int(np.ceil(window / period)) + 1
        shifts = period * np.arange(-nmax, nmax + 1)
        z = (base[:, None] + shifts[None, :]).ravel()
        lattice = shifts[shifts != 0].astype(complex)
        z = np.concatenate([z, lattice])
        return z[np.abs(z.real) <= window]

    def l2_norm(self):
        return float(np.sqrt(self.alpha * np.sum(self.a**2)))


def step_eigen(T, alpha, which="max", gap_tol=None):
    """Extremal eigenvector of the discretized operator as a unit step function.

    Raises NotSimple when the extremal eigenvalue is not isolated.
    """
    pair = extremal_pair(T.matrix(), which, gap_tol)
    v = pair.vector
    # orient so that the sum (or first entry, for odd vectors) is positive
    ref = v.sum() if abs(v.sum()) > 1e-12 else v[0]
    v = v * np.sign(ref)
    return StepEigenvector(float(alpha), v / np.sqrt(alpha), pair.value, pair.gap)


def circle_certificate(T, step, which="max"):
    """Unit-circle deviation of P through the shifted Toeplitz kernel.

    ``lambda_max - T`` (or ``T - lambda_min``) is PSD Toeplitz with the
    eigenvector as kernel, so the toeplitz module applies to it.
    """
    c = np.array(T.c, dtype=float)
    shifted = -c if which == "max" else c.copy()
    shifted[0] += step.eigenvalue if which == "max" else -step.eigenvalue
    xi = kernel_vector(HermitianToeplitz(shifted), tol=1e-10)
    return kernel_polynomial_roots(xi)


def step_l2_distance(u, v):
    """L^2 distance of two step functions on a common refinement, sign-aligned."""
    n, m = u.N_steps, v.N_steps
    lcm = n * m // gcd(n, m)
    fu = np.repeat(u.a, lcm // n)
    fv = np.repeat(v.a, lcm // m)
    h = u.alpha * n / lcm
    if np.dot(fu, fv) < 0:
        fv = -fv
    return float(np.sqrt(h * np.sum((fu - fv) ** 2)))


@dataclass
class ConvergenceRung:
    N_steps: int
    eigenvalue: float
    gap: float
    simple: bool
    l2_step: float = float("nan")
    max_abs_imag: float = float("nan")
    circle_deviation: float = float("nan")
    max_residual: float = float("nan")


@dataclass
class ConvergenceReport:
    kernel: str
    window: float
    rungs: list = field(default_factory=list)

    @property
    def distances(self):
        return [r.l2_step for r in self.rungs if np.isfinite(r.l2_step)]

    @property
    def distances_decreasing(self):
        d = self.distances
        return all(b < a for a, b in zip(d, d[1:]))

    @property
    def eigen_cauchy_decreasing(self):
        ev = [r.eigenvalue for r in self.rungs]
        diffs = np.abs(np.diff(ev))
        return bool(np.all(np.diff(diffs) < 0))


def convergence_study(k, ladder, window=50.0, which="max", gap_tol=None):
    """Refinement ladder for the extremal eigenvector of ``h(x - y)``.

    Per rung: eigenvalue, sign-aligned L^2 distance to the previous rung,
    largest ``|Im|`` among located zeros with ``|Re s| <= window``, the
    unit-circle deviation of P and the largest normalized residual
    ``|xi_hat_n(z)| / ||xi_n||`` at the located zeros.
    """
    ladder = [int(n) for n in ladder]
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder must be strictly ascending")
    report = ConvergenceReport(k.name, window)
    prev = None
    for n in ladder:
        T = discretize(k, n)
        alpha = k.L / n
        try:
            step = step_eigen(T, alpha, which, gap_tol)
        except NotSimple as exc:
            report.rungs.append(ConvergenceRung(n, exc.value.value, exc.gap, False))
            prev = None
            continue
        rung = ConvergenceRung(n, step.eigenvalue, step.gap, True)
        z = step.zero_lattice(window)
        rung.max_abs_imag = float(np.abs(z.imag).max()) if len(z) else 0.0
        rung.max_residual = float(np.abs(step.transform(z)).max() / step.l2_norm()) if len(z) else 0.0
        try:
            rung.circle_deviation = circle_certificate(T, step, which).max_deviation
        except ZerolocError:
            pass
        if prev is not None:
            rung.l2_step = step_l2_distance(prev, step)
        report.rungs.append(rung)
        prev = step
    return report


def transform_bound(step_fine, step_coarse, s, L=1.0):
    """Cauchy-Schwarz bound ``||xi - xi_n|| (int_0^L e^{2 Im(s) x} dx)^{1/2}``."""
    s = np.asarray(s, dtype=complex)
    d = step_l2_distance(step_fine, step_coarse)
    y = 2 * s.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        integral = np.where(np.abs(y) > 1e-12, np.expm1(y * L) / y, L)
    return d * np.sqrt(integral)


__all__ += ["circle_certificate", "transform_bound", "ConvergenceRung", "ConvergenceReport"]
