"""Quadratic-form matrices of real distributions on an interval.

A distribution is ``w * delta_0 + sum_k a_k exp(2 pi i k y / L)`` with
``a_k = x_k + i y_k`` and ``a_{-k} = conj(a_k)``.  Its quadratic form on
trigonometric polynomials has matrix entries

    q_mn = (psi(m) - psi(n)) / (m - n),   q_nn = psi'(n),

with ``psi(x) = (1/pi) int_0^L sin(2 pi x (1 - y/L)) D(y) dy``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ZerolocError

__all__ = [
    "DistributionSpec",
    "QuadraticFormStructure",
    "indices",
    "psi_eval",
    "psi_derivative_eval",
    "build_form",
    "recover_distribution",
    "delta_shift",
]

PARITY_TOL = 1e-12


def indices(N):
    """Integer index range -N..N as an array."""
    return np.arange(-N, N + 1)


@dataclass(frozen=True, eq=False)
class DistributionSpec:
    """Finite Fourier data plus a Dirac weight at the origin.

    Parameters
    ----------
    coeffs : array_like, shape (K+1, 2)
        Rows ``(x_k, y_k)`` for ``k = 0..K``.  ``y_0`` must vanish.
    delta_weight : float
        Coefficient of ``delta_0``.
    L : float
        Length of the interval ``[0, L]``.
    """

    coeffs: np.ndarray = field(default_factory=lambda: np.zeros((1, 2)))
    delta_weight: float = 0.0
    L: float = 1.0

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=float))
        if c.size == 0:
            c = np.zeros((1, 2))
        if c.ndim != 2 or c.shape[1] != 2:
            raise ValueError("coeffs must have shape (K+1, 2)")
        if not self.L > 0:
            raise ValueError(f"L must be positive, got {self.L}")
        if c[0, 1] != 0.0:
            raise ValueError("y_0 must be zero for a real distribution")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "delta_weight", float(self.delta_weight))
        object.__setattr__(self, "L", float(self.L))

    @property
    def N_support(self):
        return self.coeffs.shape[0] - 1

    @property
    def x(self):
        return self.coeffs[:, 0]

    @property
    def y(self):
        return self.coeffs[:, 1]

    def coefficient(self, k):
        """Complex Fourier coefficient a_k (zero outside the support)."""
        k = int(k)
        if abs(k) > self.N_support:
            return 0j
        a = complex(self.coeffs[abs(k), 0], self.coeffs[abs(k), 1])
        return a if k >= 0 else a.conjugate()

    def smooth_part(self, y):
        """Evaluate the smooth (non-Dirac) part at points ``y`` in [0, L]."""
        t = 2 * np.pi * np.asarray(y, dtype=float) / self.L
        out = np.full(np.shape(t), self.x[0])
        for k in range(1, self.N_support + 1):
            out = out + 2 * self.x[k] * np.cos(k * t) - 2 * self.y[k] * np.sin(k * t)
        return out

    @classmethod
    def from_fourier(cls, x, y, delta_weight=0.0, L=1.0):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape:
            raise ValueError("x and y must have equal length")
        return cls(np.column_stack([x, y]), delta_weight, L)

    def truncated(self, K):
        """Drop Fourier modes above K (pads with zeros when K is larger)."""
        c = np.zeros((K + 1, 2))
        m = min(K, self.N_support) + 1
        c[:m] = self.coeffs[:m]
        return DistributionSpec(c, self.delta_weight, self.L)


@dataclass(frozen=True, eq=False)
class QuadraticFormStructure:
    """Structured symmetric matrix ``q_ii = a_i``, ``q_ij = (b_i - b_j)/(l_i - l_j)``.

    Arrays are indexed ``-N..N`` (array position ``i + N``).
    """

    a: np.ndarray
    b: np.ndarray
    lam: np.ndarray = None

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float).copy()
        b = np.asarray(self.b, dtype=float).copy()
        if a.ndim != 1 or a.shape != b.shape or len(a) % 2 == 0:
            raise ValueError("a and b must be 1-D arrays of equal odd length 2N+1")
        N = len(a) // 2
        lam = indices(N).astype(float) if self.lam is None else np.asarray(self.lam, dtype=float).copy()
        if lam.shape != a.shape:
            raise ValueError("lambda must have the same length as a")
        scale = max(1.0, np.abs(a).max(), np.abs(b).max())
        if np.abs(a - a[::-1]).max() > PARITY_TOL * scale:
            raise ZerolocError("parity violated: a_{-i} != a_i")
        if np.abs(b + b[::-1]).max() > PARITY_TOL * scale:
            raise ZerolocError("parity violated: b_{-i} != -b_i")
        lscale = max(1.0, np.abs(lam).max())
        if np.abs(lam + lam[::-1]).max() > PARITY_TOL * lscale:
            raise ZerolocError("lambda must satisfy lambda_{-i} = -lambda_i")
        if np.any(np.diff(lam) <= 0):
            raise ZerolocError("lambda must be strictly increasing")
        for arr in (a, b, lam):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "lam", lam)

    @property
    def N(self):
        return len(self.a) // 2

    @property
    def is_circle_model(self):
        return bool(np.array_equal(self.lam, indices(self.N).astype(float)))

    def matrix(self):
        db = self.b[:, None] - self.b[None, :]
        dl = self.lam[:, None] - self.lam[None, :]
        np.fill_diagonal(dl, 1.0)
        q = db / dl
        np.fill_diagonal(q, self.a)
        return q

    @classmethod
    def from_half(cls, a_half, b_half, lam_half=None):
        """Build from nonnegative-index data.

        ``a_half`` holds ``a_0..a_N``; ``b_half`` and ``lam_half`` hold
        the entries for indices ``1..N``.
        """
        a_half = np.asarray(a_half, dtype=float)
        b_half = np.asarray(b_half, dtype=float)
        a = np.concatenate([a_half[:0:-1], a_half])
        b = np.concatenate([-b_half[::-1], [0.0], b_half])
        lam = None
        if lam_half is not None:
            lam_half = np.asarray(lam_half, dtype=float)
            lam = np.concatenate([-lam_half[::-1], [0.0], lam_half])
        return cls(a, b, lam)


# Entire helper functions.  With u in [0, 1]:
#   c0(c) = int cos(cu) du,  s0(c) = int sin(cu) du,
#   c1(c) = int u cos(cu) du, s1(c) = int u sin(cu) du.

def _c0(c):
    c = np.asarray(c, dtype=float)
    out = np.ones_like(c)
    nz = c != 0
    out[nz] = np.sin(c[nz]) / c[nz]
    return out


def _s0(c):
    c = np.asarray(c, dtype=float)
    out = np.zeros_like(c)
    nz = c != 0
    out[nz] = 2 * np.sin(c[nz] / 2) ** 2 / c[nz]
    return out


def _c1(c):
    c = np.asarray(c, dtype=float)
    out = np.empty_like(c)
    small = np.abs(c) < 1e-3
    cs = c[small]
    out[small] = 0.5 - cs**2 / 8 + cs**4 / 144
    cb = c[~small]
    out[~small] = (cb * np.sin(cb) - 2 * np.sin(cb / 2) ** 2) / cb**2
    return out


def _s1(c):
    c = np.asarray(c, dtype=float)
    out = np.empty_like(c)
    small = np.abs(c) < 0.5
    cs = c[small]
    # sum_m (-1)^m c^(2m+1) / ((2m+1)! (2m+3))
    term = cs.copy()
    acc = term / 3
    for m in range(1, 9):
        term = -term * cs**2 / ((2 * m) * (2 * m + 1))
        acc = acc + term / (2 * m + 3)
    out[small] = acc
    cb = c[~small]
    out[~small] = (np.sin(cb) - cb * np.cos(cb)) / cb**2
    return out


def psi_eval(dist, x):
    """Evaluate psi(x) in closed form, mode by mode.

    Each Fourier mode integrates analytically against
    ``sin(2 pi x (1 - y/L))``; removable singularities are handled by
    the entire helper functions, so integer arguments are exact.
    """
    x = np.asarray(x, dtype=float)
    L = dist.L
    a = 2 * np.pi * x
    out = dist.delta_weight * np.sin(a) / np.pi
    acc = dist.x[0] * _s0(a)
    for k in range(1, dist.N_support + 1):
        b = 2 * np.pi * k
        ic = 0.5 * (_s0(a + b) + _s0(a - b))
        is_ = -0.5 * (_c0(a - b) - _c0(a + b))
        acc = acc + 2 * dist.x[k] * ic - 2 * dist.y[k] * is_
    out = out + L / np.pi * acc
    return out[()] if out.ndim == 0 else out


def psi_derivative_eval(dist, x):
    """Analytic derivative of :func:`psi_eval`."""
    x = np.asarray(x, dtype=float)
    L = dist.L
    a = 2 * np.pi * x
    out = 2 * dist.delta_weight * np.cos(a)
    acc = dist.x[0] * 2 * np.pi * _c1(a)
    for k in range(1, dist.N_support + 1):
        b = 2 * np.pi * k
        icp = np.pi * (_c1(a - b) + _c1(a + b))
        isp = -np.pi * (_s1(a + b) - _s1(a - b))
        acc = acc + 2 * dist.x[k] * icp - 2 * dist.y[k] * isp
    out = out + L / np.pi * acc
    return out[()] if out.ndim == 0 else out


def _diag_offsets(y, N):
    """Contribution of the imaginary parts to q_nn, n = 0..N (L = 1)."""
    K = len(y) - 1
    out = np.zeros(N + 1)
    ks = np.arange(1, K + 1)
    yk = y[1:]
    out[0] = -np.sum(2 * yk / (np.pi * ks))
    for n in range(1, N + 1):
        mask = ks != n
        s = np.sum(2 * ks[mask] * yk[mask] / (np.pi * (n**2 - ks[mask] ** 2)))
        if n <= K:
            s -= y[n] / (2 * np.pi * n)
        out[n] = s
    return out


def build_form(dist, N):
    """Quadratic-form structure of ``dist`` on modes -N..N (L = 1 only).

    Off-diagonal generators are ``b_n = psi(n) = y_n / pi``; the diagonal
    uses the integer-point formula for ``psi'(n)``, so both are exact
    finite sums.
    """
    N = int(N)
    if N < 0:
        raise ValueError("N must be nonnegative")
    if dist.L != 1.0:
        raise ValueError("matrix assembly requires L = 1")
    K = dist.N_support
    y = dist.y
    xpad = np.zeros(N + 1)
    m = min(K, N) + 1
    xpad[:m] = dist.x[:m]
    ypad = np.zeros(N + 1)
    ypad[:m] = y[:m]
    a_half = 2 * dist.delta_weight + xpad + _diag_offsets(y, N)
    b_half = ypad[1:] / np.pi
    return QuadraticFormStructure.from_half(a_half, b_half)


def recover_distribution(Q, delta_weight=None):
    """Invert :func:`build_form`.

    The off-diagonal generators fix ``y_n`` and the diagonal fixes the
    combined real parts ``X_n = x_n + 2 w``.  A Dirac weight and a constant
    mode ``x_0`` are indistinguishable from the diagonal alone (both shift
    every entry), so the split uses ``delta_weight`` when given and otherwise
    the least-squares choice ``w = mean_n X_|n| / 2``, which returns the
    pure Dirac measure for ``2 I``.
    """
    if not Q.is_circle_model:
        raise ZerolocError("recover_distribution requires lambda_j = j")
    N = Q.N
    y = np.zeros(N + 1)
    y[1:] = np.pi * Q.b[N + 1:]
    X = Q.a[N:] - _diag_offsets(y, N)
    if delta_weight is None:
        delta_weight = (X[0] + 2 * X[1:].sum()) / (2 * (2 * N + 1))
    x = X - 2 * delta_weight
    return DistributionSpec.from_fourier(x, y, delta_weight=delta_weight)


def delta_shift(Q, c):
    """Add ``c * delta_0`` to the distribution: ``a_i -> a_i + 2c``."""
    return QuadraticFormStructure(Q.a + 2 * c, Q.b, Q.lam)
