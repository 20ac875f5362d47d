"""Hermitian positive semidefinite Toeplitz matrices.

Kernel extraction, kernel-polynomial root certification on the unit
circle and Caratheodory-Fejer node/weight decomposition.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ._roots import companion_roots, sort_by_argument
from .errors import (
    IllConditionedNodes,
    KernelDimensionNotOne,
    LeadingOrTrailingZero,
    NotPSD,
    RankDeficiencyNotDetected,
)

__all__ = [
    "HermitianToeplitz",
    "CFDecomposition",
    "KernelRoots",
    "kernel_vector",
    "kernel_polynomial_roots",
    "palindrome_check",
    "cf_decompose",
]


@dataclass(frozen=True, eq=False)
class HermitianToeplitz:
    """Toeplitz matrix ``T[j, k] = c[j - k]`` with ``c[-m] = conj(c[m])``."""

    c: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.c))
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("c must be a nonempty 1-D array")
        if np.iscomplexobj(c):
            if abs(c[0].imag) > 1e-12 * max(1.0, np.abs(c).max()):
                raise ValueError("c_0 must be real")
            c = c.astype(complex)
            c[0] = c[0].real
        else:
            c = c.astype(float)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def n(self):
        return len(self.c) - 1

    @property
    def is_real(self):
        return not np.iscomplexobj(self.c) or bool(np.all(self.c.imag == 0))

    def matrix(self):
        return linalg.toeplitz(self.c, np.conj(self.c))

    def leading(self, size):
        return HermitianToeplitz(self.c[:size])

    @classmethod
    def from_nodes(cls, nodes, weights, n):
        """Moment matrix ``c_m = sum_k alpha_k z_k^m`` for ``m = 0..n``."""
        z = np.asarray(nodes, dtype=complex)
        w = np.asarray(weights, dtype=float)
        m = np.arange(n + 1)
        c = (w[None, :] * z[None, :] ** m[:, None]).sum(axis=1)
        if np.all(np.abs(c.imag) <= 1e-14 * np.abs(c).max()):
            c = c.real
        return cls(c)


@dataclass(frozen=True)
class KernelRoots:
    """Roots of a kernel polynomial with their distance to the unit circle."""

    roots: np.ndarray
    max_deviation: float

    def certified(self, tol=1e-7):
        return self.max_deviation <= tol


@dataclass(frozen=True)
class CFDecomposition:
    nodes: np.ndarray
    weights: np.ndarray
    residual: float
    max_node_deviation: float
    condition: float

    @property
    def rank(self):
        return len(self.nodes)

    def reconstruct(self, n):
        return HermitianToeplitz.from_nodes(self.nodes, self.weights, n)


def _spectrum(T):
    A = T.matrix()
    w, U = linalg.eigh(A)
    return w, U


def _self_inversive(xi):
    """Project a unit kernel vector onto its conjugate-reversal symmetry.

    A one-dimensional kernel of a Hermitian Toeplitz matrix is mapped to
    itself by ``J conj``, so ``J conj(xi) = c xi`` with ``|c| = 1``.
    Averaging with that image removes the rounding component that breaks
    the symmetry (for real input this is the palindromic projection).
    """
    c = np.vdot(xi, np.conj(xi[::-1]))
    if abs(c) < 0.5:
        return xi
    c = c / abs(c)
    sym = 0.5 * (xi + np.conj(c) * np.conj(xi[::-1]))
    nrm = np.linalg.norm(sym)
    return sym / nrm if nrm > 0 else xi


def kernel_vector(T, tol=1e-10, symmetrize=True):
    """Unit vector spanning the one-dimensional numerical kernel of T.

    Parameters
    ----------
    T : HermitianToeplitz
    tol : float
        Eigenvalues at most ``tol * ||T||`` count as zero; eigenvalues
        below ``-tol * ||T||`` mean T is not PSD.
    symmetrize : bool
        Enforce the conjugate-reversal symmetry every kernel vector of a
        Hermitian Toeplitz matrix with one-dimensional kernel has.

    Raises
    ------
    NotPSD, KernelDimensionNotOne
    """
    w, U = _spectrum(T)
    scale = max(np.abs(w).max(), np.finfo(float).tiny)
    if w[0] < -tol * scale:
        raise NotPSD(w[0])
    dim = int(np.sum(w <= tol * scale))
    if dim != 1:
        raise KernelDimensionNotOne(dim)
    xi = U[:, 0]
    if symmetrize:
        xi = _self_inversive(xi)
    return xi


def kernel_polynomial_roots(xi, tol=1e-12):
    """Roots of ``P(z) = sum_j xi_j z^j`` sorted by argument.

    Raises LeadingOrTrailingZero if ``|xi_0|`` or ``|xi_n|`` is below
    ``tol * ||xi||``.  Roots are never projected onto the circle; the
    largest ``| |z| - 1 |`` is reported instead.
    """
    xi = np.asarray(xi)
    nrm = np.linalg.norm(xi)
    if len(xi) == 0 or nrm == 0:
        raise LeadingOrTrailingZero("zero vector")
    if abs(xi[0]) <= tol * nrm or abs(xi[-1]) <= tol * nrm:
        raise LeadingOrTrailingZero(
            f"|xi_0| = {abs(xi[0]):.3e}, |xi_n| = {abs(xi[-1]):.3e}"
        )
    roots = sort_by_argument(companion_roots(xi))
    dev = float(np.abs(np.abs(roots) - 1).max()) if len(roots) else 0.0
    return KernelRoots(roots, dev)


def palindrome_check(xi, tol=1e-8):
    """Classify ``xi`` as 'palindromic', 'antipalindromic' or 'neither'."""
    xi = np.asarray(xi)
    nrm = np.linalg.norm(xi)
    if nrm == 0:
        return "palindromic"
    if np.linalg.norm(xi - xi[::-1]) <= tol * nrm:
        return "palindromic"
    if np.linalg.norm(xi + xi[::-1]) <= tol * nrm:
        return "antipalindromic"
    return "neither"


def cf_decompose(T, tol=1e-10, cond_max=1e12):
    """Caratheodory-Fejer decomposition ``T = V diag(alpha) V^*``.

    The numerical rank ``r`` counts eigenvalues above ``tol * lambda_max``.
    Nodes are the conjugated roots of the kernel polynomial of the leading
    ``(r+1) x (r+1)`` block (``V^* xi = 0`` puts the roots of
    ``sum xi_j z^j`` at ``conj(z_k)``); weights solve the Vandermonde
    least-squares system against ``c_0..c_n``.
    """
    w, _ = _spectrum(T)
    lmax = w[-1]
    if w[0] < -tol * max(abs(lmax), np.finfo(float).tiny):
        raise NotPSD(w[0])
    r = int(np.sum(w > tol * lmax)) if lmax > 0 else 0
    if r == T.n + 1:
        raise RankDeficiencyNotDetected(f"numerical rank {r} equals the matrix size")
    if r == 0:
        return CFDecomposition(np.zeros(0, complex), np.zeros(0), 0.0, 0.0, 1.0)
    xi = kernel_vector(T.leading(r + 1), tol=tol)
    nodes = sort_by_argument(np.conj(kernel_polynomial_roots(xi).roots))
    m = np.arange(T.n + 1)
    V = nodes[None, :] ** m[:, None]
    cond = np.linalg.cond(V)
    if not np.isfinite(cond) or cond > cond_max:
        raise IllConditionedNodes(cond)
    alpha, *_ = np.linalg.lstsq(V, np.asarray(T.c, dtype=complex), rcond=None)
    weights = alpha.real
    recon = HermitianToeplitz.from_nodes(nodes, weights, T.n).matrix()
    A = T.matrix()
    residual = float(np.linalg.norm(A - recon) / np.linalg.norm(A))
    dev = float(np.abs(np.abs(nodes) - 1).max())
    return CFDecomposition(nodes, weights, residual, dev, float(cond))
