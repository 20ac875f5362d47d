"""Rank-one corrected model operator and its identities.

For a form Q with ``Q xi = 0`` and ``xi`` even, normalized so
``<eta|xi> = 1`` (``eta`` the all-ones vector), the operator
``D' = D - |D xi><eta|`` is self-adjoint for ``<u, v>_Q = <Q u, v>`` and
``det(D' - s) = -s P(s)``.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .errors import DimensionMismatch, EtaOrthogonal, NotEven, NotInKernel
from .formbuilder import QuadraticFormStructure, indices

__all__ = [
    "ModelOperator",
    "RankOneModifiedOperator",
    "commutator_residual",
    "build_dprime",
    "q_selfadjoint_residual",
    "det_identity_residual",
    "dprime_spectrum",
    "structure_with_kernel",
]


@dataclass(frozen=True, eq=False)
class ModelOperator:
    """Diagonal operator ``D e_j = lambda_j e_j`` on indices -N..N."""

    lam: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float).copy()
        if lam.ndim != 1 or len(lam) % 2 == 0:
            raise ValueError("lambda must have odd length 2N+1")
        if np.abs(lam + lam[::-1]).max() > 1e-12 * max(1.0, np.abs(lam).max()):
            raise ValueError("lambda must be antisymmetric")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("lambda must be strictly increasing")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @classmethod
    def circle(cls, N):
        return cls(indices(N).astype(float))

    @property
    def N(self):
        return len(self.lam) // 2

    def matrix(self):
        return np.diag(self.lam)

    @staticmethod
    def grading(v):
        """The flip ``e_j -> e_{-j}``."""
        return np.asarray(v)[..., ::-1]


@dataclass(frozen=True, eq=False)
class RankOneModifiedOperator:
    base: ModelOperator
    xi: np.ndarray
    matrix: np.ndarray
    kernel_residual: float
    key_residual: float

    @property
    def eta(self):
        return np.ones(len(self.xi))


def _as_matrix(Q):
    return Q.matrix() if isinstance(Q, QuadraticFormStructure) else np.asarray(Q, dtype=float)


def commutator_residual(Q, D, matrix=None):
    """``max |DQ - QD - (|beta><eta| - |eta><beta|)|`` with beta = b.

    ``matrix`` overrides the materialized Q (for corrupted-entry tests).
    """
    lam = D.lam if isinstance(D, ModelOperator) else np.asarray(D, dtype=float)
    A = Q.matrix() if matrix is None else np.asarray(matrix, dtype=float)
    if A.shape != (len(lam), len(lam)) or len(Q.b) != len(lam):
        raise DimensionMismatch(f"Q is {A.shape}, D has {len(lam)} entries")
    comm = lam[:, None] * A - A * lam[None, :]
    beta = Q.b
    target = beta[:, None] - beta[None, :]
    return float(np.abs(comm - target).max())


def build_dprime(Q, D, xi_raw, tol=1e-8):
    """Rank-one corrected operator ``D' = D - |D xi><eta|``.

    Parameters
    ----------
    Q : QuadraticFormStructure
        Form whose kernel contains ``xi_raw``.
    D : ModelOperator
    xi_raw : array_like
        Even kernel vector; rescaled so that ``<eta|xi> = 1``.
    tol : float
        Relative tolerance for the kernel, parity and normalization checks.
    """
    xi = np.asarray(xi_raw, dtype=float)
    lam = D.lam
    if len(xi) != len(lam) or len(Q.a) != len(lam):
        raise DimensionMismatch("Q, D and xi must share the index range")
    A = Q.matrix()
    nxi = np.linalg.norm(xi)
    nQ = np.linalg.norm(A, 2)
    res = np.linalg.norm(A @ xi) / (max(nQ, np.finfo(float).tiny) * nxi)
    if res > tol:
        raise NotInKernel(res)
    if np.linalg.norm(xi - xi[::-1]) > tol * nxi:
        raise NotEven("kernel vector is not even")
    s = xi.sum()
    if abs(s) <= tol * nxi:
        raise EtaOrthogonal(f"<eta|xi> = {s:.3e}")
    xi = xi / s
    Dxi = lam * xi
    Dp = np.diag(lam) - np.outer(Dxi, np.ones(len(xi)))
    kernel_res = float(np.abs(Dp @ xi).max())
    key_res = float(np.linalg.norm(A @ Dxi + Q.b))
    return RankOneModifiedOperator(D, xi, Dp, kernel_res, key_res)


def q_selfadjoint_residual(Q, Dp, n_random=20, seed=0):
    """``max |<Q D' f, g> - <Q f, D' g>|`` over a deterministic probe set.

    Probes are the standard basis plus ``n_random`` seeded unit vectors;
    the residual is absolute (compare against ``||Q|| ||D'||``).
    """
    A = _as_matrix(Q)
    M = Dp.matrix if isinstance(Dp, RankOneModifiedOperator) else np.asarray(Dp, dtype=float)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((n, n_random))
    R /= np.linalg.norm(R, axis=0)
    F = np.hstack([np.eye(n), R])
    # entry [g, f] holds <Q D' f, g> and <Q f, D' g>
    lhs = F.T @ (A @ (M @ F))
    rhs = (M @ F).T @ (A @ F)
    return float(np.abs(lhs - rhs).max())


def _det_lu(M):
    with warnings.catch_warnings():
        # exactly singular matrices are legitimate here (s = 0)
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(M, check_finite=False)
    sign = (-1) ** int(np.sum(piv != np.arange(len(piv))))
    return sign * np.prod(np.diag(lu))


def det_identity_residual(Dp, s):
    """Relative gap between ``det(D' - s)`` and ``-s P(s)``.

    The right side is summed term by term, ``xi_j prod_{i != j} (lambda_i - s)``,
    so no pole is ever divided out.  The normalizer is the largest of the
    two sides, the size of the summands, and ``prod |lambda_i - s|`` over
    ``lambda_i != s``; the last keeps the residual meaningful where both
    sides vanish (``s = 0``, or ``s = lambda_j`` with ``xi_j = 0``).
    """
    lam = Dp.base.lam
    xi = Dp.xi
    s = complex(s)
    n = len(lam)
    lhs = _det_lu(Dp.matrix.astype(complex) - s * np.eye(n))
    diff = lam - s
    terms = np.array([xi[j] * np.prod(np.delete(diff, j)) for j in range(n)])
    rhs = -s * terms.sum()
    bound = abs(s) * np.abs(terms).sum()
    nz = np.abs(diff) > 0
    base = np.prod(np.abs(diff[nz]))
    denom = max(abs(lhs), abs(rhs), bound, base)
    return float(abs(lhs - rhs) / denom)


def dprime_spectrum(Dp):
    """Eigenvalues of the dense nonsymmetric D' (balanced Hessenberg QR)."""
    M = Dp.matrix if isinstance(Dp, RankOneModifiedOperator) else np.asarray(Dp, dtype=float)
    bal, _ = linalg.matrix_balance(M, permute=True)
    return linalg.eigvals(bal, check_finite=False)


def structure_with_kernel(xi, b, lam=None):
    """Form with prescribed off-diagonal generators and ``Q xi = 0``.

    ``b`` is the full antisymmetric generator vector; the diagonal is the
    unique choice annihilating the even vector ``xi`` (all entries nonzero).
    The result is generally indefinite, which makes it a negative control.
    """
    xi = np.asarray(xi, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(xi == 0):
        raise ValueError("xi must have no zero entries")
    Q0 = QuadraticFormStructure(np.zeros(len(xi)), b, lam)
    A = Q0.matrix()
    a = -(A @ xi) / xi
    a = 0.5 * (a + a[::-1])
    return QuadraticFormStructure(a, b, Q0.lam)
