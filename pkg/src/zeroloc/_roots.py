"""Polynomial roots through balanced companion matrices."""

import numpy as np
from scipy import linalg


def companion_roots(coeffs):
    """Roots of ``sum_k coeffs[k] * z**k`` (ascending order).

    The leading coefficient must be nonzero; callers check degree
    certification before calling.  The companion matrix is balanced
    explicitly before the Hessenberg-QR eigensolve.
    """
    c = np.asarray(coeffs)
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, dtype=complex)
    dtype = complex if np.iscomplexobj(c) else float
    comp = np.zeros((deg, deg), dtype=dtype)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    bal, _ = linalg.matrix_balance(comp, permute=False)
    return linalg.eigvals(bal, check_finite=False)


def sort_by_argument(z):
    """Sort complex numbers by principal argument in [0, 2*pi)."""
    z = np.asarray(z, dtype=complex)
    return z[np.argsort(np.mod(np.angle(z), 2 * np.pi), kind="stable")]
