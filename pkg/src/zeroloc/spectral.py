"""Symmetric eigen-services, extremal pairs and the truncation ladder."""

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import linalg

from .errors import NotSimple, NotSymmetric, ZerolocError

__all__ = [
    "Spectrum",
    "EigenPair",
    "LadderRung",
    "TruncationLadderReport",
    "sym_eig",
    "parity",
    "extremal_pair",
    "truncation_sweep",
]


class Spectrum(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray
    gap: float
    parity: str


def sym_eig(A, sym_tol=1e-12):
    """Ascending eigenvalues and orthonormal eigenvectors of symmetric A."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    asym = np.abs(A - A.T).max() if A.size else 0.0
    if asym > sym_tol * max(1.0, np.abs(A).max()):
        raise NotSymmetric(asym)
    w, U = linalg.eigh(0.5 * (A + A.T))
    return Spectrum(w, U)


def parity(v, tol=1e-8):
    """'even', 'odd' or 'mixed' with respect to the flip ``v_j -> v_{-j}``."""
    v = np.asarray(v)
    nrm = np.linalg.norm(v)
    odd_part = np.linalg.norm(v - v[::-1]) / 2
    even_part = np.linalg.norm(v + v[::-1]) / 2
    if odd_part <= tol * nrm:
        return "even"
    if even_part <= tol * nrm:
        return "odd"
    return "mixed"


def _project_parity(v, p):
    if p == "even":
        v = 0.5 * (v + v[::-1])
    elif p == "odd":
        v = 0.5 * (v - v[::-1])
    return v / np.linalg.norm(v)


def extremal_pair(A, which="min", gap_tol=None, symmetrize_parity=True):
    """Smallest or largest eigenpair with a simplicity certificate.

    ``gap_tol`` defaults to ``1e-8 * ||A||_2``.  For even or odd vectors the
    parity projection removes rounding noise; the sign is fixed so that the
    largest-magnitude entry is positive.

    Raises
    ------
    NotSimple
        If the distance to the nearest other eigenvalue is at most gap_tol.
        The exception carries the gap and the (uncertified) pair.
    """
    w, U = sym_eig(A)
    if which not in ("min", "max"):
        raise ValueError("which must be 'min' or 'max'")
    idx = 0 if which == "min" else len(w) - 1
    nbr = 1 if which == "min" else len(w) - 2
    gap = float(abs(w[nbr] - w[idx])) if len(w) > 1 else np.inf
    if gap_tol is None:
        gap_tol = 1e-8 * max(np.abs(w).max(), np.finfo(float).tiny)
    v = U[:, idx]
    p = parity(v)
    if symmetrize_parity and p != "mixed":
        v = _project_parity(v, p)
    v = v * np.sign(v[np.argmax(np.abs(v))])
    pair = EigenPair(float(w[idx]), v, gap, p)
    if gap <= gap_tol:
        raise NotSimple(gap, pair)
    return pair


@dataclass
class LadderRung:
    N: int
    lambda_min: float
    gap: float
    parity: str
    simple: bool
    max_im_root: Optional[float] = None
    certified_real: Optional[bool] = None
    note: str = ""


@dataclass
class TruncationLadderReport:
    rungs: list = field(default_factory=list)

    @property
    def monotone(self):
        lm = [r.lambda_min for r in self.rungs]
        return all(b <= a + 1e-12 for a, b in zip(lm, lm[1:]))

    def rows(self):
        for r in self.rungs:
            yield (r.N, r.lambda_min, r.gap, r.parity,
                   "" if r.max_im_root is None else r.max_im_root)


def truncation_sweep(dist, N_list, gap_tol=None, tol_real=1e-7):
    """Min eigenpair of ``Q_N`` along a ladder of truncations.

    Non-simple rungs are recorded (``simple=False``) rather than aborting.
    Even rungs run the kernel-polynomial zero pipeline.
    """
    from .formbuilder import build_form
    from .zeros import build_p, poly_roots

    N_list = [int(n) for n in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly ascending")
    report = TruncationLadderReport()
    for N in N_list:
        Q = build_form(dist, N)
        try:
            pair = extremal_pair(Q.matrix(), "min", gap_tol)
            simple = True
        except NotSimple as exc:
            pair = exc.value
            simple = False
        rung = LadderRung(N, pair.value, pair.gap, pair.parity, simple)
        if simple and pair.parity == "even":
            try:
                rep = poly_roots(build_p(pair.vector, Q.lam), tol=tol_real)
                rung.max_im_root = rep.max_abs_imag
                rung.certified_real = rep.certified_real
            except ZerolocError as exc:
                rung.note = type(exc).__name__
        report.rungs.append(rung)
    return report
