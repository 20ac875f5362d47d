import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeroloc.errors import NotSimple, NotSymmetric
from zeroloc.formbuilder import DistributionSpec, build_form
from zeroloc.replab.appendix_a import mu_matrix, simple_distribution
from zeroloc.replab.appendix_b import matrix_mc
from zeroloc.spectral import extremal_pair, parity, sym_eig, truncation_sweep


def test_identity():
    w, U = sym_eig(np.eye(4))
    assert np.all(w == 1)


def test_mc_at_zero():
    A = np.array([[0.0, -1, -1], [-1, 0, -1], [-1, -1, 0]])
    w, _ = sym_eig(A)
    assert np.allclose(w, [-2, 1, 1], atol=1e-14)
    assert np.allclose(matrix_mc(0.0).computed, [-2, 1, 1], atol=1e-12)


def test_random_reconstruction(rng):
    X = rng.standard_normal((50, 50))
    A = X + X.T
    w, U = sym_eig(A)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(A - (U * w) @ U.T).max() <= 1e-10 * np.linalg.norm(A, 2)
    assert np.abs(U.T @ U - np.eye(50)).max() <= 1e-10


def test_not_symmetric():
    with pytest.raises(NotSymmetric):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_mu1_top_pair():
    p = extremal_pair(mu_matrix(1), "max")
    assert abs(p.value - (np.sqrt(57) + 3) / 4) < 1e-13
    assert p.parity == "even"
    assert abs(p.vector[0] - p.vector[2]) < 1e-14
    A = mu_matrix(1)
    assert np.linalg.norm(A @ p.vector - p.value * p.vector) <= 1e-10 * np.linalg.norm(A, 2)


def test_degenerate_raises_with_gap():
    with pytest.raises(NotSimple) as exc:
        extremal_pair(2 * np.eye(5), "min")
    assert exc.value.gap == 0.0


def test_top_gap_shrinks_with_N():
    gaps = [extremal_pair(mu_matrix(N), "max").gap for N in (10, 25, 50)]
    assert gaps[0] > gaps[1] > gaps[2] > 0


def test_parity_classification():
    assert parity([1.0, 2.0, 1.0]) == "even"
    assert parity([1.0, 0.0, -1.0]) == "odd"
    assert parity([1.0, 2.0, 3.0]) == "mixed"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**31 - 1))
def test_simple_eigenvectors_never_mixed(N, seed):
    rng = np.random.default_rng(seed)
    d = DistributionSpec.from_fourier(rng.standard_normal(N + 1),
                                      np.r_[0.0, rng.standard_normal(N)], 1.0)
    A = build_form(d, N).matrix()
    for which in ("min", "max"):
        try:
            p = extremal_pair(A, which)
        except NotSimple:
            continue
        assert p.parity in ("even", "odd")
        assert p.gap >= 0


def test_sweep_simple_distribution():
    rep = truncation_sweep(simple_distribution(1.0), range(1, 7))
    lm = [r.lambda_min for r in rep.rungs]
    assert rep.monotone
    assert all(b < a for a, b in zip(lm, lm[1:]))
    assert all(x > 2 - 8 / 5 for x in lm)
    assert lm[-1] - 0.4 < 0.01
    assert all(r.simple for r in rep.rungs)


def test_sweep_delta_records_not_simple():
    rep = truncation_sweep(DistributionSpec(delta_weight=1.0), [1, 2, 3])
    assert [r.simple for r in rep.rungs] == [False, False, False]


def test_sweep_rows_and_order():
    rep = truncation_sweep(simple_distribution(1.0), [2, 4])
    rows = list(rep.rows())
    assert [r[0] for r in rows] == [2, 4]
    assert rows[0][3] == "even"
    with pytest.raises(ValueError):
        truncation_sweep(simple_distribution(1.0), [4, 2])
