import numpy as np
import pytest

from zeroloc.errors import DimensionMismatch, EtaOrthogonal, NotEven, NotInKernel
from zeroloc.formbuilder import QuadraticFormStructure, delta_shift
from zeroloc.rankone import (
    ModelOperator,
    RankOneModifiedOperator,
    build_dprime,
    commutator_residual,
    det_identity_residual,
    dprime_spectrum,
    q_selfadjoint_residual,
    structure_with_kernel,
)
from zeroloc.spectral import extremal_pair
from zeroloc.suites import certified_instance, random_general_structure


def mc_structure(c):
    # rows (0,-1,-1), (-1,c,-1), (-1,-1,0) on indices -1, 0, 1
    return QuadraticFormStructure([0.0, c, 0.0], [1.0, 0.0, -1.0])


def manual_dprime(xi, lam):
    xi = np.asarray(xi, float) / np.sum(xi)
    D = ModelOperator(np.asarray(lam, float))
    M = np.diag(D.lam) - np.outer(D.lam * xi, np.ones(len(xi)))
    return RankOneModifiedOperator(D, xi, M, 0.0, 0.0)


def test_mc_structure_matches_matrix():
    for c in (-2.0, 0.0, 3.5):
        A = mc_structure(c).matrix()
        assert np.array_equal(A, [[0, -1, -1], [-1, c, -1], [-1, -1, 0]])


def test_model_operator():
    D = ModelOperator.circle(3)
    assert np.array_equal(D.lam, np.arange(-3, 4))
    v = np.arange(7.0)
    g = D.grading(v)
    assert np.array_equal(D.matrix() @ g, -D.grading(D.matrix() @ v))
    with pytest.raises(ValueError):
        ModelOperator([-1.0, 0.0, 2.0])


def test_commutator_circle_and_general(rng):
    Q = mc_structure(1.3)
    assert commutator_residual(Q, ModelOperator.circle(1)) <= 1e-12
    G = random_general_structure(rng, 6)
    assert commutator_residual(G, ModelOperator(G.lam)) <= 1e-12
    with pytest.raises(DimensionMismatch):
        commutator_residual(Q, ModelOperator.circle(2))


def test_commutator_detects_corruption(rng):
    Q = random_general_structure(rng, 3)
    D = ModelOperator(Q.lam)
    A = Q.matrix()
    i, j = 3 + 2, 3 - 1
    A[i, j] += 1e-3
    A[j, i] += 1e-3
    res = commutator_residual(Q, D, matrix=A)
    assert res >= 1e-3 * min(1.0, abs(Q.lam[i] - Q.lam[j])) * (1 - 1e-9)


def test_dprime_from_mc():
    for c in np.linspace(-4, 4, 9):
        Q = mc_structure(c)
        Q0, D, Dp = certified_instance(Q)
        assert Dp.kernel_residual <= 1e-12
        assert abs(Dp.xi.sum() - 1) <= 1e-12
        assert Dp.key_residual <= 1e-10
        assert np.abs(Dp.matrix - (D.matrix() - np.outer(D.lam * Dp.xi, np.ones(3)))).max() == 0


def test_dprime_e0_case():
    Q = QuadraticFormStructure([1.0, 2.0, 0.0, 2.0, 1.0], np.zeros(5))
    D = ModelOperator.circle(2)
    e0 = np.eye(5)[2]
    Dp = build_dprime(Q, D, e0)
    assert np.array_equal(Dp.matrix, D.matrix())
    assert np.allclose(np.sort(dprime_spectrum(Dp).real), D.lam)


def test_dprime_errors():
    Q = mc_structure(0.5)
    D = ModelOperator.circle(1)
    pair = extremal_pair(Q.matrix(), "min")
    Q0 = delta_shift(Q, -pair.value / 2)
    # diag(0, 1, 0) annihilates the odd vector (1, 0, -1)
    with pytest.raises(NotEven):
        build_dprime(QuadraticFormStructure([0.0, 1.0, 0.0], np.zeros(3)), D, [1.0, 0.0, -1.0])
    with pytest.raises(NotInKernel):
        build_dprime(Q0, D, [1.0, 1.0, 1.0])
    # even kernel vector with zero sum: (1, -2, 1) is annihilated by a suitable form
    Qz = structure_with_kernel([1.0, -2.0, 1.0], [-1.0, 0.0, 1.0])
    with pytest.raises(EtaOrthogonal):
        build_dprime(Qz, D, [1.0, -2.0, 1.0])


def test_selfadjoint_valid_and_general(rng):
    Q0, D, Dp = certified_instance(mc_structure(1.0))
    scale = np.linalg.norm(Q0.matrix(), 2) * np.linalg.norm(Dp.matrix, 2)
    assert q_selfadjoint_residual(Q0, Dp) <= 1e-11 * scale
    for _ in range(20):
        try:
            Q0, D, Dp = certified_instance(random_general_structure(rng, 5))
        except Exception:
            continue
        scale = np.linalg.norm(Q0.matrix(), 2) * np.linalg.norm(Dp.matrix, 2)
        assert q_selfadjoint_residual(Q0, Dp) <= 1e-11 * scale


def test_selfadjoint_negative_control():
    Q0, D, Dp = certified_instance(mc_structure(1.0))
    scale = np.linalg.norm(Q0.matrix(), 2) * np.linalg.norm(D.matrix(), 2)
    assert q_selfadjoint_residual(Q0, D.matrix()) >= 1e-6 * scale


def test_det_identity_at_zero():
    Q0, D, Dp = certified_instance(mc_structure(2.0))
    assert det_identity_residual(Dp, 0.0) <= 1e-12
    assert abs(np.linalg.det(Dp.matrix)) <= 1e-12 * np.linalg.norm(Dp.matrix) ** 3


def test_det_vanishes_where_xi_vanishes():
    lam = np.arange(-3, 4, dtype=float)
    xi = np.array([0.0, 1.0, 2.0, 3.0, 2.0, 1.0, 0.0])
    Dp = manual_dprime(xi, lam)
    for s in (3.0, -3.0):
        assert abs(np.linalg.det(Dp.matrix - s * np.eye(7))) <= 1e-9
        assert det_identity_residual(Dp, s) <= 1e-12
    # and not where xi is nonzero
    assert abs(np.linalg.det(Dp.matrix - 2.0 * np.eye(7))) > 1e-3


def test_det_identity_random_disk(rng):
    N = 5
    Q0, D, Dp = certified_instance(QuadraticFormStructure.from_half(
        rng.standard_normal(N + 1), rng.standard_normal(N)))
    r = 2 * N * np.sqrt(rng.uniform(0, 1, 100))
    s = r * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    assert max(det_identity_residual(Dp, si) for si in s) <= 1e-8


def test_spectrum_real_on_certified(rng):
    hits = 0
    for _ in range(30):
        try:
            Q0, D, Dp = certified_instance(random_general_structure(rng, 4))
        except Exception:
            continue
        hits += 1
        ev = dprime_spectrum(Dp)
        assert np.abs(ev.imag).max() <= 1e-7 * (1 + np.abs(ev).max())
    assert hits > 5


def test_indefinite_form_gives_complex_spectrum():
    Q = structure_with_kernel([1.0, -1.0, 1.0], [-0.5, 0.0, 0.5])
    assert np.linalg.eigvalsh(Q.matrix())[0] < 0
    Dp = build_dprime(Q, ModelOperator.circle(1), [1.0, -1.0, 1.0])
    ev = np.sort_complex(dprime_spectrum(Dp))
    assert np.abs(ev.imag).max() > 0.5
    assert np.allclose(np.sort(np.abs(ev)), [0, 1, 1], atol=1e-12)
