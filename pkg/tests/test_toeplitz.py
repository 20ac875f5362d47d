import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zeroloc.errors import (
    IllConditionedNodes,
    KernelDimensionNotOne,
    LeadingOrTrailingZero,
    NotPSD,
    RankDeficiencyNotDetected,
)
from zeroloc.suites import random_circle_nodes
from zeroloc.toeplitz import (
    HermitianToeplitz,
    cf_decompose,
    kernel_polynomial_roots,
    kernel_vector,
    palindrome_check,
)


def match(found, true):
    """Largest distance after pairing each true node with the nearest found one."""
    return max(np.abs(found - z).min() for z in true)


def test_matrix_is_hermitian_toeplitz():
    T = HermitianToeplitz([2.0, 1 + 1j, 0.5j])
    A = T.matrix()
    assert np.allclose(A, A.conj().T)
    assert A[1, 0] == 1 + 1j and A[0, 1] == 1 - 1j
    assert A[2, 0] == 0.5j
    with pytest.raises(ValueError):
        HermitianToeplitz([1j, 0.0])


def test_kernel_vector_node_built(rng):
    for n in (3, 5, 8):
        theta = np.sort(rng.uniform(0, 2 * np.pi, n))
        while np.min(np.diff(np.r_[theta, theta[0] + 2 * np.pi])) < 0.2:
            theta = np.sort(rng.uniform(0, 2 * np.pi, n))
        T = HermitianToeplitz.from_nodes(np.exp(1j * theta), rng.uniform(0.5, 2, n), n)
        xi = kernel_vector(T)
        assert np.linalg.norm(T.matrix() @ xi) <= 1e-10
        assert abs(np.linalg.norm(xi) - 1) < 1e-12


def test_kernel_vector_errors():
    with pytest.raises(KernelDimensionNotOne) as exc:
        kernel_vector(HermitianToeplitz([1.0, 0.0, 0.0]))
    assert exc.value.dimension == 0
    with pytest.raises(KernelDimensionNotOne) as exc:
        kernel_vector(HermitianToeplitz([1.0, 1.0, 1.0]))
    assert exc.value.dimension == 2
    with pytest.raises(NotPSD):
        kernel_vector(HermitianToeplitz([1.0, 2.0]))


def test_roots_of_unity():
    for m in (2, 5, 9):
        xi = np.zeros(m + 1)
        xi[0], xi[-1] = 1.0, -1.0
        r = kernel_polynomial_roots(xi)
        assert r.max_deviation < 1e-13
        assert np.abs(r.roots**m - 1).max() < 1e-12
        assert len(r.roots) == m


def test_roots_of_node_built_kernel(rng):
    nodes, w = random_circle_nodes(rng, 6)
    T = HermitianToeplitz.from_nodes(nodes, w, 6)
    r = kernel_polynomial_roots(kernel_vector(T))
    assert r.certified(1e-7)
    assert match(r.roots, nodes) < 1e-7


def test_off_circle_root_is_not_psd():
    # moment matrix of a "node" at 2 e^{i theta}: the kernel polynomial has a root
    # off the circle, and the matrix it generates fails positivity
    z = np.array([2 * np.exp(0.7j), np.exp(2.0j), np.exp(-1.0j)])
    T = HermitianToeplitz.from_nodes(z, [1.0, 1.0, 1.0], 3)
    assert np.linalg.eigvalsh(T.matrix())[0] < -1e-6
    with pytest.raises(NotPSD):
        kernel_vector(T)
    # the raw kernel polynomial with that root reports the deviation
    xi = np.poly(z)[::-1]
    assert kernel_polynomial_roots(xi).max_deviation > 0.5


def test_leading_trailing_zero():
    with pytest.raises(LeadingOrTrailingZero):
        kernel_polynomial_roots([0.0, 1.0, 1.0])
    with pytest.raises(LeadingOrTrailingZero):
        kernel_polynomial_roots([1.0, 1.0, 0.0])


def test_palindrome():
    assert palindrome_check([1, 2, 1]) == "palindromic"
    assert palindrome_check([1, 0, -1]) == "antipalindromic"
    assert palindrome_check([1, 2, 3]) == "neither"


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 11), st.integers(0, 2**31 - 1))
def test_real_kernels_are_palindromic_or_anti(r, seed):
    rng = np.random.default_rng(seed)
    nodes, w = random_circle_nodes(rng, r)
    T = HermitianToeplitz.from_nodes(nodes, w, r)
    assert T.is_real
    assert palindrome_check(kernel_vector(T, tol=1e-13)) != "neither"


def test_cf_three_nodes():
    nodes = np.array([1, 1j, -1j])
    weights = np.array([1.0, 2.0, 3.0])
    T = HermitianToeplitz.from_nodes(nodes, weights, 4)
    cf = cf_decompose(T)
    assert cf.rank == 3
    for z, a in zip(nodes, weights):
        k = np.argmin(np.abs(cf.nodes - z))
        assert abs(cf.nodes[k] - z) < 1e-8
        assert abs(cf.weights[k] - a) < 1e-8
    assert cf.residual < 1e-12


def test_cf_rank_one():
    cf = cf_decompose(HermitianToeplitz(2 * np.ones(4)))
    assert cf.rank == 1
    assert abs(cf.nodes[0] - 1) < 1e-12
    assert abs(cf.weights[0] - 2) < 1e-12


def test_cf_errors():
    with pytest.raises(RankDeficiencyNotDetected):
        cf_decompose(HermitianToeplitz([1.0, 0.0, 0.0, 0.0]))
    with pytest.raises(NotPSD):
        cf_decompose(HermitianToeplitz([1.0, 2.0, 0.0]))
    close = np.exp(1j * np.array([0.0, 1e-7]))
    T = HermitianToeplitz.from_nodes(close, [1.0, 1.0], 6)
    with pytest.raises((IllConditionedNodes, RankDeficiencyNotDetected, KernelDimensionNotOne)):
        cf_decompose(T, tol=1e-15, cond_max=1e6)


def test_cf_recovers_random_nodes(rng):
    for _ in range(30):
        r = int(rng.integers(3, 9))
        nodes, w = random_circle_nodes(rng, r, min_sep=0.3)
        T = HermitianToeplitz.from_nodes(nodes, w, r + 2)
        cf = cf_decompose(T, tol=1e-13)
        assert cf.rank == r
        assert match(cf.nodes, nodes) < 1e-8
        order = [np.argmin(np.abs(cf.nodes - z)) for z in nodes]
        assert np.abs(cf.weights[order] - w).max() < 1e-8


def test_cf_complex_nodes(rng):
    theta = np.array([0.3, 1.9, 4.0])
    T = HermitianToeplitz.from_nodes(np.exp(1j * theta), [1.0, 0.5, 2.0], 3)
    assert not T.is_real
    cf = cf_decompose(T)
    assert cf.max_node_deviation < 1e-10
    assert cf.residual < 1e-10


def test_complex_kernel_roots_are_conjugate_nodes():
    z = np.exp(1j * np.array([0.3, 1.9, 4.0]))
    T = HermitianToeplitz.from_nodes(z, [1.0, 0.5, 2.0], 3)
    r = kernel_polynomial_roots(kernel_vector(T))
    assert match(r.roots, np.conj(z)) < 1e-10
    cf = cf_decompose(T)
    assert match(cf.nodes, z) < 1e-10
