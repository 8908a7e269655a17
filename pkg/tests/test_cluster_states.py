import itertools

import numpy as np
import pytest

from clusterfuse.cluster_states import ClusterChain, LabelCounter, fresh_primitive, linear_cluster
from clusterfuse.densmat import DensityMatrix, fidelity_pure, min_pt_eigenvalue, partial_trace, purity

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
KET = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]


def cz_chain_oracle(n):
    """Multiply explicit CZ matrices onto |+>^n."""
    plus = np.ones(2) / np.sqrt(2)
    psi = plus
    for _ in range(n - 1):
        psi = np.kron(psi, plus)
    for i in range(n - 1):
        diag = np.ones(1 << n)
        for idx in range(1 << n):
            if (idx >> (n - 1 - i)) & 1 and (idx >> (n - 2 - i)) & 1:
                diag[idx] = -1
        psi = diag * psi
    return psi


def test_two_qubit_amplitudes():
    np.testing.assert_allclose(linear_cluster(2).amplitudes, np.array([1, 1, 1, -1]) / 2)


def test_single_plus():
    np.testing.assert_allclose(linear_cluster(1).amplitudes, np.array([1, 1]) / np.sqrt(2))


def test_three_qubit_expansion():
    expected = sum(np.kron(np.kron(H @ KET[b], KET[b]), H @ KET[b]) for b in (0, 1)) / np.sqrt(2)
    np.testing.assert_allclose(linear_cluster(3).amplitudes, expected, atol=1e-15)


@pytest.mark.parametrize("n", range(1, 11))
def test_matches_cz_product_and_normalized(n):
    psi = linear_cluster(n).amplitudes
    assert np.linalg.norm(psi) ** 2 == pytest.approx(1.0, abs=1e-12)
    if n <= 8:
        np.testing.assert_allclose(psi, cz_chain_oracle(n), atol=1e-14)


@pytest.mark.parametrize("n", [0, 11])
def test_length_out_of_range(n):
    with pytest.raises(ValueError):
        linear_cluster(n)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_interior_marginals_maximally_mixed(n):
    rho = DensityMatrix.from_pure(linear_cluster(n))
    for k in range(2, n):
        red = partial_trace(rho, [j for j in range(1, n + 1) if j != k])
        np.testing.assert_allclose(red.data, np.eye(2) / 2, atol=1e-12)


def test_fresh_primitive():
    counter = LabelCounter()
    a, b = fresh_primitive(counter), fresh_primitive(counter)
    assert len(a) == 2 and set(a.labels).isdisjoint(b.labels)
    assert fidelity_pure(a.state, linear_cluster(2)) == pytest.approx(1.0)
    assert purity(a.state) == pytest.approx(1.0)
    assert min_pt_eigenvalue(a.state, [1]) == pytest.approx(-0.5)


def test_labels_monotonic():
    counter = LabelCounter(5)
    assert counter.take(3) == [5, 6, 7]
    assert counter() == 8


def test_chain_invariants():
    with pytest.raises(ValueError):
        ClusterChain((1, 1), DensityMatrix.maximally_mixed(2))
    with pytest.raises(ValueError):
        ClusterChain((1, 2, 3), DensityMatrix.maximally_mixed(2))


def test_reversal_is_chain_symmetry():
    chain = ClusterChain((4, 5, 6), DensityMatrix.from_pure(linear_cluster(3)))
    rev = chain.reversed()
    assert rev.labels == (6, 5, 4)
    np.testing.assert_allclose(rev.state.data, chain.state.data, atol=1e-15)
