import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterfuse import closed_forms as cf
from clusterfuse.cluster_states import ClusterChain, fresh_primitive, linear_cluster
from clusterfuse.densmat import DensityMatrix, apply_local_kraus, fidelity_pure, min_pt_eigenvalue
from clusterfuse.noise import (
    compose_strengths,
    dephase_all,
    dephase_state,
    dephasing_kraus,
    time_to_strength,
)

from conftest import random_density


def damping_oracle(rho, p):
    """Entry (i, j) scales by sqrt(1-p)^popcount(i xor j)."""
    idx = np.arange(rho.dim)
    ham = np.vectorize(lambda x: bin(x).count("1"))(idx[:, None] ^ idx[None, :])
    return rho.data * np.sqrt(1 - p) ** ham


def product_kraus_oracle(rho, p):
    """All 2^q product operators A_l applied directly."""
    ks = dephasing_kraus(p)
    q = rho.qubits
    out = np.zeros_like(rho.data)
    for choice in range(1 << q):
        a = np.ones((1, 1))
        for k in range(q):
            a = np.kron(a, ks[(choice >> (q - 1 - k)) & 1])
        out += a @ rho.data @ a.conj().T
    return out


class TestKrausSet:
    def test_zero(self):
        k1, k2 = dephasing_kraus(0)
        np.testing.assert_array_equal(k1, np.eye(2))
        np.testing.assert_array_equal(k2, np.zeros((2, 2)))

    def test_one(self):
        k1, k2 = dephasing_kraus(1)
        np.testing.assert_array_equal(k1, np.diag([1, 0]))
        np.testing.assert_array_equal(k2, np.diag([0, 1]))

    def test_completeness(self):
        k1, k2 = dephasing_kraus(0.37)
        np.testing.assert_allclose(k1.conj().T @ k1 + k2.conj().T @ k2, np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("p", [-0.1, 1.1, float("nan")])
    def test_out_of_range(self, p):
        with pytest.raises(ValueError):
            dephasing_kraus(p)


class TestDephaseAll:
    def test_zero_is_identity(self):
        chain = fresh_primitive()
        np.testing.assert_array_equal(dephase_all(chain, 0).state.data, chain.state.data)

    @pytest.mark.parametrize("p", [0.0, 0.1, 0.35, 0.7, 1.0])
    def test_primitive_fidelity(self, p):
        chain = dephase_all(fresh_primitive(), p)
        assert fidelity_pure(chain.state, linear_cluster(2)) == pytest.approx(cf.rho2_fidelity(p), abs=1e-12)

    @pytest.mark.parametrize("p", [0.1 * k for k in range(9)])
    def test_primitive_negativity(self, p):
        chain = dephase_all(fresh_primitive(), p)
        expected = (-2 * math.sqrt(1 - p) + p) / 4
        assert expected < 0
        assert min_pt_eigenvalue(chain.state, [2]) == pytest.approx(expected, abs=1e-12)

    def test_labels_unchanged(self):
        chain = fresh_primitive()
        assert dephase_all(chain, 0.4).labels == chain.labels

    def test_matches_product_kraus_and_damping(self, rng):
        rho = random_density(3, rng)
        out = dephase_state(rho, 0.3).data
        np.testing.assert_allclose(out, product_kraus_oracle(rho, 0.3), atol=1e-14)
        np.testing.assert_allclose(out, damping_oracle(rho, 0.3), atol=1e-14)
        np.testing.assert_allclose(np.diag(out), np.diag(rho.data), atol=1e-15)

    def test_qubit_order_irrelevant(self, rng):
        rho = random_density(3, rng)
        ks = dephasing_kraus(0.45)
        fwd, back = rho, rho
        for k in (1, 2, 3):
            fwd = apply_local_kraus(fwd, ks, k)
        for k in (3, 1, 2):
            back = apply_local_kraus(back, ks, k)
        np.testing.assert_allclose(fwd.data, back.data, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(p=st.floats(0, 1), p2=st.floats(0, 1), seed=st.integers(0, 2**31))
def test_composition_law(p, p2, seed):
    rho = random_density(3, np.random.default_rng(seed))
    chain = ClusterChain((1, 2, 3), rho)
    twice = dephase_all(dephase_all(chain, p), p2)
    once = dephase_all(chain, 1 - (1 - p) * (1 - p2))
    # coherence sqrt(1-p) amplifies the rounding of 1-p near p=1 to ~sqrt(eps)
    np.testing.assert_allclose(twice.state.data, once.state.data, atol=1e-7)
    assert compose_strengths(p, p2) == pytest.approx(1 - (1 - p) * (1 - p2))


class TestTimeToStrength:
    def test_zero_time(self):
        assert time_to_strength(3.0, 0.0) == 0.0

    def test_asymptote(self):
        assert time_to_strength(1.0, 1e6) == pytest.approx(1.0)
        assert time_to_strength(math.inf, 1.0) == 1.0

    def test_half(self):
        assert time_to_strength(1.0, math.log(2)) == pytest.approx(0.5, abs=1e-15)

    def test_negative(self):
        with pytest.raises(ValueError):
            time_to_strength(-1.0, 1.0)
        with pytest.raises(ValueError):
            time_to_strength(1.0, -1.0)
