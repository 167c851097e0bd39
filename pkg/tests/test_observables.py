import itertools
import math

import numpy as np
import pytest

from kseplab.errors import ValidationError
from kseplab.linalg import partial_trace_single_site
from kseplab.observables import (
    ExtensiveObservable,
    LocalObservable,
    block_expectation_sum,
    density_value,
    expectation_extensive,
    expectation_site,
    mean_over_average_state,
    preset_observable,
)
from kseplab.oracles import dense_expectation, dense_extensive_matrix, full_state_vector
from kseplab.sampling import KSeparableState, Partition, haar_state, k_separable_state
from kseplab.streams import RngStream

PAULI_Z = preset_observable("pauli-z")
PAULI_X = preset_observable("pauli-x")


class TestLocalObservable:
    def test_cached_spectral_data(self):
        obs = LocalObservable.from_matrix([[2, 0], [0, 0]], label="diag20")
        assert obs.is_diagonal
        assert obs.op_norm == pytest.approx(2.0, abs=1e-10)
        assert obs.trace == pytest.approx(2.0, abs=1e-10)
        assert obs.trace_sq == pytest.approx(4.0, abs=1e-10)

    def test_off_diagonal_detected(self):
        assert not PAULI_X.is_diagonal
        assert PAULI_X.op_norm == pytest.approx(1.0, abs=1e-10)

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            LocalObservable.from_matrix([[0, 1], [2, 0]])

    def test_unknown_preset(self):
        with pytest.raises(ValidationError):
            preset_observable("pauli-q")

    def test_extensive_spectrum_is_sumset(self):
        # brute force for N <= 3: eigenvalues of A_N = all sums of site eigenvalues
        sigma = LocalObservable.from_matrix([[0.3, 0.2 - 0.1j], [0.2 + 0.1j, -0.5]])
        site_evals = np.linalg.eigvalsh(sigma.matrix)
        for n in (1, 2, 3):
            dense = dense_extensive_matrix(sigma.matrix, n)
            expected = sorted(
                sum(combo) for combo in itertools.product(site_evals, repeat=n)
            )
            assert np.allclose(np.linalg.eigvalsh(dense), expected, atol=1e-10)


class TestExpectationSite:
    def test_eigenstate(self):
        assert expectation_site(np.array([1, 0], dtype=complex), 0, PAULI_Z) == 1.0

    def test_symmetric_superposition(self):
        plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
        assert abs(expectation_site(plus, 0, PAULI_Z)) < 1e-12

    @pytest.mark.parametrize("site", [0, 1, 2])
    def test_matches_partial_trace_oracle(self, site):
        block = haar_state(8, RngStream(21, site))
        for sigma in (PAULI_Z, PAULI_X):
            rho = partial_trace_single_site(block, site, 2)
            expected = float(np.trace(sigma.matrix @ rho).real)
            assert abs(expectation_site(block, site, sigma) - expected) < 1e-10

    def test_site_out_of_range(self):
        with pytest.raises(IndexError):
            expectation_site(np.array([1, 0], dtype=complex), 1, PAULI_Z)

    def test_diagonal_path_matches_generic(self):
        generic_z = LocalObservable(
            matrix=PAULI_Z.matrix,
            label="pauli-z-generic",
            is_diagonal=False,
            op_norm=PAULI_Z.op_norm,
            trace=PAULI_Z.trace,
            trace_sq=PAULI_Z.trace_sq,
        )
        for i in range(1000):
            block = haar_state(8, RngStream(33, i))
            site = i % 3
            fast = expectation_site(block, site, PAULI_Z)
            slow = expectation_site(block, site, generic_z)
            assert abs(fast - slow) < 1e-12


class TestExpectationExtensive:
    def test_all_spins_up(self):
        n = 6
        blocks = tuple(np.array([1, 0], dtype=complex) for _ in range(n))
        state = KSeparableState(Partition(n, n), blocks)
        value = expectation_extensive(state, ExtensiveObservable(PAULI_Z, n))
        assert value == pytest.approx(n, abs=1e-12)

    def test_up_down_cancels(self):
        blocks = (np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex))
        state = KSeparableState(Partition(2, 2), blocks)
        value = expectation_extensive(state, ExtensiveObservable(PAULI_Z, 2))
        assert abs(value) < 1e-12

    @pytest.mark.parametrize("sigma", [PAULI_Z, PAULI_X])
    def test_matches_dense_tensor_oracle(self, sigma):
        partition = Partition(4, 2)
        observable = ExtensiveObservable(sigma, 4)
        dense = dense_extensive_matrix(sigma.matrix, 4)
        for i in range(10):
            state = k_separable_state(partition, i, 101)
            fast = expectation_extensive(state, observable)
            assert abs(fast - dense_expectation(state, dense)) < 1e-9

    def test_partition_mismatch_rejected(self):
        state = k_separable_state(Partition(4, 2), 0, 0)
        with pytest.raises(ValidationError):
            expectation_extensive(state, ExtensiveObservable(PAULI_Z, 6))

    def test_fully_separable_equals_sum_of_single_sites(self):
        partition = Partition(5, 5)
        state = k_separable_state(partition, 3, 77)
        total = expectation_extensive(state, ExtensiveObservable(PAULI_Z, 5))
        per_site = sum(expectation_site(b, 0, PAULI_Z) for b in state.blocks)
        assert total == pytest.approx(per_site, abs=1e-12)

    def test_spectral_containment(self):
        partition = Partition(6, 3)
        observable = ExtensiveObservable(PAULI_X, 6)
        for i in range(50):
            state = k_separable_state(partition, i, 5)
            assert abs(expectation_extensive(state, observable)) <= 6 * PAULI_X.op_norm + 1e-9

    def test_batched_sum_matches_state_path(self):
        partition = Partition(6, 2)
        observable = ExtensiveObservable(PAULI_X, 6)
        for i in range(20):
            state = k_separable_state(partition, i, 9)
            batched = block_expectation_sum(np.stack(state.blocks), partition, PAULI_X)
            assert abs(batched - expectation_extensive(state, observable)) < 1e-10


class TestScalarHelpers:
    @pytest.mark.parametrize("value,n,expected", [(4, 4, 1.0), (0, 10, 0.0), (-3, 6, -0.5)])
    def test_density_value(self, value, n, expected):
        assert density_value(value, n) == expected

    def test_mean_over_average_state_traceless(self):
        assert mean_over_average_state(Partition(8, 2), PAULI_Z) == 0.0

    def test_mean_over_average_state_identity(self):
        identity = LocalObservable.from_matrix(np.eye(2), label="identity")
        assert mean_over_average_state(Partition(5, 5), identity) == pytest.approx(5.0)

    def test_mean_over_average_state_shifted(self):
        diag = LocalObservable.from_matrix([[2, 0], [0, 0]], label="diag20")
        assert mean_over_average_state(Partition(3, 3), diag) == pytest.approx(3.0)

    def test_empirical_mean_matches_average_state(self):
        partition = Partition(4, 2)
        diag = LocalObservable.from_matrix([[2, 0], [0, 0]], label="diag20")
        observable = ExtensiveObservable(diag, 4)
        m = 4000
        vals = np.array(
            [
                expectation_extensive(k_separable_state(partition, i, 19), observable)
                for i in range(m)
            ]
        )
        stderr = vals.std(ddof=1) / math.sqrt(m)
        assert abs(vals.mean() - mean_over_average_state(partition, diag)) < 4 * stderr


class TestOracleHelpers:
    def test_full_state_vector_is_normalized(self):
        state = k_separable_state(Partition(6, 3), 0, 1)
        psi = full_state_vector(state)
        assert psi.shape == (64,)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
