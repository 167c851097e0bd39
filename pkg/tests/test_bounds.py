import numpy as np
import pytest

from kseplab.bounds import (
    block_variance_bound,
    build_bound_report,
    canonical_typicality_bound,
    density_variance_bound,
    exact_eigenbasis_ensemble_variance,
    exact_haar_ensemble_variance,
    observable_variance_bound,
    qubit_variance_bound,
)
from kseplab.errors import ValidationError
from kseplab.observables import LocalObservable, preset_observable
from kseplab.oracles import mc_haar_ensemble_variance
from kseplab.sampling import Partition

PAULI_Z = preset_observable("pauli-z")
PAULI_X = preset_observable("pauli-x")
DIAG20 = LocalObservable.from_matrix([[2, 0], [0, 0]], label="diag20")
IDENTITY = LocalObservable.from_matrix(np.eye(2), label="identity")


class TestCanonicalTypicalityBound:
    def test_dimension_form(self):
        assert canonical_typicality_bound(2, d_r=1024) == pytest.approx(0.03125)

    def test_purity_form(self):
        assert canonical_typicality_bound(2, purity_b=1 / 512) == pytest.approx(0.03125)

    def test_exactly_one_input(self):
        with pytest.raises(ValidationError):
            canonical_typicality_bound(2)
        with pytest.raises(ValidationError):
            canonical_typicality_bound(2, purity_b=0.5, d_r=4)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValidationError):
            canonical_typicality_bound(1, d_r=4)
        with pytest.raises(ValidationError):
            canonical_typicality_bound(2, purity_b=0.0)
        with pytest.raises(ValidationError):
            canonical_typicality_bound(2, d_r=0)


class TestObservableVarianceBound:
    def test_arithmetic(self):
        assert observable_variance_bound(1.0, 1 / 16) == pytest.approx(0.25)

    def test_extensive_norm(self):
        assert observable_variance_bound(8.0, 2.0**-8) == pytest.approx(1.0)

    def test_dominates_exact_variance(self):
        # N=4, K=1 Pauli-z: exact 4/17, bound with ||A||=4, purity 2^-4
        exact = exact_haar_ensemble_variance(Partition(4, 1), PAULI_Z)
        assert exact == pytest.approx(4 / 17, rel=1e-12)
        assert exact <= observable_variance_bound(4.0, 2.0**-4)


class TestBlockVarianceBound:
    def test_single_site_blocks(self):
        assert block_variance_bound(8, 1.0, 2, 1) == pytest.approx(4.0)

    def test_whole_system_block(self):
        assert block_variance_bound(8, 1.0, 2, 8) == pytest.approx(0.03125)

    def test_dominates_exact(self):
        exact = exact_haar_ensemble_variance(Partition(8, 1), PAULI_Z)
        assert exact == pytest.approx(8 / 257, rel=1e-12)
        assert exact <= block_variance_bound(8, 1.0, 2, 8)

    def test_monotone_in_block_size_and_sites(self):
        values = [block_variance_bound(8, 1.0, 2, nb) for nb in (1, 2, 4, 8)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert block_variance_bound(16, 1.0, 2, 2) == pytest.approx(
            2 * block_variance_bound(8, 1.0, 2, 2)
        )


class TestQubitAndDensityBounds:
    @pytest.mark.parametrize(
        "n,k,expected", [(10, 10, 5.0), (10, 2, 0.3125), (10, 1, 10 / 1024)]
    )
    def test_qubit_bound(self, n, k, expected):
        assert qubit_variance_bound(n, k) == pytest.approx(expected)

    @pytest.mark.parametrize(
        "n,k,expected",
        [(10, 2, 1 / 320), (16, 16, 1 / 32), (16, 1, 1 / (16 * 65536))],
    )
    def test_density_bound(self, n, k, expected):
        assert density_variance_bound(n, k) == pytest.approx(expected, rel=1e-12)

    def test_density_is_qubit_over_n_squared_exactly(self):
        for n, k in [(6, 2), (12, 3), (16, 4)]:
            assert density_variance_bound(n, k) == qubit_variance_bound(n, k) / n**2

    def test_divisibility(self):
        with pytest.raises(ValidationError):
            qubit_variance_bound(10, 3)


class TestExactHaarVariance:
    def test_fully_separable_pauli(self):
        # per-site Var = 1/3, so N/3 in total
        assert exact_haar_ensemble_variance(Partition(6, 6), PAULI_Z) == pytest.approx(2.0)

    def test_single_block_pauli(self):
        assert exact_haar_ensemble_variance(Partition(6, 1), PAULI_Z) == pytest.approx(6 / 65)

    def test_identity_has_zero_variance(self):
        assert exact_haar_ensemble_variance(Partition(4, 2), IDENTITY) == pytest.approx(
            0.0, abs=1e-14
        )

    @pytest.mark.parametrize("sigma", [PAULI_Z, PAULI_X])
    def test_traceless_closed_form(self, sigma):
        # N/(2^{n_B}+1) for traceless, unit-norm qubit observables
        for n, k in [(4, 4), (4, 2), (4, 1), (6, 3), (8, 2)]:
            nb = n // k
            expected = n / (2**nb + 1)
            assert exact_haar_ensemble_variance(Partition(n, k), sigma) == pytest.approx(
                expected, rel=1e-12
            )

    def test_tightness_ratio(self):
        for nb in range(4, 13):
            partition = Partition(nb, 1)
            ratio = exact_haar_ensemble_variance(partition, PAULI_Z) / qubit_variance_bound(
                nb, 1
            )
            assert ratio == pytest.approx(2**nb / (2**nb + 1), rel=1e-12)
            assert ratio >= 0.94

    @pytest.mark.parametrize("sigma", [PAULI_Z, DIAG20])
    @pytest.mark.parametrize("partition", [Partition(4, 2), Partition(4, 1), Partition(3, 3)])
    def test_against_monte_carlo_smoke(self, partition, sigma):
        # full-strength validation runs in the acceptance gate; this is a quick screen
        est = mc_haar_ensemble_variance(partition, sigma.matrix, 20000, seed=5)
        exact = exact_haar_ensemble_variance(partition, sigma)
        assert abs(est.variance - exact) <= 4 * est.variance_stderr


class TestEigenbasisVariance:
    def test_pauli_gives_one_per_site(self):
        assert exact_eigenbasis_ensemble_variance(Partition(4, 4), PAULI_Z) == pytest.approx(4.0)

    def test_shifted_diagonal(self):
        # eigenvalues {2, 0}: per-site variance = 2 - 1 = 1
        assert exact_eigenbasis_ensemble_variance(Partition(3, 3), DIAG20) == pytest.approx(3.0)

    def test_requires_fully_separable(self):
        with pytest.raises(ValidationError):
            exact_eigenbasis_ensemble_variance(Partition(4, 2), PAULI_Z)


class TestBoundReport:
    def test_report_fields_consistent(self):
        report = build_bound_report(Partition(8, 2), PAULI_Z)
        assert report.exact_variance <= report.block_bound
        assert report.qubit_bound == pytest.approx(report.block_bound)
        assert report.density_bound == pytest.approx(report.block_bound / 64)
        assert report.exact_density_variance == pytest.approx(report.exact_variance / 64)

    def test_tightness_ordering_for_unit_norm_traceless(self):
        for n, k in [(4, 1), (8, 2), (12, 4)]:
            report = build_bound_report(Partition(n, k), PAULI_X)
            assert report.exact_variance <= report.block_bound
