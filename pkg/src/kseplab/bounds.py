"""Analytic variance bounds and exact ensemble-variance formulas.

All functions are plain arithmetic on scalars except the two ``exact_*``
routines, which evaluate the ensemble variance of the extensive observable in
closed form: over Haar-random blocks using first and second spherical moments,
and over the uniform-eigenvector product ensemble using elementary
combinatorics.  The Haar closed form is validated against brute-force Monte
Carlo by the selftest before anything else relies on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .observables import LocalObservable
from .sampling import Partition


def canonical_typicality_bound(
    d_s: int, *, purity_b: float | None = None, d_r: int | None = None
) -> float:
    """Bound on the mean trace-norm distance between a reduced state and its average.

    Two equivalent entry points: (1/2)*sqrt(d_s * purity_b) when the purity of
    the averaged environment state is known, else (1/2)*sqrt(d_s^2 / d_r) from
    the dimension of the sampled space.
    """
    if d_s < 2:
        raise ValidationError("subsystem dimension must be at least 2")
    if (purity_b is None) == (d_r is None):
        raise ValidationError("give exactly one of purity_b or d_r")
    if purity_b is not None:
        if not 0.0 < purity_b <= 1.0:
            raise ValidationError("purity must lie in (0, 1]")
        return 0.5 * math.sqrt(d_s * purity_b)
    if d_r < 1:
        raise ValidationError("sampled-space dimension must be positive")
    return 0.5 * math.sqrt(d_s**2 / d_r)


def observable_variance_bound(op_norm: float, purity_total: float) -> float:
    """Generic bound 4*||A||^2*Tr[Omega^2] on the ensemble variance of <A>."""
    if op_norm < 0:
        raise ValidationError("operator norm must be non-negative")
    if not 0.0 < purity_total <= 1.0:
        raise ValidationError("purity must lie in (0, 1]")
    return 4.0 * op_norm**2 * purity_total


def block_variance_bound(n_sites: int, sigma_norm: float, local_dim: int, sites_per_block: int) -> float:
    """Variance bound (N/4)*||sigma||^2*d^2/d^{n_B} for block-product ensembles.

    Decreases exponentially in the block size and linearly in N; the key
    quantitative link between block structure and fluctuation suppression.
    """
    if n_sites < 1 or sites_per_block < 1:
        raise ValidationError("site counts must be positive")
    if local_dim < 2:
        raise ValidationError("local dimension must be at least 2")
    if sigma_norm < 0:
        raise ValidationError("operator norm must be non-negative")
    return 0.25 * n_sites * sigma_norm**2 * local_dim**2 / local_dim**sites_per_block


def qubit_variance_bound(n_sites: int, n_blocks: int) -> float:
    """Specialized bound N / 2^{N/K} for qubits with a unit-norm site observable."""
    _check_divisible(n_sites, n_blocks)
    return n_sites / 2.0 ** (n_sites // n_blocks)


def density_variance_bound(n_sites: int, n_blocks: int) -> float:
    """Bound on the variance of the density a = A/N: qubit bound divided by N^2."""
    return qubit_variance_bound(n_sites, n_blocks) / n_sites**2


def _check_divisible(n_sites: int, n_blocks: int) -> None:
    if n_sites < 1 or n_blocks < 1:
        raise ValidationError("site and block counts must be positive")
    if n_sites % n_blocks != 0:
        raise ValidationError(f"block count {n_blocks} does not divide {n_sites}")


def exact_haar_ensemble_variance(partition: Partition, sigma: LocalObservable) -> float:
    """Exact ensemble variance of <A_N> over independent Haar blocks.

    For a Haar state of dimension D, E<O> = Tr O / D and
    E[<O><P>] = (Tr(OP) + Tr O * Tr P) / (D (D+1)).  With O_l the site
    observable embedded in its block (identity on the other sites):

        Tr O_l      = Tr sigma   * d^{n_B-1}
        Tr O_l^2    = Tr sigma^2 * d^{n_B-1}
        Tr(O_l O_m) = (Tr sigma)^2 * d^{n_B-2}   (l != m, same block)

    Blocks are independent, so cross-block covariances vanish and the total is
    K times the within-block sum of variances and pair covariances.
    """
    if sigma.dim != partition.local_dim:
        raise ValidationError("observable dimension does not match partition")
    d = partition.local_dim
    n_b = partition.sites_per_block
    big_d = partition.block_dim
    tr_o = sigma.trace * d ** (n_b - 1)
    tr_o_sq = sigma.trace_sq * d ** (n_b - 1)
    second = 1.0 / (big_d * (big_d + 1.0))
    mean_sq = (tr_o / big_d) ** 2
    var_site = (tr_o_sq + tr_o**2) * second - mean_sq
    block_total = n_b * var_site
    if n_b > 1:
        tr_pair = sigma.trace**2 * d ** (n_b - 2)
        cov_pair = (tr_pair + tr_o**2) * second - mean_sq
        block_total += n_b * (n_b - 1) * cov_pair
    return partition.n_blocks * block_total


def exact_eigenbasis_ensemble_variance(partition: Partition, sigma: LocalObservable) -> float:
    """Exact variance of <A_N> when every site is a uniformly chosen eigenvector.

    Each site contributes an independent eigenvalue drawn uniformly from the
    spectrum of sigma: per-site variance Tr(sigma^2)/d - (Tr(sigma)/d)^2,
    times N in total.
    """
    if partition.n_blocks != partition.n_sites:
        raise ValidationError("eigenbasis ensemble requires the fully separable partition")
    if sigma.dim != partition.local_dim:
        raise ValidationError("observable dimension does not match partition")
    d = partition.local_dim
    per_site = sigma.trace_sq / d - (sigma.trace / d) ** 2
    return partition.n_sites * per_site


@dataclass(frozen=True)
class BoundReport:
    """Analytic bounds next to the exact ensemble variance for one configuration."""

    partition: Partition
    sigma_label: str
    block_bound: float
    qubit_bound: float
    density_bound: float
    exact_variance: float
    exact_density_variance: float


def build_bound_report(partition: Partition, sigma: LocalObservable) -> BoundReport:
    n = partition.n_sites
    exact = exact_haar_ensemble_variance(partition, sigma)
    block_bound = block_variance_bound(
        n, sigma.op_norm, partition.local_dim, partition.sites_per_block
    )
    qubit = (
        qubit_variance_bound(n, partition.n_blocks)
        if partition.local_dim == 2
        else float("nan")
    )
    return BoundReport(
        partition=partition,
        sigma_label=sigma.label,
        block_bound=block_bound,
        qubit_bound=qubit,
        density_bound=block_bound / n**2,
        exact_variance=exact,
        exact_density_variance=exact / n**2,
    )
