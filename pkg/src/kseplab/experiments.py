"""Monte Carlo ensemble runs, the two scaling sweeps, and verification experiments.

Samples are evaluated in fixed chunks of ``CHUNK_SIZE`` and the per-chunk
statistics are merged in chunk order, so results are bit-identical no matter
how many workers process the chunks.  Each (sample, block) pair draws from its
own random stream; nothing depends on scheduling.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass

import numpy as np

from . import bounds
from .errors import ValidationError
from .linalg import hermitian_eigensystem, partial_trace_single_site, trace_norm
from .observables import LocalObservable, block_expectation_sum, preset_observable
from .sampling import Partition, eigenbasis_block_matrix, sample_block_matrix
from .stats import SampleStats
from .streams import StreamBank

CHUNK_SIZE = 128

SAMPLER_MODES = ("haar", "eigenvec")


@dataclass(frozen=True)
class ExperimentConfig:
    """Resolved settings for one sweep or verification run."""

    mode: str  # "fixed-k" | "fixed-nb" | "eigenvec" | "typicality"
    n_values: tuple[int, ...]
    n_blocks: int | None = None
    sites_per_block: int | None = None
    local_dim: int = 2
    sigma: LocalObservable | None = None
    n_samples: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if self.mode not in ("fixed-k", "fixed-nb", "eigenvec", "typicality"):
            raise ValidationError(f"unknown mode {self.mode!r}")
        if not self.n_values:
            raise ValidationError("need at least one system size")
        if self.n_samples < 2:
            raise ValidationError("need at least two samples")
        if self.sigma is None:
            object.__setattr__(self, "sigma", preset_observable("pauli-z"))
        if self.mode == "fixed-k":
            if self.n_blocks is None:
                raise ValidationError("fixed-k mode needs a block count k")
            bad = [n for n in self.n_values if n % self.n_blocks != 0]
            if bad:
                raise ValidationError(f"system sizes not divisible by k={self.n_blocks}: {bad}")
        if self.mode == "fixed-nb":
            if self.sites_per_block is None:
                raise ValidationError("fixed-nb mode needs a block size nb")
            bad = [n for n in self.n_values if n % self.sites_per_block != 0]
            if bad:
                raise ValidationError(
                    f"system sizes not divisible by nb={self.sites_per_block}: {bad}"
                )


@dataclass(frozen=True)
class SweepRow:
    """One (N, K) point of a sweep: empirical statistics next to the references."""

    n_sites: int
    n_blocks: int
    sites_per_block: int
    n_samples: int
    mean_a: float
    var_a: float
    var_a_stderr: float
    density_bound: float
    exact_density_variance: float
    seed: int


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class FixedBlockSweep:
    rows: list
    fit: SlopeFit


@dataclass(frozen=True)
class TypicalityReport:
    n_qubits: int
    n_samples: int
    empirical_mean: float
    bound: float
    seed: int

    @property
    def passed(self) -> bool:
        return self.empirical_mean <= self.bound


def _chunk_stats(
    partition: Partition,
    sigma: LocalObservable,
    mode: str,
    master_seed: int,
    start: int,
    stop: int,
) -> SampleStats:
    """Statistics of a = <A_N>/N over samples [start, stop)."""
    bank = StreamBank()
    stats = SampleStats()
    n = partition.n_sites
    if mode == "eigenvec":
        _, eigvecs = hermitian_eigensystem(sigma.matrix)
        for i in range(start, stop):
            blocks = eigenbasis_block_matrix(partition, eigvecs, i, master_seed, bank)
            stats.update(block_expectation_sum(blocks, partition, sigma) / n)
    else:
        for i in range(start, stop):
            blocks = sample_block_matrix(partition, i, master_seed, bank)
            stats.update(block_expectation_sum(blocks, partition, sigma) / n)
    return stats


def run_ensemble(
    partition: Partition,
    sigma: LocalObservable,
    n_samples: int,
    master_seed: int,
    mode: str = "haar",
    workers: int = 1,
) -> SampleStats:
    """Sample the ensemble and stream statistics of a = <A_N>/N.

    ``mode`` selects Haar block-product states or the eigenvector-product
    baseline.  Chunks of CHUNK_SIZE samples are evaluated independently
    (possibly by a process pool) and merged in chunk order; the result does
    not depend on ``workers``.
    """
    if mode not in SAMPLER_MODES:
        raise ValidationError(f"unknown sampler mode {mode!r}")
    if n_samples < 2:
        raise ValidationError("need at least two samples")
    if mode == "eigenvec" and partition.n_blocks != partition.n_sites:
        raise ValidationError("eigenvec mode requires the fully separable partition")
    spans = [
        (start, min(start + CHUNK_SIZE, n_samples))
        for start in range(0, n_samples, CHUNK_SIZE)
    ]
    if workers > 1 and len(spans) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(
                pool.map(
                    _chunk_stats_args,
                    [(partition, sigma, mode, master_seed, a, b) for a, b in spans],
                )
            )
    else:
        chunks = [
            _chunk_stats(partition, sigma, mode, master_seed, a, b) for a, b in spans
        ]
    total = SampleStats()
    for chunk in chunks:
        total = total.merge(chunk)
    return total


def _chunk_stats_args(args) -> SampleStats:
    return _chunk_stats(*args)


def _sweep_row(
    partition: Partition,
    sigma: LocalObservable,
    n_samples: int,
    master_seed: int,
    mode: str,
    workers: int,
) -> SweepRow:
    stats = run_ensemble(partition, sigma, n_samples, master_seed, mode, workers)
    n = partition.n_sites
    bound = bounds.block_variance_bound(
        n, sigma.op_norm, partition.local_dim, partition.sites_per_block
    )
    if mode == "eigenvec":
        exact = bounds.exact_eigenbasis_ensemble_variance(partition, sigma)
    else:
        exact = bounds.exact_haar_ensemble_variance(partition, sigma)
    return SweepRow(
        n_sites=n,
        n_blocks=partition.n_blocks,
        sites_per_block=partition.sites_per_block,
        n_samples=n_samples,
        mean_a=stats.mean,
        var_a=stats.variance,
        var_a_stderr=stats.variance_stderr,
        density_bound=bound / n**2,
        exact_density_variance=exact / n**2,
        seed=master_seed,
    )


def sweep_fixed_k(config: ExperimentConfig, workers: int = 1) -> list:
    """One row per system size at a fixed block count (growing blocks)."""
    if config.mode != "fixed-k":
        raise ValidationError(f"config mode is {config.mode!r}, expected 'fixed-k'")
    return [
        _sweep_row(
            Partition(n, config.n_blocks, config.local_dim),
            config.sigma,
            config.n_samples,
            config.master_seed,
            "haar",
            workers,
        )
        for n in config.n_values
    ]


def sweep_fixed_nb(config: ExperimentConfig, workers: int = 1) -> FixedBlockSweep:
    """One row per system size at a fixed block size, plus the log-log slope."""
    if config.mode != "fixed-nb":
        raise ValidationError(f"config mode is {config.mode!r}, expected 'fixed-nb'")
    rows = [
        _sweep_row(
            Partition(n, n // config.sites_per_block, config.local_dim),
            config.sigma,
            config.n_samples,
            config.master_seed,
            "haar",
            workers,
        )
        for n in config.n_values
    ]
    fit = fit_loglog_slope([(row.n_sites, row.var_a) for row in rows])
    return FixedBlockSweep(rows=rows, fit=fit)


def sweep_eigenvec_baseline(config: ExperimentConfig, workers: int = 1) -> FixedBlockSweep:
    """Eigenvector-product baseline over the same system sizes, with slope fit."""
    if config.mode != "eigenvec":
        raise ValidationError(f"config mode is {config.mode!r}, expected 'eigenvec'")
    rows = [
        _sweep_row(
            Partition(n, n, config.local_dim),
            config.sigma,
            config.n_samples,
            config.master_seed,
            "eigenvec",
            workers,
        )
        for n in config.n_values
    ]
    fit = fit_loglog_slope([(row.n_sites, row.var_a) for row in rows])
    return FixedBlockSweep(rows=rows, fit=fit)


def fit_loglog_slope(points) -> SlopeFit:
    """Ordinary least squares on (ln N, ln var) for a list of (N, var) pairs."""
    if len(points) < 3:
        raise ValidationError("need at least three points for a slope fit")
    for n, var in points:
        if n <= 0 or var <= 0.0:
            raise ValidationError(f"cannot take logs of non-positive point ({n}, {var})")
    x = np.log([float(n) for n, _ in points])
    y = np.log([float(v) for _, v in points])
    x_mean = x.mean()
    y_mean = y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    sxy = float(np.sum((x - x_mean) * (y - y_mean)))
    slope = sxy / sxx
    intercept = y_mean - slope * x_mean
    residuals = y - (intercept + slope * x)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y_mean) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return SlopeFit(slope=slope, intercept=intercept, r_squared=r_squared)


def verify_canonical_typicality(
    n_qubits: int, n_samples: int, master_seed: int
) -> TypicalityReport:
    """Mean trace-norm distance of single-qubit reductions of Haar states
    against the analytic bound (1/2)*sqrt(4/2^n)."""
    if not 2 <= n_qubits <= 16:
        raise ValidationError("qubit count must be between 2 and 16")
    if n_samples < 1:
        raise ValidationError("need at least one sample")
    partition = Partition(n_qubits, 1)
    bank = StreamBank()
    omega = np.eye(2) / 2
    total = 0.0
    for i in range(n_samples):
        psi = sample_block_matrix(partition, i, master_seed, bank)[0]
        for site in range(n_qubits):
            rho = partial_trace_single_site(psi, site, 2)
            total += trace_norm(rho - omega)
    empirical = total / (n_samples * n_qubits)
    bound = bounds.canonical_typicality_bound(2, d_r=2**n_qubits)
    return TypicalityReport(
        n_qubits=n_qubits,
        n_samples=n_samples,
        empirical_mean=empirical,
        bound=bound,
        seed=master_seed,
    )
