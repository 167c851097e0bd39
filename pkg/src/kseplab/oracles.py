"""Independent verification routes for the sampling and expectation machinery.

Everything here goes the "dumb but obviously right" way: dense operator
matrices built with Kronecker products, full tensor-product state vectors,
LAPACK eigensolvers, and one-shot vectorized Monte Carlo with numpy's default
generator.  None of it shares code with the bit-sliced contraction engine, the
Jacobi eigensolver, the Philox stream machinery, or the closed-form variance
formulas it is used to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .sampling import KSeparableState, Partition

_MC_CHUNK = 20_000


def dense_site_embedding(sigma: np.ndarray, n_sites: int, site: int) -> np.ndarray:
    """sigma acting on one site of an n-site register, as a dense matrix."""
    d = sigma.shape[0]
    out = np.eye(d**site, dtype=complex)
    out = np.kron(out, sigma)
    out = np.kron(out, np.eye(d ** (n_sites - site - 1), dtype=complex))
    return out


def dense_extensive_matrix(sigma: np.ndarray, n_sites: int) -> np.ndarray:
    """Full matrix of the site-wise sum of sigma over n sites."""
    d = sigma.shape[0]
    dim = d**n_sites
    total = np.zeros((dim, dim), dtype=complex)
    for site in range(n_sites):
        total += dense_site_embedding(sigma, n_sites, site)
    return total


def full_state_vector(state: KSeparableState) -> np.ndarray:
    """Tensor product of all blocks as one dense vector."""
    psi = np.ones(1, dtype=complex)
    for block in state.blocks:
        psi = np.kron(psi, block)
    return psi


def dense_expectation(state: KSeparableState, matrix: np.ndarray) -> float:
    """<Psi| M |Psi> computed on the full tensor-product vector."""
    psi = full_state_vector(state)
    return float(np.vdot(psi, matrix @ psi).real)


@dataclass(frozen=True)
class McEstimate:
    """Monte Carlo estimate of the ensemble mean and variance of <A_N>."""

    n_samples: int
    mean: float
    variance: float
    variance_stderr: float
    mean_stderr: float


def mc_haar_ensemble_variance(
    partition: Partition, sigma: np.ndarray, n_samples: int, seed: int
) -> McEstimate:
    """Brute-force ensemble variance of <A_N> over independent Haar blocks.

    Draws all blocks with numpy's default generator, applies the dense
    within-block operator via matrix multiplication, and takes plain sample
    statistics over the resulting expectation values.
    """
    if n_samples < 2:
        raise ValidationError("need at least two samples")
    n_b = partition.sites_per_block
    block_op = dense_extensive_matrix(np.asarray(sigma, dtype=complex), n_b)
    rng = np.random.default_rng(seed)
    values = np.empty(n_samples)
    dim = partition.block_dim
    for start in range(0, n_samples, _MC_CHUNK):
        count = min(_MC_CHUNK, n_samples - start)
        total = np.zeros(count)
        for _ in range(partition.n_blocks):
            z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            total += np.einsum("sd,sd->s", z.conj(), z @ block_op.T).real
        values[start : start + count] = total
    return _sample_moments(values)


def _sample_moments(values: np.ndarray) -> McEstimate:
    m = values.size
    mean = float(np.mean(values))
    centered = values - mean
    variance = float(np.sum(centered**2) / (m - 1))
    m4 = float(np.mean(centered**4))
    var_of_var = max(m4 - variance**2 * (m - 3) / (m - 1), 0.0) / m
    return McEstimate(
        n_samples=m,
        mean=mean,
        variance=variance,
        variance_stderr=math.sqrt(var_of_var),
        mean_stderr=math.sqrt(variance / m),
    )


def mc_mean_sq_trace_distance(
    sites_per_block: int, local_dim: int, n_samples: int, seed: int
) -> float:
    """Mean squared trace-norm distance between single-site reductions of a
    Haar block and the maximally mixed state, pooled over sites.

    Used to spot-check the inequality  E ||rho_site - I/d||_1^2 <= d^2/(4 d_B)
    that feeds the block variance bound.
    """
    d = local_dim
    dim = d**sites_per_block
    rng = np.random.default_rng(seed)
    omega = np.eye(d) / d
    total = 0.0
    for _ in range(n_samples):
        z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        z /= np.linalg.norm(z)
        t = z.reshape([d] * sites_per_block)
        for site in range(sites_per_block):
            moved = np.moveaxis(t, site, 0).reshape(d, -1)
            rho = moved @ moved.conj().T
            dist = np.sum(np.abs(np.linalg.eigvalsh(rho - omega)))
            total += dist**2
    return total / (n_samples * sites_per_block)
