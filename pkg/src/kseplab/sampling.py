"""Random pure states: Haar sampling, block-product ensembles, eigenbasis baseline.

A block-product ("K-separable") state on N sites is a tensor product of K
independent pure states, one per contiguous block of n_B = N/K sites.  Block j
owns sites [j*n_B, (j+1)*n_B) and is drawn from its own random stream, so any
sample can be regenerated in isolation: sampling is reproducible no matter how
samples are spread over workers.

Normal variates come from the classic pairwise Box-Muller transform applied to
the stream's uniform doubles; a Haar state is an i.i.d. complex Gaussian vector
scaled to unit norm, which is exactly uniform on the unit sphere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .linalg import STATE_NORM_TOL, check_hermitian, hermitian_eigensystem, normalize
from .streams import RngStream, StreamBank, derive_stream, mix64


@dataclass(frozen=True)
class Partition:
    """Block structure of an N-site system: K equal blocks of n_B = N/K sites."""

    n_sites: int
    n_blocks: int
    local_dim: int = 2

    def __post_init__(self):
        if self.n_sites < 1 or self.n_blocks < 1:
            raise ValidationError("site and block counts must be positive")
        if self.local_dim < 2:
            raise ValidationError("local dimension must be at least 2")
        if self.n_sites % self.n_blocks != 0:
            raise ValidationError(
                f"block count {self.n_blocks} does not divide {self.n_sites} sites"
            )

    @property
    def sites_per_block(self) -> int:
        return self.n_sites // self.n_blocks

    @property
    def block_dim(self) -> int:
        return self.local_dim**self.sites_per_block


@dataclass(frozen=True)
class KSeparableState:
    """Pure state stored as one normalized vector per block."""

    partition: Partition
    blocks: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.blocks) != self.partition.n_blocks:
            raise ValidationError(
                f"expected {self.partition.n_blocks} blocks, got {len(self.blocks)}"
            )
        dim = self.partition.block_dim
        for j, block in enumerate(self.blocks):
            if block.shape != (dim,):
                raise ValidationError(f"block {j} has shape {block.shape}, expected ({dim},)")
            norm_sq = float(np.sum(block.real**2 + block.imag**2))
            if abs(norm_sq - 1.0) > STATE_NORM_TOL:
                raise ValidationError(f"block {j} is not normalized: |psi|^2 = {norm_sq!r}")


def _normals_from_uniforms(u: np.ndarray) -> np.ndarray:
    """Box-Muller on pairs (u[2k], u[2k+1]) -> (z[2k], z[2k+1]); len(u) even.

    Works on the last axis, so a batch of rows transforms exactly like each
    row alone.
    """
    r = np.sqrt(-2.0 * np.log1p(-u[..., 0::2]))
    theta = (2.0 * np.pi) * u[..., 1::2]
    z = np.empty_like(u)
    z[..., 0::2] = r * np.cos(theta)
    z[..., 1::2] = r * np.sin(theta)
    return z


def standard_normals(stream: RngStream, count: int) -> np.ndarray:
    """``count`` standard normal variates from the stream (count rounded up to even)."""
    gen = stream.generator()
    n = count + (count % 2)
    return _normals_from_uniforms(gen.random(n))[:count]


def gaussian_pair(stream: RngStream) -> tuple[float, float]:
    """First two standard normals of the stream."""
    z = standard_normals(stream, 2)
    return float(z[0]), float(z[1])


def _complex_rows(normals: np.ndarray) -> np.ndarray:
    """Interpret consecutive (real, imag) float pairs as complex amplitudes."""
    return normals[..., 0::2] + 1j * normals[..., 1::2]


def haar_state(dim: int, stream: RngStream) -> np.ndarray:
    """Haar-uniform pure state on the unit sphere of C^dim.

    Amplitudes are i.i.d. standard complex Gaussians, then the vector is
    normalized.  An all-zero draw (probability zero) is resampled once from
    the same stream before giving up.
    """
    if dim < 1:
        raise ValidationError("dimension must be at least 1")
    gen = stream.generator()
    for _ in range(2):
        z = _complex_rows(_normals_from_uniforms(gen.random(2 * dim)))
        if np.any(z):
            return normalize(z)
    raise ValidationError("degenerate sample: Gaussian draw was zero twice")


def k_separable_state(
    partition: Partition, sample_index: int, master_seed: int
) -> KSeparableState:
    """Block-product state with Haar-random blocks.

    Block j is drawn from the stream ``(master_seed, mix64(sample_index, j))``,
    so blocks are statistically independent and each (sample, block) pair is
    reproducible in isolation.
    """
    blocks = tuple(
        haar_state(partition.block_dim, derive_stream(master_seed, sample_index, j))
        for j in range(partition.n_blocks)
    )
    return KSeparableState(partition, blocks)


def sample_block_matrix(
    partition: Partition, sample_index: int, master_seed: int, bank: StreamBank
) -> np.ndarray:
    """All K Haar blocks of one sample as a (K, block_dim) array.

    Fast path for ensemble loops: row j is bit-identical to the corresponding
    block of ``k_separable_state`` but the uniform draws go through a reusable
    stream bank and the Box-Muller transform and normalization are applied to
    the whole batch at once.
    """
    k = partition.n_blocks
    dim = partition.block_dim
    u = np.empty((k, 2 * dim))
    for j in range(k):
        gen = bank.generator_for(master_seed, mix64(sample_index, j))
        u[j] = gen.random(2 * dim)
    z = _complex_rows(_normals_from_uniforms(u))
    norm_sq = np.sum(z.real**2 + z.imag**2, axis=1)
    if not np.all(norm_sq > 0.0):
        # vanishing rows are a probability-zero event; redo them one at a time
        for j in np.nonzero(norm_sq == 0.0)[0]:
            z[j] = haar_state(dim, derive_stream(master_seed, sample_index, int(j)))
            norm_sq[j] = 1.0
    return z / np.sqrt(norm_sq)[:, None]


def eigenbasis_product_state(
    partition: Partition, sigma: np.ndarray, stream: RngStream
) -> KSeparableState:
    """Product of uniformly chosen eigenvectors of sigma, one per site.

    Requires the fully separable partition (K = N).  Each site independently
    picks one of the d eigenvectors returned by the Hermitian eigensolver, so
    the product is an eigenvector of the extensive sum of sigma over sites.
    For degenerate sigma the choice is uniform over the returned orthonormal
    eigenbasis.
    """
    if partition.n_blocks != partition.n_sites:
        raise ValidationError("eigenbasis sampling requires the fully separable partition")
    sigma = check_hermitian(sigma)
    if sigma.shape[0] != partition.local_dim:
        raise ValidationError(
            f"observable dimension {sigma.shape[0]} != local dimension {partition.local_dim}"
        )
    _, eigvecs = hermitian_eigensystem(sigma)
    choices = stream.generator().integers(0, partition.local_dim, size=partition.n_sites)
    blocks = tuple(np.ascontiguousarray(eigvecs[:, c]) for c in choices)
    return KSeparableState(partition, blocks)


def eigenbasis_block_matrix(
    partition: Partition,
    eigvecs: np.ndarray,
    sample_index: int,
    master_seed: int,
    bank: StreamBank,
) -> np.ndarray:
    """Batched form of ``eigenbasis_product_state`` blocks as an (N, d) array.

    ``eigvecs`` must be the eigenvector matrix of the observable as returned
    by the Hermitian eigensolver; one stream per sample (block index N).
    """
    gen = bank.generator_for(master_seed, mix64(sample_index, partition.n_sites))
    choices = gen.integers(0, partition.local_dim, size=partition.n_sites)
    return eigvecs.T[choices]
