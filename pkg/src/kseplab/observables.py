"""Extensive observables: site-wise sums of one local Hermitian operator.

The observable is the same d x d operator at every site (default Pauli-z).
Expectation values against block-product states never materialize a
block_dim x block_dim matrix: a site's contribution is contracted directly
against the block vector, reshaped so the site's base-d digit is its own axis.
Cost is O(block_dim * d^2) per site, O(block_dim) on the diagonal fast path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError, ValidationError
from .linalg import check_hermitian, hermitian_eigenvalues
from .sampling import KSeparableState, Partition

IMAG_TOL = 1e-8


@dataclass(frozen=True)
class LocalObservable:
    """One-site Hermitian operator with cached spectral data."""

    matrix: np.ndarray
    label: str
    is_diagonal: bool
    op_norm: float
    trace: float
    trace_sq: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real

    @classmethod
    def from_matrix(cls, matrix, label: str = "custom") -> "LocalObservable":
        m = check_hermitian(np.asarray(matrix, dtype=np.complex128), tol=1e-12)
        m = m.copy()
        m.flags.writeable = False
        off = m - np.diag(m.diagonal())
        return cls(
            matrix=m,
            label=label,
            is_diagonal=not np.any(off),
            op_norm=float(np.max(np.abs(hermitian_eigenvalues(m)))),
            trace=float(np.trace(m).real),
            trace_sq=float(np.trace(m @ m).real),
        )


_PRESETS = {
    "pauli-z": [[1, 0], [0, -1]],
    "pauli-x": [[0, 1], [1, 0]],
}


def preset_observable(name: str) -> LocalObservable:
    """Named observable preset ("pauli-z" or "pauli-x")."""
    try:
        entries = _PRESETS[name]
    except KeyError:
        raise ValidationError(
            f"unknown observable preset {name!r}; available: {sorted(_PRESETS)}"
        ) from None
    return LocalObservable.from_matrix(entries, label=name)


@dataclass(frozen=True)
class ExtensiveObservable:
    """Sum of one local observable over every site of an N-site system."""

    site_observable: LocalObservable
    n_sites: int

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValidationError("site count must be positive")


def expectation_site(block: np.ndarray, site_in_block: int, sigma: LocalObservable) -> float:
    """<psi| sigma acting on one site |psi> for a block vector psi.

    Site 0 is the most significant base-d digit of the amplitude index.  The
    value is checked to be real (Hermitian observable) before the imaginary
    part is discarded.
    """
    d = sigma.dim
    dim = block.size
    n_b = _sites_in_block(dim, d)
    if not 0 <= site_in_block < n_b:
        raise IndexError(f"site {site_in_block} out of range for {n_b} sites")
    left = d**site_in_block
    right = d ** (n_b - site_in_block - 1)
    t = block.reshape(left, d, right)
    if sigma.is_diagonal:
        w = t.real**2 + t.imag**2
        return float(np.einsum("iaj,a->", w, sigma.diagonal))
    val = complex(np.einsum("iaj,ab,ibj->", t.conj(), sigma.matrix, t))
    if abs(val.imag) > IMAG_TOL:
        raise InternalConsistencyError(
            f"expectation of a Hermitian observable came out complex: {val!r}"
        )
    return val.real


def _sites_in_block(dim: int, d: int) -> int:
    n_b = 0
    size = 1
    while size < dim:
        size *= d
        n_b += 1
    if size != dim:
        raise ValidationError(f"block dimension {dim} is not a power of d={d}")
    return n_b


def block_expectation_sum(blocks: np.ndarray, partition: Partition, sigma: LocalObservable) -> float:
    """Total expectation of the extensive observable over stacked blocks.

    ``blocks`` has shape (n_blocks, block_dim); rows are the block vectors of
    one sample.  Equivalent to summing ``expectation_site`` over every block
    and site, but contracted batch-wise across blocks.
    """
    d = partition.local_dim
    n_b = partition.sites_per_block
    k, dim = blocks.shape
    total = 0.0
    if sigma.is_diagonal:
        w = blocks.real**2 + blocks.imag**2
        diag = sigma.diagonal
        for site in range(n_b):
            left = d**site
            right = d ** (n_b - site - 1)
            total += float(np.einsum("kiaj,a->", w.reshape(k, left, d, right), diag))
        return total
    conj = blocks.conj()
    acc = 0j
    for site in range(n_b):
        left = d**site
        right = d ** (n_b - site - 1)
        shape = (k, left, d, right)
        acc += np.einsum(
            "kiaj,ab,kibj->", conj.reshape(shape), sigma.matrix, blocks.reshape(shape)
        )
    val = complex(acc)
    if abs(val.imag) > IMAG_TOL:
        raise InternalConsistencyError(
            f"expectation of a Hermitian observable came out complex: {val!r}"
        )
    return val.real


def expectation_extensive(state: KSeparableState, observable: ExtensiveObservable) -> float:
    """<Psi| A |Psi> for a block-product state: sum of per-block, per-site terms."""
    partition = state.partition
    if observable.n_sites != partition.n_sites:
        raise ValidationError(
            f"observable spans {observable.n_sites} sites, state has {partition.n_sites}"
        )
    sigma = observable.site_observable
    if sigma.dim != partition.local_dim:
        raise ValidationError(
            f"observable dimension {sigma.dim} != local dimension {partition.local_dim}"
        )
    total = 0.0
    for block in state.blocks:
        for site in range(partition.sites_per_block):
            total += expectation_site(block, site, sigma)
    return total


def density_value(a_value: float, n_sites: int) -> float:
    """Intensive version of an extensive value: a = A / N."""
    if n_sites < 1:
        raise ValidationError("site count must be positive")
    return a_value / n_sites


def mean_over_average_state(partition: Partition, sigma: LocalObservable) -> float:
    """Exact ensemble mean of <A_N> when every block averages to maximally mixed.

    Each site then contributes Tr(sigma)/d, giving N * Tr(sigma)/d in total.
    """
    if sigma.dim != partition.local_dim:
        raise ValidationError("observable dimension does not match partition")
    return partition.n_sites * sigma.trace / partition.local_dim
