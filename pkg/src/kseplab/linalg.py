"""Complex linear algebra for small state vectors and density matrices.

Everything here works on plain numpy arrays: state vectors are 1-D complex
arrays, operators are square complex arrays.  The eigensolver is a cyclic
Jacobi iteration written out explicitly, so the package has no dependency on
LAPACK-backed routines for its own results (tests cross-check against them).

All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ValidationError

# Fixed tolerances; not configurable so that results are reproducible.
STATE_NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-8
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIGENVALUE_FLOOR = -1e-10
JACOBI_OFF_DIAGONAL_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100


def as_complex_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.size < 1:
        raise ValidationError("expected a 1-D vector with at least one entry")
    return v


def as_square_matrix(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    return m


def check_state_vector(psi, tol: float = STATE_NORM_TOL) -> np.ndarray:
    """Validate that ``psi`` is a unit-norm pure-state vector."""
    psi = as_complex_vector(psi)
    norm_sq = float(np.sum(psi.real**2 + psi.imag**2))
    if abs(norm_sq - 1.0) > tol:
        raise ValidationError(f"state vector not normalized: |psi|^2 = {norm_sq!r}")
    return psi


def check_hermitian(h, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity of ``h`` (max |H - H^dagger| element below ``tol``)."""
    h = as_square_matrix(h)
    dev = float(np.max(np.abs(h - h.conj().T)))
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    return h


def check_density_matrix(rho) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity of a density matrix."""
    rho = check_hermitian(rho, tol=1e-12)
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
    evals = hermitian_eigenvalues(rho)
    if evals[0] < DENSITY_EIGENVALUE_FLOOR:
        raise ValidationError(f"density matrix has negative eigenvalue {evals[0]:.3e}")
    return rho


def normalize(v) -> np.ndarray:
    """Return ``v`` scaled to unit Euclidean norm.

    Raises ValidationError("degenerate sample") for a zero vector.
    """
    v = as_complex_vector(v)
    norm = math.sqrt(float(np.sum(v.real**2 + v.imag**2)))
    if norm == 0.0:
        raise ValidationError("degenerate sample: cannot normalize a zero vector")
    return v / norm


def partial_trace_single_site(state, site: int, d: int = 2) -> np.ndarray:
    """Reduced density matrix of one site of a pure state.

    ``state`` is a vector of dimension ``d**n``; index convention: site 0 is
    the most significant base-``d`` digit of the amplitude index.  Returns the
    d x d matrix rho[a, b] = sum over all other-site digit combinations of
    psi(..a..) * conj(psi(..b..)).
    """
    state = as_complex_vector(state)
    if d < 2:
        raise ValidationError("local dimension must be at least 2")
    n = round(math.log(state.size, d))
    if d**n != state.size:
        raise ValidationError(f"state dimension {state.size} is not a power of d={d}")
    if not 0 <= site < n:
        raise IndexError(f"site {site} out of range for {n} sites")
    left = d**site
    right = d ** (n - site - 1)
    t = state.reshape(left, d, right)
    return np.einsum("iaj,ibj->ab", t, t.conj())


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] with a unitary plane rotation; updates a and v in place.

    The rotation is the real Jacobi rotation composed with the phase that makes
    a[p, q] real, so it handles complex Hermitian input.
    """
    apq = a[p, q]
    r = abs(apq)
    if r == 0.0:
        return
    phase = apq / r  # e^{i phi}
    app = a[p, p].real
    aqq = a[q, q].real
    tau = (aqq - app) / (2.0 * r)
    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    # Plane transform J: J[p,p]=c, J[p,q]=s, J[q,p]=-s*conj(phase), J[q,q]=c*conj(phase)
    jpp, jpq = c, s
    jqp, jqq = -s * np.conj(phase), c * np.conj(phase)

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = col_p * jpp + col_q * jqp
    a[:, q] = col_p * jpq + col_q * jqq
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = row_p * np.conj(jpp) + row_q * np.conj(jqp)
    a[q, :] = row_p * np.conj(jpq) + row_q * np.conj(jqq)
    # Clean the pivot pair so round-off cannot re-grow it this sweep.
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    col_p = v[:, p].copy()
    col_q = v[:, q].copy()
    v[:, p] = col_p * jpp + col_q * jqp
    v[:, q] = col_p * jpq + col_q * jqq


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Cyclic Jacobi: sweeps over all index pairs, rotating away each off-diagonal
    element, until every off-diagonal magnitude is below 1e-13 or 100 sweeps
    have run.  Returns ``(w, v)`` with eigenvector ``v[:, k]`` for ``w[k]``.
    """
    h = check_hermitian(h)
    n = h.shape[0]
    a = 0.5 * (h + h.conj().T)  # enforce exact Hermiticity before iterating
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        for _ in range(JACOBI_MAX_SWEEPS):
            off = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    mag = abs(a[p, q])
                    if mag > off:
                        off = mag
                    if mag >= JACOBI_OFF_DIAGONAL_TOL:
                        _jacobi_rotate(a, v, p, q)
            if off < JACOBI_OFF_DIAGONAL_TOL:
                break
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigenvalues(h) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix (cyclic Jacobi)."""
    w, _ = hermitian_eigensystem(h)
    return w


def trace_norm(h) -> float:
    """Trace norm of a Hermitian matrix: sum of absolute eigenvalues (unhalved)."""
    return float(np.sum(np.abs(hermitian_eigenvalues(h))))


def operator_norm(h) -> float:
    """Operator norm of a Hermitian matrix: largest absolute eigenvalue."""
    w = hermitian_eigenvalues(h)
    return float(max(abs(w[0]), abs(w[-1])))


def purity(rho) -> float:
    """Tr(rho^2) of a density matrix, computed as the squared Frobenius norm."""
    rho = as_square_matrix(rho)
    return float(np.sum(rho.real**2 + rho.imag**2))
