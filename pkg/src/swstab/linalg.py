"""Dense kernels for small real matrices.

Everything here is a pure function on plain float64 numpy arrays.
Eigenvalues come from LAPACK's QR iteration and operator norms from the
SVD; at the dimensions this package targets (d of a few) robustness beats
speed everywhere.
"""

from __future__ import annotations

import numpy as np

# Spectral radii within this margin of 1 are classified "marginal" and are
# never certified as Schur stable.
SCHUR_MARGIN = 1e-9


def as_matrix(a) -> np.ndarray:
    """Validate and return a square, finite float64 matrix."""
    m = np.array(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def as_vector(x, dim: int | None = None) -> np.ndarray:
    """Validate and return a finite float64 vector, optionally of a fixed dim."""
    v = np.array(x, dtype=float).reshape(-1)
    if v.size < 1:
        raise ValueError("vector must have at least one entry")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected a vector of dim {dim}, got {v.size}")
    return v


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mat_mul(a, b) -> np.ndarray:
    """Matrix product A @ B for equal-dimension square matrices."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_shape(a, b)
    return a @ b


def mat_power(a, k: int) -> np.ndarray:
    """A**k by iterated left-multiplication; A**0 is the identity.

    Iterated multiplication (not repeated squaring) so the floating-point
    result matches a step-by-step simulation of the same product exactly.
    """
    a = as_matrix(a)
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise ValueError(f"exponent must be a nonnegative integer, got {k!r}")
    p = np.eye(a.shape[0])
    for _ in range(k):
        p = a @ p
    return p


def spectral_radius(a, tol: float = 1e-12) -> float:
    """Maximum eigenvalue modulus of A.

    `tol` is the requested relative accuracy; LAPACK's QR iteration
    converges to machine precision, well inside any sensible tol.
    """
    a = as_matrix(a)
    return float(np.max(np.abs(np.linalg.eigvals(a))))


def schur_class(a, tol: float = SCHUR_MARGIN) -> str:
    """Classify A as 'stable', 'marginal', or 'unstable' w.r.t. the unit disk."""
    r = spectral_radius(a)
    if r < 1.0 - tol:
        return "stable"
    if r <= 1.0 + tol:
        return "marginal"
    return "unstable"


def is_schur_stable(a, tol: float = SCHUR_MARGIN) -> bool:
    """True iff the spectral radius is below 1 with a strict margin.

    Marginal matrices (radius within tol of 1) are treated as not stable,
    so no certificate ever rests on rounding noise.
    """
    return schur_class(a, tol) == "stable"


def operator_norm(a) -> float:
    """Induced Euclidean (spectral) norm: the largest singular value."""
    a = as_matrix(a)
    return float(np.linalg.svd(a, compute_uv=False)[0])


def commutator(a, b) -> np.ndarray:
    """AB - BA."""
    a, b = as_matrix(a), as_matrix(b)
    _check_same_shape(a, b)
    return a @ b - b @ a
