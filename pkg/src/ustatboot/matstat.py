"""Dense symmetric-matrix primitives.

Norms, half-vectorization (column-major over the lower triangle), Cholesky
factorization and a power-iteration spectral norm.  All functions are pure;
matrices are plain float64 numpy arrays.
"""

from __future__ import annotations

import warnings

import numpy as np

__all__ = [
    "NotPositiveDefiniteError",
    "SpectralNormError",
    "as_sym",
    "vech_index",
    "vech_pairs",
    "vech",
    "unvech",
    "sup_norm",
    "off_sup_norm",
    "spectral_norm",
    "frobenius_norm",
    "matrix_l1_norm",
    "cholesky",
]

ASYM_WARN_TOL = 1e-12


class NotPositiveDefiniteError(ValueError):
    """Cholesky hit a non-positive pivot."""

    def __init__(self, pivot: int, value: float):
        self.pivot = pivot
        self.value = value
        super().__init__(f"matrix not positive definite: pivot {pivot} = {value:g}")


class SpectralNormError(RuntimeError):
    """Power iteration failed to converge."""

    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"spectral norm did not converge in {iterations} iterations")


def as_sym(a: np.ndarray, warn_tol: float = ASYM_WARN_TOL) -> np.ndarray:
    """Validate and symmetrize a square matrix.

    Kernel sums drift at floating-point level, so asymmetry up to ``warn_tol``
    is silently averaged out; anything larger is averaged with a warning.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix dimension must be >= 1")
    asym = np.max(np.abs(a - a.T)) if a.size else 0.0
    if asym > warn_tol:
        warnings.warn(
            f"symmetrizing matrix with asymmetry {asym:g} > {warn_tol:g}",
            stacklevel=2,
        )
    return (a + a.T) / 2.0


def vech_index(j: int, k: int, p: int) -> int:
    """Linear position of entry (j, k), 1-based with j >= k, in the
    column-major lower-triangle enumeration of a p x p symmetric matrix."""
    if not (1 <= k <= j <= p):
        raise IndexError(f"need 1 <= k <= j <= p, got (j={j}, k={k}, p={p})")
    return (k - 1) * p - (k - 1) * (k - 2) // 2 + (j - k)


def vech_pairs(p: int) -> tuple[np.ndarray, np.ndarray]:
    """0-based (row, col) index arrays of the column-major lower triangle.

    Length p(p+1)/2; position i holds the pair mapped to linear index i.
    """
    r, c = np.triu_indices(p)
    # row-major upper triangle transposed == column-major lower triangle
    return c, r


def vech(m: np.ndarray) -> np.ndarray:
    """Half-vectorize the lower triangle of a symmetric matrix by columns.

    Accepts a single p x p matrix or a stacked (..., p, p) array.
    """
    m = np.asarray(m, dtype=np.float64)
    p = m.shape[-1]
    rows, cols = vech_pairs(p)
    return m[..., rows, cols]


def unvech(v: np.ndarray, p: int) -> np.ndarray:
    """Inverse of :func:`vech`; exact round trip."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape[-1] != p * (p + 1) // 2:
        raise ValueError(f"vector length {v.shape[-1]} != p(p+1)/2 for p={p}")
    rows, cols = vech_pairs(p)
    out = np.zeros(v.shape[:-1] + (p, p))
    out[..., rows, cols] = v
    out[..., cols, rows] = v
    return out


def sup_norm(m: np.ndarray) -> float:
    """Maximum absolute entry."""
    return float(np.max(np.abs(m)))


def off_sup_norm(m: np.ndarray) -> float:
    """Maximum absolute off-diagonal entry; undefined for p = 1."""
    m = np.asarray(m)
    if m.shape[0] < 2:
        raise ValueError("off-diagonal sup norm needs p >= 2")
    a = np.abs(m).copy()
    np.fill_diagonal(a, 0.0)
    return float(np.max(a))


def frobenius_norm(m: np.ndarray) -> float:
    """Square root of the sum of squared entries."""
    return float(np.sqrt(np.sum(np.square(m))))


def matrix_l1_norm(m: np.ndarray) -> float:
    """Maximum absolute column sum."""
    return float(np.max(np.sum(np.abs(m), axis=0)))


def spectral_norm(m: np.ndarray, tol: float = 1e-9, max_iter: int = 10_000) -> float:
    """Largest absolute eigenvalue of a symmetric matrix by power iteration.

    Iterates on M @ M so eigenvalue-sign ties (e.g. +c and -c both extremal)
    do not stall convergence; returns sqrt of the dominant eigenvalue of M^2.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m, dtype=np.float64)
    p = m.shape[0]
    if not np.any(m):
        return 0.0
    v = np.random.default_rng(0).standard_normal(p)
    v /= np.linalg.norm(v)
    lam2 = 0.0
    for _ in range(max_iter):
        w = m @ (m @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            # v is in the null space of M^2; restart from a shifted vector
            v = np.roll(v, 1) + 1.0 / p
            v /= np.linalg.norm(v)
            continue
        v_new = w / nw
        lam2_new = float(v_new @ (m @ (m @ v_new)))
        if abs(lam2_new - lam2) <= tol * max(lam2_new, np.finfo(float).tiny):
            return float(np.sqrt(max(lam2_new, 0.0)))
        lam2 = lam2_new
        v = v_new
    raise SpectralNormError(max_iter)


def cholesky(m: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L @ L.T == M for positive-definite M.

    Raises :class:`NotPositiveDefiniteError` with the offending pivot index
    (0-based) on failure.
    """
    m = np.asarray(m, dtype=np.float64)
    p = m.shape[0]
    low = np.zeros((p, p))
    for j in range(p):
        d = m[j, j] - low[j, :j] @ low[j, :j]
        if d <= 0.0 or not np.isfinite(d):
            raise NotPositiveDefiniteError(j, float(d))
        low[j, j] = np.sqrt(d)
        if j + 1 < p:
            low[j + 1 :, j] = (m[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low
