"""Order-two symmetric matrix-valued kernels.

Two concrete kernels are provided: the sample-covariance kernel
h(x1, x2) = (x1 - x2)(x1 - x2)^T / 2 and the Kendall concordance kernel
h_mk(x1, x2) = 2 * 1{(x1m - x2m)(x1k - x2k) > 0}.  User kernels plug in
through :class:`CustomKernel`.

Besides single-pair evaluation, each kernel exposes two batched operations
that dominate runtime and are implemented with closed forms / matmuls where
possible:

* ``u_stat(data)``        -- average of h over all unordered pairs;
* ``cross_mean(xs, ys)``  -- mean over rows y of h(x_i, y), for every row x_i.

Kendall ties: the indicator is strictly positive, so tied coordinates
contribute 0 (the continuous-distribution convention; discrete data users
should be aware no half-credit correction is applied).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = [
    "Kernel",
    "CovarianceKernel",
    "KendallKernel",
    "CustomKernel",
    "check_data",
]

# block size for chunked Kendall indicator contractions (rows per block)
_KENDALL_BLOCK = 64


def check_data(data: np.ndarray, min_rows: int = 2) -> np.ndarray:
    """Validate an n x p data matrix."""
    data = np.asarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise ValueError(f"data must be 2-dimensional, got shape {data.shape}")
    if data.shape[0] < min_rows:
        raise ValueError(f"need at least {min_rows} rows, got {data.shape[0]}")
    return data


def _check_pair(x1: np.ndarray, x2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape or x1.ndim != 1:
        raise ValueError(f"argument shapes differ: {x1.shape} vs {x2.shape}")
    return x1, x2


class Kernel:
    """Symmetric kernel of order two.  Subclasses implement ``__call__``;
    the batched operations have generic pair-loop fallbacks."""

    kind = "custom"

    def __call__(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def u_stat(self, data: np.ndarray) -> np.ndarray:
        """C(n,2)^{-1} sum over i<j of h(X_i, X_j)."""
        data = check_data(data)
        n, p = data.shape
        acc = np.zeros((p, p))
        for i in range(n - 1):
            for j in range(i + 1, n):
                acc += self(data[i], data[j])
        return acc / (n * (n - 1) / 2)

    def cross_mean(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """For every row x_i of ``xs``, the mean over rows y_j of ``ys`` of
        h(x_i, y_j).  Returns an (n_xs, p, p) array."""
        xs = check_data(xs, min_rows=1)
        ys = check_data(ys, min_rows=1)
        if xs.shape[1] != ys.shape[1]:
            raise ValueError("dimension mismatch between the two samples")
        out = np.zeros((xs.shape[0], xs.shape[1], xs.shape[1]))
        for i, x in enumerate(xs):
            for y in ys:
                out[i] += self(x, y)
        return out / ys.shape[0]


class CovarianceKernel(Kernel):
    """h(x1, x2) = (x1 - x2)(x1 - x2)^T / 2; E h = Cov(X) for iid arguments."""

    kind = "covariance"

    def __call__(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        x1, x2 = _check_pair(x1, x2)
        d = x1 - x2
        return np.outer(d, d) / 2.0

    def u_stat(self, data: np.ndarray) -> np.ndarray:
        # exact algebraic identity with the demeaned sum of squares
        data = check_data(data)
        n = data.shape[0]
        c = data - data.mean(axis=0)
        return (c.T @ c) / (n - 1)

    def cross_mean(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        # mean_j h(x, y_j) = (x x^T - x ybar^T - ybar x^T + M2) / 2,
        # with M2 the mean of y_j y_j^T
        xs = check_data(xs, min_rows=1)
        ys = check_data(ys, min_rows=1)
        if xs.shape[1] != ys.shape[1]:
            raise ValueError("dimension mismatch between the two samples")
        ybar = ys.mean(axis=0)
        m2 = (ys.T @ ys) / ys.shape[0]
        outer = np.einsum("im,ik->imk", xs, xs)
        cross = np.einsum("im,k->imk", xs, ybar)
        return (outer - cross - cross.transpose(0, 2, 1) + m2) / 2.0


class KendallKernel(Kernel):
    """h_mk(x1, x2) = 2 * 1{(x1m - x2m)(x1k - x2k) > 0}; entries in {0, 2}."""

    kind = "kendall"

    def __call__(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        x1, x2 = _check_pair(x1, x2)
        d = x1 - x2
        pos = (d > 0).astype(np.float64)
        neg = (d < 0).astype(np.float64)
        return 2.0 * (np.outer(pos, pos) + np.outer(neg, neg))

    def u_stat(self, data: np.ndarray) -> np.ndarray:
        # 1{a*b > 0} = 1{a>0}1{b>0} + 1{a<0}1{b<0}; summing ordered pairs
        # i != j double-counts each unordered pair and, by the i<->j swap,
        # the positive and negative indicator products contribute equally.
        data = check_data(data)
        n, p = data.shape
        acc = np.zeros((p, p))
        for start in range(0, n, _KENDALL_BLOCK):
            block = data[start : start + _KENDALL_BLOCK]
            diff = block[:, None, :] - data[None, :, :]
            pos = (diff > 0).astype(np.float64)
            acc += np.einsum("ijm,ijk->mk", pos, pos)
        # acc = sum over ordered pairs (diagonal i==j contributes 0)
        return 4.0 * acc / (n * (n - 1))

    def cross_mean(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        xs = check_data(xs, min_rows=1)
        ys = check_data(ys, min_rows=1)
        if xs.shape[1] != ys.shape[1]:
            raise ValueError("dimension mismatch between the two samples")
        n_x, p = xs.shape
        out = np.empty((n_x, p, p))
        for start in range(0, n_x, _KENDALL_BLOCK):
            block = xs[start : start + _KENDALL_BLOCK]
            diff = block[:, None, :] - ys[None, :, :]
            pos = (diff > 0).astype(np.float64)
            neg = (diff < 0).astype(np.float64)
            out[start : start + _KENDALL_BLOCK] = np.einsum(
                "ijm,ijk->imk", pos, pos
            ) + np.einsum("ijm,ijk->imk", neg, neg)
        return 2.0 * out / ys.shape[0]


class CustomKernel(Kernel):
    """Wrap a user evaluation callback returning a dense p x p matrix.

    The callback must be symmetric in its two arguments and reentrant; with
    ``debug=True`` symmetry is asserted on every evaluation (doubles cost).
    """

    kind = "custom"

    def __init__(
        self,
        fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
        debug: bool = False,
    ):
        self.fn = fn
        self.debug = debug

    def __call__(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        x1, x2 = _check_pair(x1, x2)
        h = np.asarray(self.fn(x1, x2), dtype=np.float64)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] != x1.shape[0]:
            raise ValueError(f"custom kernel returned shape {h.shape}, expected p x p")
        if self.debug:
            h_swap = np.asarray(self.fn(x2, x1), dtype=np.float64)
            if not np.allclose(h, h_swap, rtol=0, atol=1e-10):
                raise ValueError("custom kernel is not symmetric in its arguments")
        return h
