"""U-statistics of order two and their empirical Hoeffding decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import Kernel, check_data

__all__ = [
    "UStatResult",
    "EmpiricalHoeffding",
    "compute_u",
    "kendall_tau_matrix",
    "sup_stat",
    "empirical_hoeffding",
    "population_g_covariance",
    "population_f_covariance",
]


@dataclass(frozen=True)
class UStatResult:
    """U-statistic value together with the sample size and kernel."""

    u: np.ndarray
    n: int
    kernel: Kernel


def compute_u(data: np.ndarray, kernel: Kernel) -> UStatResult:
    """Average of the kernel over all C(n,2) unordered pairs."""
    data = check_data(data)
    return UStatResult(u=kernel.u_stat(data), n=data.shape[0], kernel=kernel)


def kendall_tau_matrix(data: np.ndarray) -> np.ndarray:
    """Kendall's tau rank correlation matrix: the concordance-kernel
    U-statistic shifted down by 1; entries in [-1, 1]."""
    from .kernels import KendallKernel

    data = check_data(data)
    return KendallKernel().u_stat(data) - 1.0


def sup_stat(
    u: UStatResult | np.ndarray,
    target: np.ndarray,
    off_diag_only: bool = False,
    sided: str = "abs",
    scaled: bool = True,
    n: int | None = None,
) -> float:
    """Sup-type statistic of a centered U-statistic.

    With ``scaled`` the statistic is sqrt(n) * max(U - target) / 2 (the
    Gaussian-approximation scale); unscaled it is the plain sup norm used by
    the simultaneous tests.  ``sided`` is "abs" for max |.| or "signed" for
    the signed maximum.
    """
    if isinstance(u, UStatResult):
        mat, n = u.u, u.n
    else:
        mat = np.asarray(u)
        if scaled and n is None:
            raise ValueError("n is required for the scaled statistic")
    target = np.asarray(target)
    if mat.shape != target.shape:
        raise ValueError(f"shape mismatch: {mat.shape} vs {target.shape}")
    diff = mat - target
    if off_diag_only:
        if diff.shape[0] < 2:
            raise ValueError("off-diagonal statistic needs p >= 2")
        mask = ~np.eye(diff.shape[0], dtype=bool)
        vals = diff[mask]
    else:
        vals = diff.ravel()
    if sided == "abs":
        stat = float(np.max(np.abs(vals)))
    elif sided == "signed":
        stat = float(np.max(vals))
    else:
        raise ValueError(f"sided must be 'abs' or 'signed', got {sided!r}")
    if scaled:
        stat *= np.sqrt(n) / 2.0
    return stat


class EmpiricalHoeffding:
    """Plug-in Hoeffding decomposition of a kernel on a fixed sample.

    With hhat1(x_i) = (n-1)^{-1} sum_{j != i} h(x_i, x_j) and hbar = U:

    * ``g_hat[i]``   = hhat1(x_i) - hbar,
    * ``f_hat(i,j)`` = h(x_i, x_j) - hhat1(x_i) - hhat1(x_j) + hbar,

    so h = f_hat + g_hat[i] + g_hat[j] + hbar holds exactly for every pair.
    """

    def __init__(self, data: np.ndarray, kernel: Kernel):
        data = check_data(data, min_rows=3)
        self.data = data
        self.kernel = kernel
        self.n = n = data.shape[0]
        p = data.shape[1]
        # row means of the pairwise kernel; reuse cross_mean and remove the
        # diagonal term h(x_i, x_i)
        cross = kernel.cross_mean(data, data)  # (n, p, p), includes j == i
        diag = np.stack([kernel(x, x) for x in data])
        self._h1 = (cross * n - diag) / (n - 1)
        # U equals the mean of the row means hhat1
        self.h_bar = self._h1.mean(axis=0)
        self.g_hat = self._h1 - self.h_bar
        self.p = p

    def f_hat(self, i: int, j: int) -> np.ndarray:
        """Empirical canonical part for the pair (i, j)."""
        h = self.kernel(self.data[i], self.data[j])
        return h - self._h1[i] - self._h1[j] + self.h_bar


def empirical_hoeffding(data: np.ndarray, kernel: Kernel) -> EmpiricalHoeffding:
    """Compute the empirical Hoeffding decomposition (needs n >= 3)."""
    return EmpiricalHoeffding(data, kernel)


def population_g_covariance(x: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    """Exact Hajek projection g(x) = (x x^T - Sigma) / 2 of the covariance
    kernel for mean-zero data with known covariance."""
    x = np.asarray(x, dtype=np.float64)
    sigma = np.asarray(sigma, dtype=np.float64)
    if x.shape[0] != sigma.shape[0]:
        raise ValueError(f"dimension mismatch: {x.shape[0]} vs {sigma.shape[0]}")
    return (np.outer(x, x) - sigma) / 2.0


def population_f_covariance(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Exact canonical part f(x1, x2) = -(x1 x2^T + x2 x1^T) / 2 of the
    covariance kernel for mean-zero data (independent of Sigma)."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    return -(np.outer(x1, x2) + np.outer(x2, x1)) / 2.0
