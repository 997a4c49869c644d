"""Dense two-phase simplex for small linear programs.

Problems are stated as  min c^T x  subject to  A x <= b, x >= 0.  Slack
variables turn the constraints into equalities and artificial variables give
the phase-1 start.  Bland's smallest-index rule is used for both the entering
and leaving choices, so the method cannot cycle.  Intended for the CLIME /
Dantzig column problems (a few hundred variables at most).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["LpProblem", "LpSolution", "SimplexError", "solve_lp"]

_TOL = 1e-9
_MAX_ITER = 50_000


class SimplexError(RuntimeError):
    """Iteration cap exceeded."""


@dataclass(frozen=True)
class LpProblem:
    """min c^T x  s.t.  A x <= b,  x >= 0."""

    c: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64)
        a = np.atleast_2d(np.asarray(self.a_ub, dtype=np.float64))
        b = np.asarray(self.b_ub, dtype=np.float64).ravel()
        if a.shape != (b.size, c.size):
            raise ValueError(
                f"inconsistent dimensions: c has {c.size} entries, "
                f"A is {a.shape}, b has {b.size}"
            )
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a_ub", a)
        object.__setattr__(self, "b_ub", b)


@dataclass(frozen=True)
class LpSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None
    objective: float | None


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    for r in range(tab.shape[0]):
        if r != row and tab[r, col] != 0.0:
            tab[r] -= tab[r, col] * tab[row]


def _simplex(tab: np.ndarray, basis: np.ndarray, ncols: int) -> str:
    """Minimize the objective in the last tableau row over the first ``ncols``
    columns (last column is the rhs).  Bland's rule throughout."""
    m = tab.shape[0] - 1
    for _ in range(_MAX_ITER):
        obj = tab[-1, :ncols]
        entering = -1
        for j in range(ncols):
            if obj[j] < -_TOL:
                entering = j
                break
        if entering < 0:
            return "optimal"
        col = tab[:m, entering]
        rhs = tab[:m, -1]
        leaving = -1
        best = np.inf
        for r in range(m):
            if col[r] > _TOL:
                ratio = rhs[r] / col[r]
                if ratio < best - _TOL or (
                    abs(ratio - best) <= _TOL
                    and (leaving < 0 or basis[r] < basis[leaving])
                ):
                    best = ratio
                    leaving = r
        if leaving < 0:
            return "unbounded"
        _pivot(tab, leaving, entering)
        basis[leaving] = entering
    raise SimplexError(f"simplex exceeded {_MAX_ITER} iterations")


def solve_lp(problem: LpProblem) -> LpSolution:
    """Solve the LP; optimality certified by nonnegative reduced costs."""
    c, a, b = problem.c, problem.a_ub.copy(), problem.b_ub.copy()
    m, n = a.shape

    # equality form with slacks; flip rows so the rhs is nonnegative
    full = np.hstack([a, np.eye(m)])
    neg = b < 0
    full[neg] *= -1.0
    b = np.abs(b)

    n_slack = m
    n_art = m
    ncols = n + n_slack + n_art
    tab = np.zeros((m + 1, ncols + 1))
    tab[:m, : n + n_slack] = full
    tab[:m, n + n_slack : ncols] = np.eye(m)
    tab[:m, -1] = b
    basis = np.arange(n + n_slack, ncols)

    # phase 1: minimize the sum of artificials
    tab[-1, n + n_slack : ncols] = 1.0
    for r in range(m):
        tab[-1] -= tab[r]
    status = _simplex(tab, basis, ncols)
    if status != "optimal" or tab[-1, -1] < -1e-7:
        # phase-1 objective is bounded below by 0, so "unbounded" cannot
        # happen; a positive optimum means infeasible
        return LpSolution(status="infeasible", x=None, objective=None)
    if -tab[-1, -1] > 1e-7:
        return LpSolution(status="infeasible", x=None, objective=None)

    # drive any leftover artificials out of the basis (degenerate rows)
    for r in range(m):
        if basis[r] >= n + n_slack:
            for j in range(n + n_slack):
                if abs(tab[r, j]) > _TOL:
                    _pivot(tab, r, j)
                    basis[r] = j
                    break
            # a fully zero row is redundant; the artificial stays basic at
            # zero and never re-enters because its column is excluded below

    # phase 2 on the real + slack columns
    tab[-1, :] = 0.0
    tab[-1, :n] = c
    for r in range(m):
        if basis[r] < n + n_slack:
            tab[-1] -= tab[-1, basis[r]] * tab[r]
    status = _simplex(tab, basis, n + n_slack)
    if status == "unbounded":
        return LpSolution(status="unbounded", x=None, objective=None)

    x = np.zeros(n + n_slack + n_art)
    x[basis] = tab[:m, -1]
    x_real = x[:n]
    return LpSolution(
        status="optimal", x=x_real, objective=float(c @ x_real)
    )
