"""Dense two-phase simplex method with Bland's anti-cycling rule.

Problems here are small (at most ~65 variables and a few hundred rows), so a
full tableau in numpy is simpler and fast enough.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class LPError(RuntimeError):
    pass


class InfeasibleLPError(LPError):
    pass


class UnboundedLPError(LPError):
    pass


class NumericalInstabilityError(LPError):
    pass


PIVOT_FLOOR = 1e-13


@dataclass
class LinearProgram:
    """``max c^t x`` s.t. ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``lo <= x <= hi``.

    ``None`` bounds mean unbounded on that side.
    """

    c: np.ndarray
    a_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    a_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    bounds: list = field(default_factory=list)

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        n = self.c.size
        self.a_ub = np.zeros((0, n)) if self.a_ub is None else np.asarray(self.a_ub, dtype=float).reshape(-1, n)
        self.b_ub = np.zeros(0) if self.b_ub is None else np.asarray(self.b_ub, dtype=float).ravel()
        self.a_eq = np.zeros((0, n)) if self.a_eq is None else np.asarray(self.a_eq, dtype=float).reshape(-1, n)
        self.b_eq = np.zeros(0) if self.b_eq is None else np.asarray(self.b_eq, dtype=float).ravel()
        if not self.bounds:
            self.bounds = [(0.0, None)] * n
        if len(self.bounds) != n:
            raise ValueError("one (lo, hi) pair per variable is required")

    @property
    def num_variables(self) -> int:
        return self.c.size

    def is_feasible(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if self.a_ub.size and np.any(self.a_ub @ x > self.b_ub + tol):
            return False
        if self.a_eq.size and np.any(np.abs(self.a_eq @ x - self.b_eq) > tol):
            return False
        for xi, (lo, hi) in zip(x, self.bounds):
            if lo is not None and xi < lo - tol or hi is not None and xi > hi + tol:
                return False
        return True


@dataclass
class LPResult:
    x: np.ndarray
    objective: float
    pivots: int


def _standardize(lp: LinearProgram):
    """Rewrite with nonnegative variables; return data and a back-map."""
    n = lp.num_variables
    cols = []  # per original variable: list of (new column, sign), offset
    offsets = np.zeros(n)
    extra_ub_rows = []
    ncol = 0
    for i, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            offsets[i] = lo
            cols.append([(ncol, 1.0)])
            if hi is not None:
                extra_ub_rows.append((ncol, hi - lo))
            ncol += 1
        elif hi is not None:
            offsets[i] = hi
            cols.append([(ncol, -1.0)])
            ncol += 1
        else:
            cols.append([(ncol, 1.0), (ncol + 1, -1.0)])
            ncol += 2

    def remap(a):
        out = np.zeros((a.shape[0], ncol))
        for i, parts in enumerate(cols):
            for j, s in parts:
                out[:, j] += s * a[:, i]
        return out

    a_ub = remap(lp.a_ub)
    b_ub = lp.b_ub - lp.a_ub @ offsets
    if extra_ub_rows:
        box = np.zeros((len(extra_ub_rows), ncol))
        for r, (j, _) in enumerate(extra_ub_rows):
            box[r, j] = 1.0
        a_ub = np.vstack([a_ub, box])
        b_ub = np.concatenate([b_ub, [w for _, w in extra_ub_rows]])
    a_eq = remap(lp.a_eq)
    b_eq = lp.b_eq - lp.a_eq @ offsets
    c = remap(lp.c[None, :])[0]

    def back(y):
        x = offsets.copy()
        for i, parts in enumerate(cols):
            for j, s in parts:
                x[i] += s * y[j]
        return x

    return c, a_ub, b_ub, a_eq, b_eq, back


def _pivot(t, row, col):
    piv = t[row, col]
    if abs(piv) < PIVOT_FLOOR:
        raise NumericalInstabilityError(f"pivot magnitude {abs(piv):.3e} below {PIVOT_FLOOR}")
    t[row] /= piv
    col_vals = t[:, col].copy()
    col_vals[row] = 0.0
    t -= np.outer(col_vals, t[row])


def _run(t, basis, ncols, tol, max_pivots):
    """Maximize the objective stored in the last row (as reduced costs)."""
    pivots = 0
    m = t.shape[0] - 1
    while True:
        # Bland: lowest-index column with positive reduced gain
        obj = t[-1, :ncols]
        enter = next((j for j in range(ncols) if obj[j] < -tol), None)
        if enter is None:
            return pivots
        colv = t[:m, enter]
        best, leave = None, None
        for i in range(m):
            if colv[i] > tol:
                ratio = t[i, -1] / colv[i]
                if best is None or ratio < best - 1e-12 or (abs(ratio - best) <= 1e-12 and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedLPError("objective is unbounded")
        _pivot(t, leave, enter)
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise LPError("pivot limit exceeded")


def solve_lp(lp: LinearProgram, tol: float = 1e-10, max_pivots: int = 50_000) -> LPResult:
    """Optimal vertex of ``lp`` by the two-phase simplex method."""
    c, a_ub, b_ub, a_eq, b_eq, back = _standardize(lp)
    n = c.size
    m_ub, m_eq = a_ub.shape[0], a_eq.shape[0]
    m = m_ub + m_eq
    # columns: original n, slacks m_ub, artificials m
    a = np.zeros((m, n + m_ub))
    a[:m_ub, :n] = a_ub
    a[:m_ub, n:] = np.eye(m_ub)
    a[m_ub:, :n] = a_eq
    b = np.concatenate([b_ub, b_eq])
    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1
    ncols = n + m_ub
    t = np.zeros((m + 1, ncols + m + 1))
    t[:m, :ncols] = a
    t[:m, ncols:ncols + m] = np.eye(m)
    t[:m, -1] = b
    basis = list(range(ncols, ncols + m))
    # slack columns can start basic where the row was not flipped
    for i in range(m_ub):
        if not neg[i]:
            basis[i] = n + i
            t[i, ncols + i] = 0.0
    art_rows = [i for i in range(m) if basis[i] >= ncols]
    # phase 1: maximize -sum(artificials)
    t[-1, :] = 0.0
    for i in art_rows:
        t[-1, :] -= t[i, :]
        t[-1, ncols + i] += 1.0
    pivots = _run(t, basis, ncols + m, tol, max_pivots)
    # the corner cell holds the phase-1 objective, -sum(artificials)
    if t[-1, -1] < -1e-8 * max(1.0, np.abs(b).max(initial=1.0)):
        raise InfeasibleLPError("linear program is infeasible")
    # drive artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= ncols:
            j = next((j for j in range(ncols) if abs(t[i, j]) > 1e-9), None)
            if j is None:
                continue
            _pivot(t, i, j)
            basis[i] = j
            pivots += 1
        keep.append(i)
    t = np.vstack([t[keep][:, list(range(ncols)) + [t.shape[1] - 1]], np.zeros((1, ncols + 1))])
    basis = [basis[i] for i in keep]
    # phase 2
    t[-1, :n] = -c
    for i, bv in enumerate(basis):
        if abs(t[-1, bv]) > 0:
            t[-1, :] -= t[-1, bv] * t[i, :]
    pivots += _run(t, basis, ncols, tol, max_pivots)
    y = np.zeros(ncols)
    for i, bv in enumerate(basis):
        y[bv] = t[i, -1]
    x = back(y[:n])
    return LPResult(x=x, objective=float(lp.c @ x), pivots=pivots)
