"""Dense linear programming via the two-phase simplex method.

Every linear program in this package (Chebyshev centres, bounding boxes,
boundedness and overlap probes) is a dense problem with a few dozen
constraints, so a small self-contained tableau solver is used instead of an
external one.  Bland's pivoting rule makes the pivot sequence finite and
fully deterministic; the iteration cap scales with the constraint count.

Problems are stated as

    maximize (or minimize)  c . x    subject to  A x <= b,

with each variable either free or non-negative.  Free variables are split
into differences of non-negative pairs before the tableau is built.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, SolverFailure, Unbounded

_PIVOT_TOL = 1e-10
_FEAS_TOL = 1e-8


@dataclass
class LpResult:
    """Optimal point and objective value of a solved linear program."""

    x: np.ndarray
    value: float


def solve_lp(c, A, b, *, nonneg=None, maximize: bool = True) -> LpResult:
    """Solve max/min of ``c . x`` subject to ``A x <= b``.

    Args:
        c: objective vector, shape (p,).
        A: constraint matrix, shape (m, p).
        b: right-hand sides, shape (m,).
        nonneg: optional boolean mask of length p; True entries constrain
            the variable to be >= 0, all others are free.  Default: all free.
        maximize: direction of optimization.

    Raises:
        Infeasible: no point satisfies the constraints.
        Unbounded: the objective is unbounded over the feasible region.
        SolverFailure: the pivot cap was exceeded.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or c.ndim != 1 or b.ndim != 1:
        raise ValueError("solve_lp expects c (p,), A (m, p), b (m,)")
    m, p = A.shape
    if c.shape[0] != p or b.shape[0] != m:
        raise ValueError("inconsistent LP shapes")
    if nonneg is None:
        nonneg = np.zeros(p, dtype=bool)
    else:
        nonneg = np.asarray(nonneg, dtype=bool)

    # Split free variables: x_j = u_j - w_j with u, w >= 0.  The u-columns
    # keep the original order; the w-columns are appended at the end.
    free_idx = np.flatnonzero(~nonneg)
    A_std = np.hstack([A, -A[:, free_idx]]) if free_idx.size else A.copy()
    c_std = np.concatenate([c, -c[free_idx]]) if free_idx.size else c.copy()
    if not maximize:
        c_std = -c_std

    x_std = _two_phase(c_std, A_std, b)

    x = x_std[:p].copy()
    x[free_idx] -= x_std[p:]
    return LpResult(x=x, value=float(c @ x))


def _two_phase(c, A, b):
    """Maximize c.x s.t. A x <= b, x >= 0; returns the standard-form x."""
    m, p = A.shape
    cap = max(10 * (m + 1), 50)

    # Equality form: rows with negative rhs are negated so every basic
    # solution starts non-negative; those rows get artificial variables.
    neg = b < 0
    sign = np.where(neg, -1.0, 1.0)
    M = np.hstack([A * sign[:, None], np.diag(sign)])  # real + slack columns
    rhs = b * sign
    n_art = int(neg.sum())
    total = p + m

    if n_art:
        art_cols = np.zeros((m, n_art))
        art_cols[np.flatnonzero(neg), np.arange(n_art)] = 1.0
        T = np.hstack([M, art_cols, rhs[:, None]])
        basis = np.where(neg, total + np.cumsum(neg) - 1, p + np.arange(m))
        basis = basis.astype(int)
        # Phase 1: maximize -sum(artificials).
        c1 = np.zeros(total + n_art)
        c1[total:] = -1.0
        obj = _reduced_costs(T, basis, c1)
        status = _pivot_loop(T, basis, obj, cap)
        if status != "optimal":
            # phase 1 is bounded above by zero, so only the cap can trip
            raise SolverFailure(f"phase-1 ended with status '{status}'")
        phase1_value = -obj[-1]
        if phase1_value < -_FEAS_TOL * (1.0 + np.abs(b).max(initial=0.0)):
            raise Infeasible("constraint system has no solution")
        T, basis = _drop_artificials(T, basis, total)
    else:
        T = np.hstack([M, rhs[:, None]])
        basis = (p + np.arange(m)).astype(int)

    c2 = np.zeros(total)
    c2[:p] = c
    obj = _reduced_costs(T, basis, c2)
    status = _pivot_loop(T, basis, obj, cap)
    if status == "cap":
        raise SolverFailure("phase-2 iteration cap exceeded")
    if status == "unbounded":
        raise Unbounded("objective is unbounded over the feasible region")

    # Recover the basic solution from the original data: one clean solve at
    # the final basis removes the roundoff accumulated across pivots.
    x = np.zeros(total)
    cols = M[:, basis] if T.shape[0] == m else None
    if cols is not None and abs(np.linalg.det(cols)) > 1e-300:
        x[basis] = np.linalg.solve(cols, rhs)
    else:
        x[basis] = T[:, -1]
    # Tiny negative components are pivot noise.
    np.clip(x, 0.0, None, out=x)
    return x[:p]


def _reduced_costs(T, basis, c):
    """Row of reduced costs c_j - z_j plus the negated objective value."""
    n_rows = T.shape[0]
    obj = np.empty(T.shape[1])
    obj[:-1] = c[: T.shape[1] - 1]
    obj[-1] = 0.0
    cb = c[basis[:n_rows]]
    obj -= cb @ T
    return obj


def _pivot_loop(T, basis, obj, cap):
    """Bland's-rule pivoting until optimal / unbounded / cap."""
    n_cols = T.shape[1] - 1
    for _ in range(cap):
        enter = -1
        for j in range(n_cols):
            if obj[j] > _PIVOT_TOL:
                enter = j
                break
        if enter < 0:
            return "optimal"
        col = T[:, enter]
        pos = col > _PIVOT_TOL
        if not pos.any():
            return "unbounded"
        ratios = np.full(col.shape, np.inf)
        ratios[pos] = T[pos, -1] / col[pos]
        best = ratios.min()
        # Bland tie-break: smallest basic-variable index among minimisers.
        tied = np.flatnonzero(ratios <= best + 1e-9 * (1.0 + abs(best)))
        leave = tied[np.argmin(basis[tied])]
        _pivot(T, obj, leave, enter)
        basis[leave] = enter
    return "cap"


def _pivot(T, obj, row, col):
    T[row] /= T[row, col]
    factors = T[:, col].copy()
    factors[row] = 0.0
    T -= factors[:, None] * T[row]
    obj -= obj[col] * T[row]


def _drop_artificials(T, basis, total):
    """Remove artificial columns, pivoting out or deleting redundant rows."""
    keep_rows = np.ones(T.shape[0], dtype=bool)
    for i in range(T.shape[0]):
        if basis[i] < total:
            continue
        # Basic artificial at zero level: pivot in any usable real column.
        pivot_col = -1
        for j in range(total):
            if abs(T[i, j]) > _PIVOT_TOL:
                pivot_col = j
                break
        if pivot_col >= 0:
            dummy = np.zeros(T.shape[1])
            _pivot(T, dummy, i, pivot_col)
            basis[i] = pivot_col
        else:
            keep_rows[i] = False  # redundant constraint row
    T = T[keep_rows][:, list(range(total)) + [T.shape[1] - 1]]
    basis = basis[keep_rows]
    return T, basis
