"""Dense two-phase revised simplex.

The basis inverse is kept as an explicit dense matrix, updated in product
form and refactored periodically. Pricing is Devex; the ratio test is
Harris's two-pass rule. Right-hand sides of rows whose slack starts in the
basis are loosened by a tiny seeded perturbation to break degeneracy; a
dual-simplex cleanup restores the exact vertex afterwards. After a long run
of degenerate pivots pricing falls back to Bland's smallest-index rule, which
rules out cycling.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
SOLUTION_TOL = 1e-7
STALL_LIMIT = 500
PERTURBATION = 1e-6
REFACTOR_EVERY = 100
DEVEX_RESET = 1e6


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded" | "iteration_limit"
    x: np.ndarray | None
    objective: float | None
    iterations: int
    duals_ub: np.ndarray | None = None


class _Basis:
    """Standard-form ``A x = b, x >= 0`` with a dense basis inverse."""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: np.ndarray, max_iter: int):
        self.A = A
        self.b = b
        self.basis = basis
        self.rows = np.arange(A.shape[0])
        self.iterations = 0
        self.max_iter = max_iter
        self.refactor()

    def refactor(self):
        self.Binv = np.linalg.inv(self.A[:, self.basis])
        self.xB = self.Binv @ self.b
        self.xB[np.abs(self.xB) < 1e-13] = 0.0

    def pivot(self, r: int, j: int, col: np.ndarray, theta: float):
        self.xB -= theta * col
        self.xB[r] = theta
        row = self.Binv[r] / col[r]
        self.Binv -= np.outer(col, row)
        self.Binv[r] = row
        self.basis[r] = j
        self.iterations += 1
        if self.iterations % REFACTOR_EVERY == 0:
            self.refactor()

    def reduced_costs(self, cost: np.ndarray, allowed: np.ndarray) -> np.ndarray:
        y = cost[self.basis] @ self.Binv
        d = cost - y @ self.A
        d[~allowed] = 0.0
        d[self.basis] = 0.0
        return d

    def primal(self, cost: np.ndarray, allowed: np.ndarray) -> str:
        """Maximize ``cost @ x`` over the columns flagged in ``allowed``."""
        weights = np.ones(self.A.shape[1])
        stalled = 0
        while self.iterations < self.max_iter:
            d = self.reduced_costs(cost, allowed)
            cand = np.nonzero(d > PIVOT_TOL)[0]
            if cand.size == 0:
                return "optimal"
            bland = stalled >= STALL_LIMIT
            if bland:
                j = int(cand[0])
            else:
                j = int(cand[np.argmax(d[cand] ** 2 / weights[cand])])
            col = self.Binv @ self.A[:, j]
            pos = np.nonzero(col > PIVOT_TOL)[0]
            if pos.size == 0:
                return "unbounded"
            xb = np.maximum(self.xB[pos], 0.0)
            if bland:
                ratios = xb / col[pos]
                ties = pos[ratios <= ratios.min() + PIVOT_TOL]
                r = int(ties[np.argmin(self.basis[ties])])
            else:
                # Harris: allow a tiny overshoot, then take the largest pivot
                bound = ((xb + PIVOT_TOL) / col[pos]).min()
                ties = pos[xb / col[pos] <= bound]
                r = int(ties[np.argmax(col[ties])])
            theta = max(self.xB[r], 0.0) / col[r]
            alpha = (self.Binv[r] @ self.A) / col[r]
            wq = weights[j]
            np.maximum(weights, alpha * alpha * wq, out=weights)
            weights[self.basis[r]] = max(wq / col[r] ** 2, 1.0)
            if weights.max() > DEVEX_RESET:
                weights[:] = 1.0
            stalled = stalled + 1 if theta * d[j] <= PIVOT_TOL else 0
            self.pivot(r, j, col, theta)
        return "iteration_limit"

    def dual(self, cost: np.ndarray, allowed: np.ndarray) -> str:
        """Restore ``x_B >= 0`` from a dual-feasible basis."""
        while self.iterations < self.max_iter:
            neg = np.nonzero(self.xB < -PIVOT_TOL)[0]
            if neg.size == 0:
                self.xB[self.xB < 0] = 0.0
                return "optimal"
            r = int(neg[np.argmin(self.xB[neg])])
            d = self.reduced_costs(cost, allowed)
            alpha = self.Binv[r] @ self.A
            alpha[~allowed] = 0.0
            alpha[self.basis] = 0.0
            cand = np.nonzero(alpha < -PIVOT_TOL)[0]
            if cand.size == 0:
                return "infeasible"
            ratios = np.minimum(d[cand], 0.0) / alpha[cand]
            j = int(cand[np.argmin(ratios)])
            col = self.Binv @ self.A[:, j]
            self.pivot(r, j, col, self.xB[r] / col[r])
        return "iteration_limit"

    def drive_out(self, is_art: np.ndarray):
        """Pivot zero-level artificials out; drop rows where that is impossible."""
        keep = np.ones(len(self.basis), dtype=bool)
        for r in np.nonzero(is_art[self.basis])[0]:
            row = self.Binv[r] @ self.A
            cand = np.nonzero((np.abs(row) > PIVOT_TOL) & ~is_art)[0]
            if cand.size:
                j = int(cand[np.argmax(np.abs(row[cand]))])
                col = self.Binv @ self.A[:, j]
                self.pivot(int(r), j, col, self.xB[r] / col[r])
            else:
                keep[r] = False  # linearly dependent row
        if not keep.all():
            self.A, self.b = self.A[keep], self.b[keep]
            self.basis, self.rows = self.basis[keep], self.rows[keep]
            self.refactor()


def simplex(
    c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, max_iter: int = 200_000, seed: int = 0
) -> SimplexResult:
    """Maximize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Matrices are dense ``numpy`` arrays; either block may be omitted.
    ``duals_ub`` holds the shadow prices of the ``<=`` rows.
    """
    c = np.asarray(c, dtype=float)
    nv = c.size
    A_ub = np.zeros((0, nv)) if A_ub is None else np.asarray(A_ub, dtype=float)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    A_eq = np.zeros((0, nv)) if A_eq is None else np.asarray(A_eq, dtype=float)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)

    # rows with negative rhs flip sign; a flipped <= row becomes a >= row
    flip_ub = b_ub < 0
    A_ub = np.where(flip_ub[:, None], -A_ub, A_ub)
    b_ub = np.abs(b_ub)
    flip_eq = b_eq < 0
    A_eq = np.where(flip_eq[:, None], -A_eq, A_eq)
    b_eq = np.abs(b_eq)

    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq
    if m == 0:
        if np.any(c > 0):
            return SimplexResult("unbounded", None, None, 0)
        return SimplexResult("optimal", np.zeros(nv), 0.0, 0, np.zeros(0))
    n_art = int(flip_ub.sum()) + m_eq
    ncols = nv + m_ub + n_art
    A = np.zeros((m, ncols))
    A[:m_ub, :nv] = A_ub
    A[m_ub:, :nv] = A_eq
    A[np.arange(m_ub), nv + np.arange(m_ub)] = np.where(flip_ub, -1.0, 1.0)
    b = np.concatenate([b_ub, b_eq])

    basis = np.empty(m, dtype=np.int64)
    art = nv + m_ub
    for i in range(m):
        if i < m_ub and not flip_ub[i]:
            basis[i] = nv + i
        else:
            A[i, art] = 1.0
            basis[i] = art
            art += 1
    is_art = np.zeros(ncols, dtype=bool)
    is_art[nv + m_ub :] = True

    # loosening a row whose slack is basic keeps every feasible point feasible
    loose = np.zeros(m, dtype=bool)
    loose[:m_ub] = ~flip_ub
    rng = np.random.default_rng(seed)
    b_pert = b + loose * PERTURBATION * rng.random(m) * (1.0 + np.abs(b))
    lp = _Basis(A, b_pert, basis, max_iter)

    if n_art:
        status = lp.primal(np.where(is_art, -1.0, 0.0), np.ones(ncols, dtype=bool))
        if status == "iteration_limit":
            return SimplexResult(status, None, None, lp.iterations)
        infeasibility = float(lp.xB[is_art[lp.basis]].sum())
        if infeasibility > SOLUTION_TOL:
            return SimplexResult("infeasible", None, None, lp.iterations)
        lp.drive_out(is_art)
        logger.debug("phase 1 done after %d pivots", lp.iterations)

    cost = np.zeros(ncols)
    cost[:nv] = c
    allowed = ~is_art
    status = lp.primal(cost, allowed)
    if status != "optimal":
        return SimplexResult(status, None, None, lp.iterations)
    lp.b = b[lp.rows]
    lp.refactor()
    status = lp.dual(cost, allowed)
    if status == "optimal":
        # the exact rhs can in principle leave a few primal-improving columns
        status = lp.primal(cost, allowed)
    if status != "optimal":
        return SimplexResult(status, None, None, lp.iterations)
    logger.debug("optimal after %d pivots", lp.iterations)

    lp.refactor()
    x = np.zeros(ncols)
    x[lp.basis] = np.maximum(lp.xB, 0.0)
    x = x[:nv]
    x[np.abs(x) < 1e-12] = 0.0
    y = np.zeros(m)
    y[lp.rows] = cost[lp.basis] @ lp.Binv
    duals = (y[:m_ub] * np.where(flip_ub, -1.0, 1.0))
    return SimplexResult("optimal", x, float(c @ x), lp.iterations, duals)
