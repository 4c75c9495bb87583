"""Dense revised simplex for ``max c.x  s.t.  A x <= b`` with free ``x``.

The entropic programs have few variables (at most 255, usually 31) and many
rows, so the solver works on the dual in standard form::

    min b.y   s.t.  A^T y = c,  y >= 0

whose basis is only ``len(c)`` square.  Pricing is one ``A @ pi`` product per
iteration.  Primal values are the simplex multipliers of the final dual
basis, and the basic ``y`` is an explicit certificate: ``c = A^T y`` with
``y >= 0`` proves ``c.x <= b.y`` for every feasible ``x``.

Pivoting is Dantzig's rule with lowest-index ties, switching to Bland's rule
after a run of degenerate pivots, so results are deterministic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
NUMERIC_FAILURE = "numeric_failure"


@dataclass
class LPSolution:
    status: str
    objective: float
    x: np.ndarray | None = None
    y: np.ndarray | None = None  # row multipliers (certificate), length m
    ray: np.ndarray | None = None  # improving direction when unbounded
    iterations: int = 0
    message: str = ""


class _Basis:
    def __init__(self, As: np.ndarray, n: int):
        self.As = As
        self.m = As.shape[0]
        self.n = n
        self.cols = list(range(self.m, self.m + n))  # artificials

    def column(self, j: int) -> np.ndarray:
        if j < self.m:
            return self.As[j]
        e = np.zeros(self.n)
        e[j - self.m] = 1.0
        return e

    def matrix(self) -> np.ndarray:
        return np.column_stack([self.column(j) for j in self.cols])


def maximize(c, A, b, *, tol: float = 1e-9, max_iter: int = 20000,
             degenerate_limit: int = 50) -> LPSolution:
    """Solve ``max c.x`` subject to ``A x <= b``; ``x`` is unrestricted.

    Status is ``optimal``, ``unbounded`` (with ``ray``: ``A ray <= 0``,
    ``c.ray = 1``), ``infeasible``, or ``numeric_failure`` (pivot limit or a
    singular basis).
    """
    c = np.asarray(c, dtype=np.float64)
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("dimension mismatch")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
        raise ValueError("non-finite LP data")

    sign = np.where(c < 0, -1.0, 1.0)
    rhs = np.abs(c)
    As = A * sign
    basis = _Basis(As, n)
    in_basis = np.zeros(m + n, dtype=bool)
    in_basis[m:] = True
    iterations = 0

    def solve_phase(cost_struct: np.ndarray, art_cost: float, allow_art: bool):
        nonlocal iterations
        degenerate_run = 0
        while True:
            if iterations >= max_iter:
                return NUMERIC_FAILURE, None, None
            try:
                B = basis.matrix()
                xB = np.linalg.solve(B, rhs)
                cB = np.array([cost_struct[j] if j < m else art_cost for j in basis.cols])
                pi = np.linalg.solve(B.T, cB)
            except np.linalg.LinAlgError:
                return NUMERIC_FAILURE, None, None
            xB[(xB < 0) & (xB > -tol)] = 0.0

            d = cost_struct - As @ pi
            d[in_basis[:m]] = 0.0
            if allow_art:
                d_art = art_cost - pi
                d_art[in_basis[m:]] = 0.0
            bland = degenerate_run >= degenerate_limit
            neg = np.flatnonzero(d < -tol)
            if allow_art:
                neg = np.concatenate([neg, m + np.flatnonzero(d_art < -tol)])
            if neg.size == 0:
                return OPTIMAL, xB, pi
            if bland:
                j = int(neg.min())
            else:
                allv = d if not allow_art else np.concatenate([d, d_art])
                j = int(neg[np.argmin(allv[neg])])

            try:
                u = np.linalg.solve(B, basis.column(j))
            except np.linalg.LinAlgError:
                return NUMERIC_FAILURE, None, None
            pos = np.flatnonzero(u > tol)
            if pos.size == 0:
                return INFEASIBLE, xB, pi  # dual unbounded
            ratios = xB[pos] / u[pos]
            best = ratios.min()
            ties = pos[ratios <= best + tol * max(1.0, abs(best))]
            leave = int(min(ties, key=lambda i: basis.cols[i]))
            degenerate_run = degenerate_run + 1 if best <= tol else 0
            in_basis[basis.cols[leave]] = False
            basis.cols[leave] = j
            in_basis[j] = True
            iterations += 1

    # Phase 1: drive the artificials to zero.
    status, xB, pi = solve_phase(np.zeros(m), 1.0, allow_art=False)
    if status != OPTIMAL:
        return LPSolution(status if status == NUMERIC_FAILURE else NUMERIC_FAILURE,
                          float("nan"), iterations=iterations,
                          message="phase 1 did not terminate")
    art_level = sum(xB[i] for i, j in enumerate(basis.cols) if j >= m)
    if art_level > tol * max(1.0, float(rhs.max(initial=0.0))) * 10:
        ray = sign * pi
        scale = float(c @ ray)
        if scale <= 0 or np.any(A @ ray > 1e-7 * max(1.0, np.abs(ray).max())):
            return LPSolution(NUMERIC_FAILURE, float("nan"), iterations=iterations,
                              message="phase 1 infeasible but no valid recession ray")
        return LPSolution(UNBOUNDED, float("inf"), ray=ray / scale, iterations=iterations)

    _evict_artificials(basis, in_basis, tol)

    status, xB, pi = solve_phase(b, 0.0, allow_art=False)
    if status == INFEASIBLE:
        return LPSolution(INFEASIBLE, float("-inf"), iterations=iterations)
    if status != OPTIMAL:
        return LPSolution(status, float("nan"), iterations=iterations,
                          message="pivot limit or singular basis in phase 2")
    x = sign * pi
    y = np.zeros(m)
    for i, j in enumerate(basis.cols):
        if j < m:
            y[j] = max(xB[i], 0.0)
    return LPSolution(OPTIMAL, float(c @ x), x=x, y=y, iterations=iterations)


def _evict_artificials(basis: _Basis, in_basis: np.ndarray, tol: float) -> None:
    """Pivot zero-level artificials out of the basis where possible.

    An artificial whose row of ``B^-1 A_s^T`` is all zero marks a redundant
    equation and stays basic at level zero.
    """
    m = basis.m
    for i in range(basis.n):
        if basis.cols[i] < m:
            continue
        B = basis.matrix()
        row = np.linalg.solve(B.T, np.eye(basis.n)[i])
        vals = basis.As @ row
        vals[in_basis[:m]] = 0.0
        cand = np.flatnonzero(np.abs(vals) > 1e-7)
        if cand.size == 0:
            continue
        j = int(cand[np.argmax(np.abs(vals[cand]))])
        in_basis[basis.cols[i]] = False
        basis.cols[i] = j
        in_basis[j] = True
