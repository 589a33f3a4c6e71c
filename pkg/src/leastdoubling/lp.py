"""Dense simplex for linear feasibility problems ``G y <= h, y >= 0``.

The phase-1 problem

    P:  minimize e  subject to  G y - e <= h,  y >= 0,  e >= 0

is always feasible, and ``G y <= h`` is solvable iff its optimum is 0.  We
solve the dual

    D:  maximize -h.z  subject to  -G^T z <= 0,  sum(z) <= 1,  z >= 0

whose slack basis is feasible from the start, so no artificial variables
are needed and the tableau has only ``n + 1`` rows however many
constraints ``G`` has.  An optimal ``z`` with ``-h.z > 0`` is a Farkas
certificate of infeasibility; the primal ``(y, e)`` is recovered from the
final basis by complementary slackness.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class FeasibilityError(RuntimeError):
    """The simplex failed numerically (distinct from a certified infeasible answer)."""


@dataclass(frozen=True)
class Phase1Result:
    feasible: bool
    y: np.ndarray  # primal point of P
    infeasibility: float  # optimal e of P
    certificate: np.ndarray  # optimal z of D
    pivots: int


def _choose_entering(cost: np.ndarray, eps: float, bland: bool) -> int | None:
    candidates = np.flatnonzero(cost < -eps)
    if candidates.size == 0:
        return None
    if bland:
        return int(candidates[0])
    return int(candidates[np.argmin(cost[candidates])])


def _choose_leaving(col: np.ndarray, rhs: np.ndarray, basis: np.ndarray, eps: float) -> int | None:
    rows = np.flatnonzero(col > eps)
    if rows.size == 0:
        return None
    ratios = rhs[rows] / col[rows]
    best = ratios.min()
    tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
    # Bland's rule among ties: leave the smallest basic variable index
    return int(tied[np.argmin(basis[tied])])


def solve_phase1(
    g: np.ndarray,
    h: np.ndarray,
    *,
    feas_tol: float = 1e-11,
    perturbation: float = 1e-9,
    max_pivots: int | None = None,
) -> Phase1Result:
    """Decide ``G y <= h, y >= 0`` via the dual of the phase-1 problem.

    Feasible iff the recovered phase-1 optimum is at most ``feas_tol``.
    Raises FeasibilityError if the pivot budget runs out or the recovered
    primal/dual pair fails the optimality checks.
    """
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    m, n = g.shape
    rows = n + 1
    cols = m + rows
    if max_pivots is None:
        max_pivots = 50 * cols

    # Columns: z_0..z_{m-1}, then slacks u_0..u_n.  Last tableau column is the rhs.
    tab = np.zeros((rows, cols + 1))
    tab[:n, :m] = -g.T
    tab[n, :m] = 1.0
    tab[:, m:cols] = np.eye(rows)
    tab[n, -1] = 1.0
    # Deterministic rhs perturbation breaks the heavy degeneracy of the slack
    # start (all-zero rhs); the answer is re-derived on unperturbed data below.
    rng = np.random.default_rng(12345)
    tab[:, -1] += perturbation * (1.0 + rng.random(rows))
    cost = np.concatenate([h, np.zeros(rows)])  # minimise h.z
    reduced = cost.copy()
    basis = np.arange(m, cols)

    scale = max(1.0, float(np.abs(g).max(initial=0.0)), float(np.abs(h).max(initial=0.0)))
    eps_cost = 1e-12 * scale
    eps_piv = 1e-9
    pivots = 0
    stall = 0
    while True:
        entering = _choose_entering(reduced, eps_cost, bland=stall > 20)
        if entering is None:
            break
        leaving = _choose_leaving(tab[:, entering], tab[:, -1], basis, eps_piv)
        if leaving is None:
            raise FeasibilityError("dual problem reported unbounded; it is bounded by construction")
        if pivots >= max_pivots:
            raise FeasibilityError(f"simplex exceeded {max_pivots} pivots")
        stall = stall + 1 if tab[leaving, -1] <= 1e-3 * perturbation else 0
        piv_row = tab[leaving] / tab[leaving, entering]
        col = tab[:, entering].copy()
        tab -= np.outer(col, piv_row)
        tab[leaving] = piv_row
        step = reduced[entering]
        reduced = reduced - step * piv_row[:cols]
        basis[leaving] = entering
        pivots += 1

    z, y, e = _recover(g, h, basis, tab, reduced, m, n)
    _check_optimality(g, h, z, y, e, scale)
    feasible = e <= feas_tol
    return Phase1Result(feasible, y, float(e), z, pivots)


def _recover(g, h, basis, tab, reduced, m, n):
    """Re-solve the basis equations on the original data to shed pivoting drift."""
    rows = n + 1
    full = np.zeros((rows, m + rows))
    full[:n, :m] = -g.T
    full[n, :m] = 1.0
    full[:, m:] = np.eye(rows)
    rhs = np.zeros(rows)
    rhs[n] = 1.0

    z = np.zeros(m)
    try:
        xb = np.linalg.solve(full[:, basis], rhs)
    except np.linalg.LinAlgError:
        xb = tab[:, -1]
    is_z = basis < m
    z[basis[is_z]] = np.maximum(xb[is_z], 0.0)

    # Primal (y, e): tight rows for basic z, zero for primal vars whose dual slack is basic.
    slack_basic = set((basis[~is_z] - m).tolist())
    free = [i for i in range(rows) if i not in slack_basic]
    tight = basis[is_z]
    v = np.maximum(reduced[m:], 0.0)  # tableau estimate, used if the solve is singular
    if len(free) == len(tight) and len(free) > 0:
        # row r of P: G_r y - e = h_r
        a = np.hstack([g[tight], -np.ones((len(tight), 1))])[:, free]
        try:
            sol = np.linalg.solve(a, h[tight])
            v = np.zeros(rows)
            v[free] = sol
        except np.linalg.LinAlgError:
            pass
    elif len(free) == 0:
        v = np.zeros(rows)
    v = np.maximum(v, 0.0)
    y, e = v[:n], v[n]
    # e must cover every row violation of the recovered y
    e = max(e, float(np.max(g @ y - h, initial=0.0)))
    return z, y, e


def _check_optimality(g, h, z, y, e, scale):
    dual_obj = float(-h @ z)
    viol = float(np.max(-(g.T @ z), initial=0.0))
    gap = abs(e - max(dual_obj, 0.0))
    if viol > 1e-8 * scale or gap > 1e-7 * scale:
        raise FeasibilityError(
            f"simplex optimality check failed (dual violation {viol:.2e}, gap {gap:.2e})"
        )
