"""Least doubling constant of a finite graph by bisection on the level.

For a fixed level ``t`` the condition ``C_mu <= t`` is the finite system of
linear inequalities ``mu(B(x, 2k+1)) - t mu(B(x, k)) <= 0``.  Scaling
invariance lets us replace positivity by ``mu >= 1``, so each level is a
linear feasibility problem and the least constant is found by bisection.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .graph import BallIndex
from .lp import Phase1Result, solve_phase1
from .measures import Measure, doubling_constant, max_radius

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BisectionResult:
    c_estimate: float
    bracket: tuple[float, float]
    minimizer: Measure
    iterations: int
    constraint_count: int


def ball_constraints(idx: BallIndex) -> tuple[np.ndarray, np.ndarray]:
    """0/1 incidence rows of outer balls ``B(x, 2k+1)`` and inner balls ``B(x, k)``.

    Pairs with equal balls (quotient identically 1) are dropped, as are
    repeated pairs.
    """
    n = idx.n
    seen = set()
    outer_rows, inner_rows = [], []
    for x in range(n):
        for k in range(max_radius(idx.diameter) + 1):
            inner_size = idx.ball_size(x, k)
            outer_size = idx.ball_size(x, 2 * k + 1)
            if inner_size == outer_size:
                continue
            outer = np.zeros(n)
            inner = np.zeros(n)
            outer[idx.ball(x, 2 * k + 1)] = 1.0
            inner[idx.ball(x, k)] = 1.0
            key = (outer.tobytes(), inner.tobytes())
            if key in seen:
                continue
            seen.add(key)
            outer_rows.append(outer)
            inner_rows.append(inner)
    if not outer_rows:
        return np.zeros((0, n)), np.zeros((0, n))
    return np.array(outer_rows), np.array(inner_rows)


def _check_level(idx: BallIndex, t: float, constraints=None) -> Phase1Result:
    outer, inner = ball_constraints(idx) if constraints is None else constraints
    g = outer - t * inner
    # mu = 1 + y with y >= 0
    h = -g.sum(axis=1)
    return solve_phase1(g, h)


def feasible_at(idx: BallIndex, t: float, constraints=None) -> Measure | None:
    """A measure with doubling constant at most ``t`` and all weights >= 1, or None.

    None is only returned when the phase-1 optimum is positive, i.e. no
    measure meets the level (up to the oracle's tolerance).  Numerical
    breakdown raises ``FeasibilityError`` instead.
    """
    if t < 1:
        raise ValueError("level t must be >= 1")
    res = _check_level(idx, t, constraints)
    if not res.feasible:
        return None
    return Measure(1.0 + res.y)


def least_doubling(
    idx: BallIndex, tol: float = 1e-10, max_iter: int = 60
) -> BisectionResult:
    """Bisect the level over ``[2, C_counting]`` down to width ``tol``."""
    if idx.n < 2:
        raise ValueError("least doubling constant needs at least two vertices")
    if tol <= 0:
        raise ValueError("tol must be positive")
    constraints = ball_constraints(idx)
    counting = Measure(np.ones(idx.n))
    lo = 2.0
    hi = doubling_constant(idx, counting).c_mu
    best = counting
    if feasible_at(idx, lo, constraints) is not None:
        hi = lo
        best = feasible_at(idx, lo, constraints)
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        mu = feasible_at(idx, mid, constraints)
        if mu is None:
            lo = mid
        else:
            hi = mid
            best = mu
        iterations += 1
    if hi - lo > tol:
        log.warning("bisection stopped at width %.3e after %d steps", hi - lo, iterations)
    return BisectionResult(
        c_estimate=0.5 * (lo + hi),
        bracket=(lo, hi),
        minimizer=best,
        iterations=iterations,
        constraint_count=len(constraints[0]),
    )
