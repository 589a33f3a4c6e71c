"""Least doubling constant of the path graph ``L_n``.

Path vertices are 1-based in this module's formulas (``mu(1)`` is
``weights[0]``).  For symmetric measures with local constant below 3 the
doubling constant is the max of three quotient families: ``M1`` (balls
around the end vertex), ``M2`` (balls whose numerator reaches the middle)
and the local constant.  Minimizers make ``M1`` and the local quotient at
every interior vertex equal, which turns the problem into a three-term
recurrence in the weights plus one scalar equation in ``C``.
"""
from __future__ import annotations

import functools
import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import build_named, distance_table
from .measures import Measure, MeasureError, doubling_constant
from .roots import bracketed_root
from .spectral import c0_path_closed_form

log = logging.getLogger(__name__)

GRID_POINTS = 2000


class PathSolverError(RuntimeError):
    pass


class RefinementWarning(UserWarning):
    pass


def _prefix(mu) -> np.ndarray:
    w = np.asarray(getattr(mu, "weights", mu), dtype=float)
    return np.concatenate([[0.0], np.cumsum(w)])


def _ball(prefix: np.ndarray, j: int, r: int) -> float:
    """Mass of ``B(j, r)`` on the path, ``j`` 1-based."""
    n = len(prefix) - 1
    return prefix[min(n, j + r)] - prefix[max(0, j - r - 1)]


@functools.lru_cache(maxsize=256)
def _path_index(n: int):
    return distance_table(build_named("path", n))


def _middle(n: int) -> int:
    return (n + 1) // 2


def m1_range(n: int) -> range:
    return range(math.ceil((n - 2) / 3))


def m2_index_set(n: int) -> list[tuple[int, int]]:
    """Pairs ``(j, k)`` of the ``M2`` family, in lexicographic order.

    ``1 < j < m`` and ``(m-j-1)/2 < k < min((j-2)/2, ceil((n-2j)/3), m-j)``
    with ``m = ceil(n/2)``; bounds are compared in integers (times 2).
    """
    m = _middle(n)
    pairs = []
    for j in range(2, m):
        upper2 = min(j - 2, 2 * math.ceil((n - 2 * j) / 3), 2 * (m - j))
        for k in range(0, m):
            if m - j - 1 < 2 * k < upper2:
                pairs.append((j, k))
    return pairs


def _check_path_measure(mu, n_min: int = 3) -> Measure:
    mu = mu if isinstance(mu, Measure) else Measure(mu)
    if len(mu) < n_min:
        raise MeasureError(f"path measure needs n >= {n_min}")
    return mu


def m1(mu) -> tuple[float, int]:
    """``max_k mu(B(1,2k+1)) / mu(B(1,k))`` over ``0 <= k < ceil((n-2)/3)``."""
    mu = _check_path_measure(mu)
    p = _prefix(mu)
    best, arg = -math.inf, -1
    for k in m1_range(len(mu)):
        q = _ball(p, 1, 2 * k + 1) / _ball(p, 1, k)
        if q > best:
            best, arg = q, k
    return best, arg


def m2(mu) -> tuple[float, tuple[int, int]] | None:
    """Max over the ``M2`` index set, or None when the set is empty."""
    mu = _check_path_measure(mu)
    p = _prefix(mu)
    best = None
    for j, k in m2_index_set(len(mu)):
        q = _ball(p, j, 2 * k + 1) / _ball(p, j, k)
        if best is None or q > best[0]:
            best = (q, (j, k))
    return best


def path_local_constant(mu) -> tuple[float, int]:
    """Local constant with its 1-based witness vertex."""
    mu = _check_path_measure(mu, n_min=2)
    p = _prefix(mu)
    w = mu.weights
    ratios = [_ball(p, j, 1) / w[j - 1] for j in range(1, len(mu) + 1)]
    j = int(np.argmax(ratios))
    return float(ratios[j]), j + 1


@dataclass(frozen=True)
class PathQuotients:
    m1: tuple[float, int]
    m2: tuple[float, tuple[int, int]] | None
    c0: tuple[float, int]
    c: float
    applicable: bool  # local constant < 3, the decomposition hypothesis
    equality: bool

    @property
    def m2_value(self) -> float:
        return 0.0 if self.m2 is None else self.m2[0]


def decompose(mu, rtol: float = 1e-12) -> PathQuotients:
    """Compare the full doubling constant with ``max(M1, M2, C0)``."""
    mu = _check_path_measure(mu)
    if not mu.is_symmetric():
        raise MeasureError("decomposition needs a symmetric measure")
    n = len(mu)
    q1 = m1(mu)
    q2 = m2(mu)
    q0 = path_local_constant(mu)
    c = doubling_constant(_path_index(n), mu).c_mu
    applicable = q0[0] < 3.0
    best = max(q1[0], 0.0 if q2 is None else q2[0], q0[0])
    equality = applicable and abs(c - best) < rtol * c
    return PathQuotients(q1, q2, q0, c, applicable, equality)


# --- minimizer equations -------------------------------------------------


def recurrence_coefficients(n: int, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Arrays ``A, B`` with ``mu(j) = A[j] + B[j] * mu(2)`` for ``1 <= j <= m+1``.

    Built from ``mu(1) = 1`` and the interior equations
    ``mu(j+1) = (c-1) mu(j) - mu(j-1)``; index 0 is unused.  In Chebyshev
    terms ``B[j] = U_{j-2}((c-1)/2)`` and ``A[j] = -U_{j-3}((c-1)/2)``.
    """
    c = np.asarray(c, dtype=float)
    m = _middle(n)
    a = np.zeros((m + 2,) + c.shape)
    b = np.zeros((m + 2,) + c.shape)
    a[1] = 1.0
    b[2] = 1.0
    for j in range(2, m + 1):
        a[j + 1] = (c - 1.0) * a[j] - a[j - 1]
        b[j + 1] = (c - 1.0) * b[j] - b[j - 1]
    return a, b


def _scaled_weights(n: int, c: float) -> tuple[np.ndarray, float]:
    """Weights times the boundary determinant ``D(c)``, and ``D(c)``.

    The mirror condition ``mu(m+1) = mu(m)`` (n even) or ``mu(m-1)``
    (n odd) is linear in ``s = mu(2)``: ``s = N / D``.  Multiplying through
    by ``D`` keeps every quantity polynomial in ``c`` (no poles).
    """
    m = _middle(n)
    a, b = recurrence_coefficients(n, c)
    mirror = m if n % 2 == 0 else m - 1
    d = b[m + 1] - b[mirror]
    num = -(a[m + 1] - a[mirror])
    half = a[1 : m + 1] * d + b[1 : m + 1] * num
    full = np.concatenate([half, half[: n - m][::-1]])
    return full, d


def _m1_residual_scaled(n: int, k: int, c):
    """``D(c) * (mu(B(1,2k+1)) - c mu(B(1,k)))``; accepts an array of levels."""
    w, _ = _scaled_weights(n, c)
    return w[: 2 * k + 2].sum(axis=0) - np.asarray(c) * w[: k + 1].sum(axis=0)


def _scaled_scale(n: int, k: int, c: float) -> float:
    w, _ = _scaled_weights(n, c)
    return float(np.abs(w[: 2 * k + 2]).sum() + c * np.abs(w[: k + 1]).sum())


def weights_at(n: int, c: float) -> np.ndarray | None:
    """Symmetric weights with ``mu(1) = 1`` solving the interior equations at level ``c``."""
    w, d = _scaled_weights(n, c)
    if d == 0.0 or w[0] == 0.0:
        return None
    return w / w[0]


@dataclass
class PathMinimizerResult:
    n: int
    k_star: int | None
    c: float
    weights: Measure
    boundary_residual: float
    m1_residual: float
    validated: bool
    c_full: float
    scan_log: list[dict] = field(default_factory=list)
    global_estimate: float | None = None


def _residuals(w: np.ndarray, c: float, k: int | None) -> tuple[float, float]:
    n = len(w)
    p = _prefix(w)
    m = _middle(n)
    boundary = float(abs(_ball(p, m, 1) / w[m - 1] - c))
    if k is None:
        return boundary, 0.0
    return boundary, float(abs(_ball(p, 1, 2 * k + 1) / _ball(p, 1, k) - c))


def _candidate(n: int, k: int | None, c: float, w: np.ndarray, tol: float) -> PathMinimizerResult:
    mu = Measure(w)
    c = float(c)
    c_full = doubling_constant(_path_index(n), mu).c_mu
    boundary, m1res = _residuals(w, c, k)
    validated = abs(c_full - c) <= 100 * tol
    return PathMinimizerResult(n, k, c, mu, boundary, m1res, validated, c_full)


def _admissible(w: np.ndarray | None, n: int) -> bool:
    if w is None or not np.all(np.isfinite(w)) or np.any(w <= 0):
        return False
    half = w[: _middle(n)]
    return bool(np.all(np.diff(half) > 0))


def solve_system(n: int, k: int, tol: float = 1e-12) -> PathMinimizerResult | None:
    """Solve the minimizer equations for a given ``M1`` radius ``k``.

    Roots of the ``M1`` residual are located on a grid over
    ``[1 + 2cos(pi/(n+1)), 3)`` and refined by bracketed secant/bisection.
    Returns the root with positive, strictly increasing weights that
    validates with the smallest level (or the smallest admissible one if
    none validates), None when no root is admissible.
    """
    if n < 3:
        raise ValueError("the minimizer system needs n >= 3")
    if k not in m1_range(n):
        raise ValueError(f"k must lie in 0..{len(m1_range(n)) - 1} for n={n}")
    c0 = c0_path_closed_form(n)

    def h(c):
        return float(_m1_residual_scaled(n, k, c))

    roots = []
    if abs(h(c0)) <= 1e-13 * _scaled_scale(n, k, c0):
        roots.append(c0)
    lo, hi = c0 + 1e-12, 3.0 - 1e-12
    grid = np.linspace(lo, hi, GRID_POINTS)
    vals = _m1_residual_scaled(n, k, grid)
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(
                bracketed_root(
                    h, float(grid[i]), float(grid[i + 1]),
                    fa=float(vals[i]), fb=float(vals[i + 1]), xtol=tol,
                )
            )

    candidates = []
    for c in roots:
        w = weights_at(n, c)
        if _admissible(w, n):
            candidates.append(_candidate(n, k, c, w, tol))
    if not candidates:
        return None
    validated = [r for r in candidates if r.validated]
    pool = validated or candidates
    return min(pool, key=lambda r: r.c)


def heuristic_radius(n: int) -> int:
    """Empirical ``M1`` radius ``ceil((n - 8.6) / 5.6)`` of the path minimizer."""
    return math.ceil((n - 8.6) / 5.6)


def scan_order(n: int) -> list[int]:
    k0 = heuristic_radius(n)
    return sorted(m1_range(n), key=lambda k: (abs(k - k0), k))


def least_doubling_path(
    n: int, tol: float = 1e-12, cross_check: bool | None = None
) -> PathMinimizerResult:
    """``C_{L_n}`` and a symmetric minimizer normalised to ``mu(1) = 1``.

    For ``n <= 8`` the answer is the closed form with the sine measure.
    Otherwise every ``M1`` radius is tried (nearest the heuristic first) and
    the smallest validated level wins.  ``cross_check`` (default: on for
    ``n <= 30``) also runs the general LP bisection.
    """
    if n < 2:
        raise ValueError("path solver needs n >= 2")
    if n <= 8:
        j = np.arange(1, n + 1)
        w = np.sin(j * np.pi / (n + 1))
        result = _candidate(n, None, c0_path_closed_form(n), w / w[0], tol)
    else:
        scan = []
        best = None
        for k in scan_order(n):
            r = solve_system(n, k, tol)
            scan.append(
                {
                    "k": k,
                    "c": None if r is None else r.c,
                    "c_full": None if r is None else r.c_full,
                    "validated": bool(r is not None and r.validated),
                }
            )
            if r is not None and r.validated and (best is None or r.c < best.c):
                best = r
        if best is None:
            raise PathSolverError(
                f"no validated solution of the minimizer equations for n={n}; "
                "use the general bisection optimizer (least_doubling) instead"
            )
        best.scan_log = scan
        result = best

    if cross_check is None:
        cross_check = n <= 30
    if cross_check:
        from .optimizer import least_doubling

        est = least_doubling(_path_index(n)).c_estimate
        result.global_estimate = est
        if abs(est - result.c) > 1e-6:
            log.warning("path solver %.12f disagrees with LP bisection %.12f", result.c, est)
    return result


def refine_minimizer(mu, c: float) -> Measure:
    """Push a symmetric minimizer to equality at the middle vertex and at vertex 2.

    The middle weight(s) drop by ``eps = (c mu(m) - mu(B(m,1))) / (c - d)``,
    ``d = 1`` for odd ``n`` and 2 for even ``n`` (both middle vertices move),
    then ``theta = c nu(2) - nu(B(2,1))`` is added to both end vertices.
    If a guard fails the input is returned unchanged with a
    ``RefinementWarning``.
    """
    mu = _check_path_measure(mu)
    if not mu.is_symmetric():
        raise MeasureError("refinement needs a symmetric measure")
    n = len(mu)
    m = _middle(n)
    w = mu.weights.copy()
    d = 2 if n % 2 == 0 else 1
    middles = [m - 1, m] if n % 2 == 0 else [m - 1]

    p = _prefix(w)
    if _ball(p, m, 1) / w[m - 1] < c:
        eps = (c * w[m - 1] - _ball(p, m, 1)) / (c - d)
        if eps >= w[m - 1]:
            warnings.warn("middle perturbation exceeds the middle weight", RefinementWarning)
            return mu
        w[middles] -= eps

    p = _prefix(w)
    if n >= 4 and _ball(p, 2, 1) / w[1] < c:
        theta = c * w[1] - _ball(p, 2, 1)
        w[0] += theta
        w[-1] += theta
    if np.any(w <= 0):
        warnings.warn("refinement produced a nonpositive weight", RefinementWarning)
        return mu
    return Measure(w)


# --- certifying polynomials ------------------------------------------------

# Highest degree first.
CERTIFYING_POLYNOMIALS = {
    9: [1, -5, 7, -3, 1],
    10: [1, -3, 0, 1, -1],
    51: [
        1, -25, 276, -1747, 6808, -15708, 14861, 24091, -92682, 87057, 77858,
        -234588, 102327, 199171, -225057, -41798, 165000, -36531, -58763,
        25759, 10011, -6268, -646, 597, 6, -12, 0,
    ],
}


def poly_residual(n: int, c: float) -> float:
    """``|p(c)| / sum_i |coef_i c^i|`` for the certifying polynomial of ``L_n``."""
    if n not in CERTIFYING_POLYNOMIALS:
        raise ValueError(f"no certifying polynomial for n={n}; known: {sorted(CERTIFYING_POLYNOMIALS)}")
    coefs = CERTIFYING_POLYNOMIALS[n]
    deg = len(coefs) - 1
    terms = [cf * c ** (deg - i) for i, cf in enumerate(coefs)]
    value = math.fsum(terms)
    return abs(value) / math.fsum(abs(t) for t in terms)
