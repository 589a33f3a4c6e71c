"""Largest adjacency eigenvalue, Perron vector and Chebyshev polynomials.

The local constant of a graph is ``1 + lambda_1(A)``, attained by the Perron
vector; for the path ``L_n`` this is ``1 + 2 cos(pi / (n + 1))``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sps
import scipy.sparse.linalg as spla

from .graph import Graph
from .measures import Measure


class SpectralError(RuntimeError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class SpectralResult:
    lambda1: float
    perron: Measure
    iterations: int
    residual: float


def _adjacency(g: Graph) -> sps.csr_matrix:
    rows = [u for u in range(g.n) for _ in g.adjacency[u]]
    cols = [v for u in range(g.n) for v in g.adjacency[u]]
    return sps.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))


def _finish(a, x, lam, iterations, tol) -> SpectralResult:
    x = x / x.max()
    residual = float(np.abs(a @ x - lam * x).max())
    if np.any(x <= 0):
        raise SpectralError("iterate lost positivity", residual, iterations)
    return SpectralResult(float(lam), Measure(x), iterations, residual)


def power_iteration(
    g: Graph, tol: float = 1e-12, max_iter: int = 100_000, method: str = "shift-invert"
) -> SpectralResult:
    """Perron root and vector of the adjacency matrix.

    Both methods start from the uniform vector and stop once successive
    Rayleigh quotients differ by less than ``tol``.

    ``method="power"`` iterates on ``A + I`` (the shift keeps bipartite
    graphs from oscillating).  Convergence is linear in the gap ratio,
    which is hopeless for long paths.

    ``method="shift-invert"`` (default) iterates ``x <- (s I - A)^{-1} x``
    with ``s`` the Collatz-Wielandt upper bound ``max_i (Ax)_i / x_i``.
    Since ``s >= lambda_1`` the resolvent stays entrywise positive, and the
    shift closes in on ``lambda_1`` so convergence is superlinear.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = _adjacency(g)
    n = g.n
    x = np.full(n, 1.0 / math.sqrt(n))
    if n == 1:
        return SpectralResult(0.0, Measure([1.0]), 0, 0.0)

    lam = float(x @ (a @ x))
    if method == "power":
        b = a + sps.identity(n, format="csr")
        for it in range(1, max_iter + 1):
            y = b @ x
            x = y / np.linalg.norm(y)
            new = float(x @ (a @ x))
            if abs(new - lam) < tol:
                return _finish(a, x, new, it, tol)
            lam = new
        res = float(np.abs(a @ x - lam * x).max())
        raise SpectralError("power iteration did not converge", res, max_iter)
    if method != "shift-invert":
        raise ValueError(f"unknown method {method!r}")

    eye = sps.identity(n, format="csc")
    a_csc = a.tocsc()
    for it in range(1, max_iter + 1):
        ax = a @ x
        shift = max(float(np.max(ax / x)), lam + 1e-13 * (1.0 + abs(lam)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            y = spla.spsolve(shift * eye - a_csc, x)
        if not np.all(np.isfinite(y)) or np.any(y <= 0):
            # shift hit lambda_1 to working precision; x is already converged
            return _finish(a, x, lam, it, tol)
        x = y / np.linalg.norm(y)
        new = float(x @ (a @ x))
        if abs(new - lam) < tol:
            return _finish(a, x, new, it, tol)
        lam = new
    res = float(np.abs(a @ x - lam * x).max())
    raise SpectralError("shift-invert iteration did not converge", res, max_iter)


def c0_spectral(g: Graph, tol: float = 1e-12) -> float:
    """Least local constant ``1 + lambda_1(A_G)``."""
    return 1.0 + power_iteration(g, tol=tol).lambda1


def c0_path_closed_form(n: int) -> float:
    if n < 2:
        raise ValueError("closed form needs n >= 2")
    return 1.0 + 2.0 * math.cos(math.pi / (n + 1))


def chebyshev_u(k: int, x: float) -> float:
    """Chebyshev polynomial of the second kind by forward recurrence."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = 1.0, 2.0 * x
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur
