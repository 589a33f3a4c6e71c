"""Finite windows of the infinite paths Z and N.

A window only reports quotients whose outer ball ``B(x, 2k+1)`` lies
entirely inside it, so every reported value is a genuine quotient of the
infinite measure.  On N the left end is a real boundary, so balls may
touch vertex 1; only the right end truncates.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import Measure, MeasureError, QuotientWitness

BOUND = 3.0
SLACK = 1e-12


@dataclass(frozen=True)
class WindowReport:
    window: tuple[int, int]  # inclusive vertex range in line coordinates
    max_quotient: float
    witness: QuotientWitness  # center in line coordinates
    all_quotients_bounded: bool  # max_quotient <= 3 + 1e-12
    local_constant: float  # k = 0 quotients only
    local_witness: int
    quotient_count: int


def _scan(weights: np.ndarray, first: int, lo_limit: int | None) -> WindowReport:
    """Quotients over a window whose leftmost vertex has label ``first``.

    ``lo_limit`` is the label of the true left end of the line (1 on N) or
    None when the line continues to the left (Z).
    """
    n = len(weights)
    prefix = np.concatenate([[0.0], np.cumsum(weights)])
    best = None
    best0 = None
    count = 0
    for i in range(n):
        label = first + i
        k = 0
        while True:
            reach = 2 * k + 1
            if i + reach >= n:
                break
            left_outer = i - reach
            if left_outer < 0:
                if lo_limit is None:
                    break
                left_outer = 0
            left_inner = max(i - k, 0)
            num = prefix[i + reach + 1] - prefix[left_outer]
            den = prefix[i + k + 1] - prefix[left_inner]
            count += 1
            q = num / den
            if best is None or q > best[0]:
                best = (q, QuotientWitness(label, k, float(num), float(den)))
            if k == 0 and (best0 is None or q > best0[0]):
                best0 = (q, label)
            k += 1
    if best is None:
        raise MeasureError("window too small: no ball fits inside it")
    q, w = best
    return WindowReport(
        window=(first, first + n - 1),
        max_quotient=float(q),
        witness=w,
        all_quotients_bounded=bool(q <= BOUND + SLACK),
        local_constant=float(best0[0]),
        local_witness=best0[1],
        quotient_count=count,
    )


def z_window_report(N: int, mu) -> WindowReport:
    """Scan ``mu`` on the vertices ``-N..N`` of Z (``weights[i]`` sits at ``i - N``)."""
    if N < 2:
        raise ValueError("window half-width must be >= 2")
    mu = mu if isinstance(mu, Measure) else Measure(mu)
    if len(mu) != 2 * N + 1:
        raise MeasureError(f"expected {2 * N + 1} weights for N={N}, got {len(mu)}")
    return _scan(mu.weights, -N, None)


def n_window_report(N: int, mu) -> WindowReport:
    """Scan ``mu`` on the vertices ``1..N`` of N."""
    if N < 2:
        raise ValueError("window length must be >= 2")
    mu = mu if isinstance(mu, Measure) else Measure(mu)
    if len(mu) != N:
        raise MeasureError(f"expected {N} weights, got {len(mu)}")
    return _scan(mu.weights, 1, 1)


def counting_z_quotient(k: int) -> float:
    """Counting-measure quotient ``(4k+3)/(2k+1)`` on Z."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (4 * k + 3) / (2 * k + 1)


def lambda_alpha_quotient(alpha: float, j: int, k: int) -> float:
    """Quotient of ``lambda_alpha`` (weight alpha at 1, else 1) on N at center ``j``.

    Exact when ``k >= j - 1`` (both balls reach vertex 1).  Otherwise the
    counting bound ``(4k+3)/(2k+1)`` is returned, which dominates the true
    quotient.
    """
    if not 0.5 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [1/2, 1]")
    if j < 1 or k < 0:
        raise ValueError("need j >= 1 and k >= 0")
    if k >= j - 1:
        return (alpha + j + 2 * k) / (alpha + j + k - 1)
    return counting_z_quotient(k)


def lambda_alpha_weights(alpha: float, N: int) -> Measure:
    if not 0.5 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [1/2, 1]")
    w = np.ones(N)
    w[0] = alpha
    return Measure(w)
