"""Bracketed scalar root finding: bisection safeguarding secant steps."""
from __future__ import annotations

from typing import Callable


class RootFindingError(RuntimeError):
    pass


def bracketed_root(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    fa: float | None = None,
    fb: float | None = None,
    xtol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` in ``[a, b]`` given ``f(a) * f(b) <= 0``.

    Each step tries the secant through the bracket ends and falls back to
    bisection when the secant point leaves the middle of the bracket or the
    bracket failed to halve on the previous step.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise RootFindingError(f"no sign change on [{a!r}, {b!r}]")

    width = b - a
    for _ in range(max_iter):
        if b - a <= xtol:
            return a if abs(fa) <= abs(fb) else b
        x = b - fb * (b - a) / (fb - fa)
        margin = 0.05 * (b - a)
        if not (a + margin < x < b - margin) or (b - a) > 0.5 * width:
            x = 0.5 * (a + b)
        width = b - a
        fx = f(x)
        if fx == 0.0:
            return x
        if fa * fx < 0:
            b, fb = x, fx
        else:
            a, fa = x, fx
    raise RootFindingError(
        f"bracket [{a!r}, {b!r}] still wider than {xtol:g} after {max_iter} steps"
    )
