"""Positive measures on graphs and their doubling constants."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .graph import BallIndex

MEASURE_KINDS = ("counting", "sine", "lambda_alpha", "explicit")


class MeasureError(ValueError):
    pass


class Measure:
    """Strictly positive weights, one per vertex (``weights[j-1]`` is ``a_j = mu(j)``)."""

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = np.array(weights, dtype=float).reshape(-1)
        if w.size == 0:
            raise MeasureError("a measure needs at least one weight")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise MeasureError("weights must be finite and strictly positive")
        w.setflags(write=False)
        self._w = w

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def __len__(self):
        return self._w.size

    def __getitem__(self, i):
        return self._w[i]

    def __iter__(self):
        return iter(self._w.tolist())

    def __repr__(self):
        return f"Measure({self._w.tolist()!r})"

    def __eq__(self, other):
        if not isinstance(other, Measure):
            return NotImplemented
        return np.array_equal(self._w, other._w)

    def __add__(self, other: "Measure") -> "Measure":
        return Measure(self._w + other._w)

    def scaled(self, alpha: float) -> "Measure":
        return Measure(alpha * self._w)

    def normalized(self, how: str = "first") -> "Measure":
        """Rescale so the first weight (``how="first"``) or the largest (``"max"``) is 1."""
        ref = self._w[0] if how == "first" else self._w.max()
        return Measure(self._w / ref)

    @property
    def total(self) -> float:
        return float(self._w.sum())

    def is_symmetric(self, rtol: float = 1e-12) -> bool:
        return bool(np.allclose(self._w, self._w[::-1], rtol=rtol, atol=0.0))

    def tolist(self) -> list[float]:
        return self._w.tolist()


def make_measure(kind: str, n: int, *, alpha: float | None = None, weights=None) -> Measure:
    """Named measures on ``n`` vertices.

    ``sine`` puts ``sin(j*pi/(n+1))`` on path vertex ``j``; ``lambda_alpha``
    puts ``alpha`` on the first vertex and 1 elsewhere, for ``alpha`` in
    ``[1/2, 1]``.
    """
    if n < 1:
        raise MeasureError("n must be positive")
    if kind == "counting":
        return Measure(np.ones(n))
    if kind == "sine":
        j = np.arange(1, n + 1)
        return Measure(np.sin(j * np.pi / (n + 1)))
    if kind == "lambda_alpha":
        if alpha is None or not 0.5 <= alpha <= 1.0:
            raise MeasureError(f"lambda_alpha needs alpha in [1/2, 1], got {alpha}")
        w = np.ones(n)
        w[0] = alpha
        return Measure(w)
    if kind == "explicit":
        if weights is None or len(weights) != n:
            raise MeasureError(f"explicit measure needs exactly {n} weights")
        return Measure(weights)
    raise MeasureError(f"unknown measure kind {kind!r}")


def parse_measure_text(text: str) -> Measure:
    """Read one positive number per line, or a single-line JSON array."""
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            values = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise MeasureError(f"bad JSON measure: {exc}") from None
        if not isinstance(values, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in values
        ):
            raise MeasureError("JSON measure must be an array of numbers")
    else:
        values = []
        for lineno, line in enumerate(stripped.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise MeasureError(f"line {lineno}: not a number: {line!r}") from None
    return Measure(values)


def symmetrize(mu: Measure) -> Measure:
    """Path symmetrization ``mu(j) + mu(n+1-j)``."""
    w = mu.weights
    return Measure(w + w[::-1])


def perturb(mu: Measure, i: int, theta: float) -> Measure:
    """Return ``mu`` with ``theta`` added to the weight of vertex ``i`` (0-based)."""
    w = mu.weights.copy()
    if w[i] + theta <= 0:
        raise MeasureError(f"perturbation makes weight {i} nonpositive")
    w[i] += theta
    return Measure(w)


@dataclass(frozen=True)
class QuotientWitness:
    center: int
    k: int
    numerator: float
    denominator: float

    @property
    def ratio(self) -> float:
        return self.numerator / self.denominator


@dataclass(frozen=True)
class DoublingReport:
    c_mu: float
    c_mu0: float
    witness: QuotientWitness | None
    witness0: int | None
    table: list[QuotientWitness] | None = field(default=None, repr=False)


def max_radius(diameter: int) -> int:
    """Largest radius k that can give a nontrivial quotient: ceil((diam-1)/2)."""
    return max(0, math.ceil((diameter - 1) / 2))


def quotient_matrix(idx: BallIndex, weights) -> tuple[np.ndarray, np.ndarray]:
    """Numerators and denominators ``mu(B(x, 2k+1))``, ``mu(B(x, k))`` indexed ``[x, k]``."""
    masses = idx.ball_masses(weights)
    ks = np.arange(max_radius(idx.diameter) + 1)
    outer = np.minimum(2 * ks + 1, idx.diameter)
    return masses[:, outer], masses[:, ks]


def local_constant(idx: BallIndex, mu: Measure) -> tuple[float, int]:
    """``max_x mu(B(x,1)) / mu(x)`` and the smallest vertex attaining it."""
    w = mu.weights
    masses = idx.ball_masses(w)
    outer = masses[:, min(1, idx.diameter)]
    ratios = outer / masses[:, 0]
    x = int(np.argmax(ratios))
    return float(ratios[x]), x


def doubling_constant(idx: BallIndex, mu: Measure, table: bool = False) -> DoublingReport:
    """Doubling constant over closed balls with integer radii.

    Only ``k <= ceil((diam-1)/2)`` is scanned; beyond that both balls are
    the whole graph.  Ties go to the lexicographically smallest ``(x, k)``.
    """
    if len(mu) != idx.n:
        raise MeasureError(f"measure has {len(mu)} weights, graph has {idx.n} vertices")
    if idx.n == 1:
        return DoublingReport(1.0, 1.0, None, None, [] if table else None)
    num, den = quotient_matrix(idx, mu.weights)
    q = num / den
    flat = int(np.argmax(q))  # first maximum in row-major order
    x, k = divmod(flat, q.shape[1])
    witness = QuotientWitness(x, k, float(num[x, k]), float(den[x, k]))
    c0, x0 = local_constant(idx, mu)
    rows = None
    if table:
        rows = [
            QuotientWitness(i, j, float(num[i, j]), float(den[i, j]))
            for i in range(q.shape[0])
            for j in range(q.shape[1])
        ]
    return DoublingReport(witness.ratio, c0, witness, x0, rows)
