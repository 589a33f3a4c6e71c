"""Finite connected simple graphs, path distances and closed-ball masses.

Vertices are 0-based internally. Files and the command line use 1-based
labels, so vertex ``j`` of the path ``L_n`` is index ``j - 1`` here.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

FAMILIES = ("path", "cycle", "star", "complete")
_MIN_SIZE = {"path": 1, "cycle": 3, "star": 2, "complete": 1}


class GraphError(ValueError):
    """Invalid graph data or construction arguments."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(self.adjacency) != self.n:
            raise GraphError("adjacency must list neighbours for every vertex")
        for v, nbrs in enumerate(self.adjacency):
            if list(nbrs) != sorted(set(nbrs)):
                raise GraphError(f"neighbours of {v} must be sorted and unique")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"vertex {u} out of range")
                if u == v:
                    raise GraphError(f"self-loop at vertex {v}")
                if v not in self.adjacency[u]:
                    raise GraphError(f"edge {{{v}, {u}}} is not symmetric")
        if len(_reachable(self.adjacency, 0)) != self.n:
            raise GraphError("graph is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build from 0-based edges; duplicates and loops are rejected."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1.0
        return a

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines += [f"{u + 1} {v + 1}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def _reachable(adjacency: Sequence[Sequence[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adjacency[v]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def build_named(family: str, n: int) -> Graph:
    """Return the path, cycle, star or complete graph on ``n`` vertices.

    The star's centre is vertex 0.
    """
    if family not in FAMILIES:
        raise GraphError(f"unknown graph family {family!r}; expected one of {FAMILIES}")
    if not isinstance(n, (int, np.integer)) or n < _MIN_SIZE[family]:
        raise GraphError(f"{family} graph needs n >= {_MIN_SIZE[family]}, got {n}")
    n = int(n)
    if family == "path":
        edges = [(j, j + 1) for j in range(n - 1)]
    elif family == "cycle":
        edges = [(j, (j + 1) % n) for j in range(n)]
    elif family == "star":
        edges = [(0, j) for j in range(1, n)]
    else:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return Graph.from_edges(n, edges)


def parse_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format (1-based, ``#`` comments)."""
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty edge list")

    lineno, header = rows[0]
    if len(header) != 2:
        raise ParseError("header must be 'n m'", lineno)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError("header must contain two integers", lineno) from None
    if n < 1 or m < 0:
        raise ParseError("need n >= 1 and m >= 0", lineno)
    if len(rows) - 1 != m:
        raise ParseError(f"header announces {m} edges, found {len(rows) - 1}", lineno)

    nbrs: list[set[int]] = [set() for _ in range(n)]
    for lineno, fields in rows[1:]:
        if len(fields) != 2:
            raise ParseError("edge line must be 'u v'", lineno)
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError("edge endpoints must be integers", lineno) from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"vertex index out of range 1..{n}", lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", lineno)
        if v - 1 in nbrs[u - 1]:
            raise ParseError(f"duplicate edge {u} {v}", lineno)
        nbrs[u - 1].add(v - 1)
        nbrs[v - 1].add(u - 1)

    adjacency = tuple(tuple(sorted(s)) for s in nbrs)
    if len(_reachable(adjacency, 0)) != n:
        raise ParseError("graph is disconnected", rows[-1][0])
    return Graph(n, adjacency)


@dataclass(frozen=True)
class BallIndex:
    """All-pairs distances plus per-centre orderings for ball queries.

    ``order[x]`` lists vertices by ``(dist(x, .), id)`` and
    ``boundary[x, r]`` is ``|B(x, r)|`` for ``0 <= r <= diameter``, so the
    mass of ``B(x, r)`` is a prefix sum of the weights in ``order[x]``.
    """

    graph: Graph
    dist: np.ndarray
    order: np.ndarray
    boundary: np.ndarray
    diameter: int

    @property
    def n(self) -> int:
        return self.graph.n

    def ball_size(self, x: int, r: int) -> int:
        return int(self.boundary[x, min(r, self.diameter)])

    def ball(self, x: int, r: int) -> np.ndarray:
        return self.order[x, : self.ball_size(x, r)]

    def prefix_masses(self, weights) -> np.ndarray:
        """Matrix ``P`` with ``P[x, i]`` the mass of the ``i`` closest vertices to ``x``."""
        w = np.asarray(weights, dtype=float)
        p = np.zeros((self.n, self.n + 1))
        np.cumsum(w[self.order], axis=1, out=p[:, 1:])
        return p

    def ball_masses(self, weights) -> np.ndarray:
        """Matrix ``M`` with ``M[x, r] = mu(B(x, r))`` for ``0 <= r <= diameter``."""
        p = self.prefix_masses(weights)
        return np.take_along_axis(p, self.boundary, axis=1)


def bfs_distances(graph: Graph, source: int) -> list[int]:
    dist = [-1] * graph.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for u in graph.adjacency[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def distance_table(graph: Graph) -> BallIndex:
    n = graph.n
    dist = np.array([bfs_distances(graph, x) for x in range(n)], dtype=np.int64)
    diameter = int(dist.max())
    # lexsort sorts by the last key first: distance, then vertex id
    ids = np.arange(n)
    order = np.array([np.lexsort((ids, dist[x])) for x in range(n)], dtype=np.int64)
    radii = np.arange(diameter + 1)
    boundary = np.array(
        [np.searchsorted(np.sort(dist[x]), radii, side="right") for x in range(n)],
        dtype=np.int64,
    )
    for arr in (dist, order, boundary):
        arr.setflags(write=False)
    return BallIndex(graph, dist, order, boundary, diameter)


def ball_mass(idx: BallIndex, mu, x: int, r: int) -> float:
    """Mass of the closed ball ``B(x, r)``; ``mu`` is a Measure or weight vector."""
    if r < 0:
        raise GraphError("radius must be nonnegative")
    w = np.asarray(getattr(mu, "weights", mu), dtype=float)
    return float(w[idx.ball(x, r)].sum())
