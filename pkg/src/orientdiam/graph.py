"""Simple undirected graphs stored as per-vertex neighbour bitsets.

Vertex ``v`` is bit ``v`` of a Python ``int``; ``adj[v]`` is the bitset of
``N(v)``.  Common-neighbourhood queries are a single ``&`` plus a popcount.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

INF = math.inf


class GraphFormatError(ValueError):
    """Base class for graph file errors."""


class MalformedHeaderError(GraphFormatError):
    pass


class MalformedEdgeLineError(GraphFormatError):
    pass


class EdgeCountMismatchError(GraphFormatError):
    pass


class VertexRangeError(GraphFormatError):
    pass


class DuplicateEdgeError(GraphFormatError):
    pass


class SelfLoopError(GraphFormatError):
    pass


class GeneratorExhausted(RuntimeError):
    """Rejection sampler ran out of tries."""

    def __init__(self, delta_target: int, best_min_degree: int, tries: int):
        self.delta_target = delta_target
        self.best_min_degree = best_min_degree
        self.tries = tries
        super().__init__(
            f"no sample reached min degree {delta_target} in {tries} tries "
            f"(best achieved: {best_min_degree})"
        )


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a graph needs at least one vertex")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length differs from vertex count")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full or nb < 0:
                raise ValueError(f"vertex {v} has a neighbour outside [0, {self.n})")
            if (nb >> v) & 1:
                raise ValueError(f"vertex {v} is its own neighbour")
            for u in iter_bits(nb):
                if not (self.adj[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside [0, {n})")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if (adj[u] >> v) & 1:
                raise DuplicateEdgeError(f"duplicate edge {min(u, v)} {max(u, v)}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "Graph":
        """Build from a symmetric boolean matrix with a zero diagonal."""
        matrix = np.asarray(matrix, dtype=bool)
        n = matrix.shape[0]
        weights = 1 << np.arange(n, dtype=object)
        adj = tuple(int(weights[row].sum()) if row.any() else 0 for row in matrix)
        return cls(n, adj)

    @cached_property
    def m(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order; position = dense EdgeId."""
        return tuple(
            (u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))
        )

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def add_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges) + list(extra))


def min_degree(g: Graph) -> int:
    return min(nb.bit_count() for nb in g.adj)


def codegree(g: Graph, x: int, y: int) -> int:
    """Size of the common neighbourhood of distinct vertices ``x`` and ``y``."""
    if x == y:
        raise ValueError("codegree needs two distinct vertices")
    return (g.adj[x] & g.adj[y]).bit_count()


def bfs_layers(adj: Sequence[int], source: int) -> list[int]:
    """Distances from ``source`` along ``adj`` (``-1`` = unreachable)."""
    dist = [-1] * len(adj)
    dist[source] = 0
    seen = 1 << source
    frontier = seen
    level = 0
    while frontier:
        level += 1
        nxt = 0
        for z in iter_bits(frontier):
            nxt |= adj[z]
        nxt &= ~seen
        for z in iter_bits(nxt):
            dist[z] = level
        seen |= nxt
        frontier = nxt
    return dist


def underlying_diameter(g: Graph) -> int | float:
    """Largest BFS distance over all pairs; ``math.inf`` if disconnected."""
    worst = 0
    for s in range(g.n):
        dist = bfs_layers(g.adj, s)
        if -1 in dist:
            return INF
        worst = max(worst, max(dist))
    return worst


def random_graph_with_min_degree(
    n: int,
    p: float,
    delta_target: int,
    seed: int,
    max_tries: int = 1000,
) -> Graph:
    """Sample G(n, p) until its minimum degree reaches ``delta_target``.

    Each try draws the upper triangle from ``numpy.random.default_rng(seed)``,
    so the result depends only on the arguments.  In the regime used for the
    sufficiency threshold (n = 100, p = 0.82, target 67) each degree is
    Binomial(99, 0.82) with mean 81.2 and sd 3.8; the target sits 3.7 sd
    below the mean, so the first try is accepted with probability about 0.99
    and the expected number of tries is close to 1.
    """
    if not 0 < p <= 1:
        raise ValueError("edge probability must lie in (0, 1]")
    if delta_target > n - 1:
        raise ValueError("target minimum degree exceeds n - 1")
    if max_tries < 1:
        raise ValueError("max_tries must be positive")
    rng = np.random.default_rng(seed)
    upper = np.triu_indices(n, k=1)
    best = -1
    for _ in range(max_tries):
        matrix = np.zeros((n, n), dtype=bool)
        matrix[upper] = rng.random(len(upper[0])) < p
        matrix |= matrix.T
        delta = int(matrix.sum(axis=1).min()) if n > 1 else 0
        if delta >= delta_target:
            return Graph.from_matrix(matrix)
        best = max(best, delta)
    raise GeneratorExhausted(delta_target, best, max_tries)


def serialize_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((lineno, line))
    return out


def _parse_header(lines: list[tuple[int, str]]) -> tuple[int, int]:
    if not lines:
        raise MalformedHeaderError("missing 'n m' header line")
    lineno, line = lines[0]
    parts = line.split()
    if len(parts) != 2:
        raise MalformedHeaderError(f"line {lineno}: header must be 'n m', got {line!r}")
    try:
        n, m = int(parts[0]), int(parts[1])
    except ValueError:
        raise MalformedHeaderError(f"line {lineno}: non-integer header {line!r}") from None
    if n < 1 or m < 0:
        raise MalformedHeaderError(f"line {lineno}: need n >= 1 and m >= 0")
    return n, m


def parse_pairs(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse the shared ``n m`` + ``u v`` line format without interpreting pairs."""
    lines = _content_lines(text)
    n, m = _parse_header(lines)
    body = lines[1:]
    if len(body) != m:
        raise EdgeCountMismatchError(f"header announces {m} pairs, found {len(body)}")
    pairs = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise MalformedEdgeLineError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedEdgeLineError(f"line {lineno}: non-integer vertex in {line!r}") from None
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"line {lineno}: vertex outside [0, {n}) in {line!r}")
        pairs.append((u, v))
    return n, pairs


def parse_graph(text: str) -> Graph:
    n, pairs = parse_pairs(text)
    return Graph.from_edges(n, pairs)


# Small named graphs used by tests and the CLI corpus.

def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full ^ (1 << v) for v in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)
