"""Orientations of a graph, directed distances, and violation reports."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from orientdiam.graph import (
    INF,
    Graph,
    GraphFormatError,
    bfs_layers,
    iter_bits,
    parse_pairs,
)

DEFAULT_PAIR_LIMIT = 1000


class OrientationFormatError(GraphFormatError):
    """Orientation file does not match its graph."""


@dataclass(frozen=True)
class Orientation:
    """One direction per edge of ``graph``; ``out[v]`` is the bitset N+(v)."""

    graph: Graph
    out: tuple[int, ...]

    def __post_init__(self) -> None:
        g = self.graph
        if len(self.out) != g.n:
            raise ValueError("out-adjacency length differs from vertex count")
        inn = self.inn
        for v in range(g.n):
            if self.out[v] & ~g.adj[v]:
                raise ValueError(f"arc out of {v} has no underlying edge")
            if self.out[v] & inn[v]:
                raise ValueError(f"edge at {v} oriented both ways")
            if self.out[v] | inn[v] != g.adj[v]:
                raise ValueError(f"edge at {v} left unoriented")

    @classmethod
    def from_bits(cls, g: Graph, bits: Sequence[int]) -> "Orientation":
        """``bits[i] == 0`` orients edge ``i`` = (u, v) as u->v, otherwise v->u."""
        if len(bits) != g.m:
            raise ValueError(f"expected {g.m} direction bits, got {len(bits)}")
        out = [0] * g.n
        for (u, v), b in zip(g.edges, bits):
            if b:
                out[v] |= 1 << u
            else:
                out[u] |= 1 << v
        return cls(g, tuple(out))

    @classmethod
    def from_arcs(cls, g: Graph, arcs: Iterable[tuple[int, int]]) -> "Orientation":
        out = [0] * g.n
        for u, v in arcs:
            if not g.has_edge(u, v):
                raise OrientationFormatError(f"arc {u}->{v} is not an edge of the graph")
            if (out[u] >> v) & 1 or (out[v] >> u) & 1:
                raise OrientationFormatError(f"edge {min(u, v)} {max(u, v)} oriented twice")
            out[u] |= 1 << v
        for u, v in g.edges:
            if not ((out[u] >> v) & 1 or (out[v] >> u) & 1):
                raise OrientationFormatError(f"edge {u} {v} has no arc")
        return cls(g, tuple(out))

    @cached_property
    def inn(self) -> tuple[int, ...]:
        inn = [0] * self.graph.n
        for u, nb in enumerate(self.out):
            for v in iter_bits(nb):
                inn[v] |= 1 << u
        return tuple(inn)

    @property
    def n(self) -> int:
        return self.graph.n

    def arcs(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.out[u])]

    def bits(self) -> list[int]:
        return [0 if (self.out[u] >> v) & 1 else 1 for u, v in self.graph.edges]

    def has_arc(self, u: int, v: int) -> bool:
        return bool((self.out[u] >> v) & 1)


@dataclass
class ViolationReport:
    """X-pairs (no directed 2-path) and far pairs (distance > 2).

    Pair lists stop growing at ``limit``; the counts are always exact.
    """

    x_count: int
    far_count: int
    no_two_path_pairs: list[tuple[int, int]] = field(default_factory=list)
    far_pairs: list[tuple[int, int]] = field(default_factory=list)
    limit: int = DEFAULT_PAIR_LIMIT

    @property
    def truncated(self) -> bool:
        return self.x_count > len(self.no_two_path_pairs) or self.far_count > len(self.far_pairs)

    def to_dict(self) -> dict:
        return {
            "X": self.x_count,
            "far_count": self.far_count,
            "no_two_path_pairs": [list(p) for p in self.no_two_path_pairs],
            "far_pairs": [list(p) for p in self.far_pairs],
            "limit": self.limit,
            "truncated": self.truncated,
        }


def distances_from(d: Orientation, source: int) -> list[int | float]:
    return [INF if x < 0 else x for x in bfs_layers(d.out, source)]


def directed_distance(d: Orientation, u: int, v: int) -> int | float:
    return distances_from(d, u)[v]


def diameter(d: Orientation) -> int | float:
    """Largest directed BFS distance; ``math.inf`` when not strong."""
    worst = 0
    for s in range(d.n):
        dist = bfs_layers(d.out, s)
        if -1 in dist:
            return INF
        worst = max(worst, max(dist))
    return worst


def _reach_all(adj: Sequence[int], full: int) -> bool:
    seen = frontier = 1
    while frontier:
        nxt = 0
        for z in iter_bits(frontier):
            nxt |= adj[z]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == full


def is_strong(d: Orientation) -> bool:
    full = d.graph.vertex_mask
    return _reach_all(d.out, full) and _reach_all(d.inn, full)


def x_count(d: Orientation) -> int:
    """Number of ordered pairs ``x != y`` with ``N+(x) & N-(y)`` empty."""
    out, inn = d.out, d.inn
    total = 0
    for x in range(d.n):
        ox = out[x]
        for y in range(d.n):
            if y != x and not ox & inn[y]:
                total += 1
    return total


def violation_report(d: Orientation, limit: int = DEFAULT_PAIR_LIMIT) -> ViolationReport:
    out, inn = d.out, d.inn
    report = ViolationReport(0, 0, limit=limit)
    for x in range(d.n):
        ox = out[x]
        for y in range(d.n):
            if y == x or ox & inn[y]:
                continue
            report.x_count += 1
            if len(report.no_two_path_pairs) < limit:
                report.no_two_path_pairs.append((x, y))
            if not (ox >> y) & 1:
                report.far_count += 1
                if len(report.far_pairs) < limit:
                    report.far_pairs.append((x, y))
    return report


def check_diameter_two(d: Orientation) -> bool:
    """Every ordered pair is joined by an arc or a directed 2-path."""
    out = d.out
    full = d.graph.vertex_mask
    for x in range(d.n):
        reach = out[x] | (1 << x)
        for z in iter_bits(out[x]):
            reach |= out[z]
        if reach != full:
            return False
    return True


def reverse(d: Orientation) -> Orientation:
    return Orientation(d.graph, d.inn)


def serialize_orientation(d: Orientation) -> str:
    arcs = d.arcs()
    lines = [f"{d.n} {len(arcs)}"]
    lines.extend(f"{u} {v}" for u, v in arcs)
    return "\n".join(lines) + "\n"


def parse_orientation(text: str, g: Graph) -> Orientation:
    n, arcs = parse_pairs(text)
    if n != g.n:
        raise OrientationFormatError(f"orientation has {n} vertices, graph has {g.n}")
    if len(arcs) != g.m:
        raise OrientationFormatError(f"orientation has {len(arcs)} arcs, graph has {g.m} edges")
    return Orientation.from_arcs(g, arcs)


def format_distance(value: int | float) -> int | str:
    """JSON-friendly distance: integers stay, infinity becomes ``"inf"``."""
    return "inf" if value == math.inf else int(value)
