"""Exhaustive search over the 2**m orientations of small graphs.

Edges are decided in canonical order.  With ``symmetric=True`` edge 0 is
fixed to its forward direction: reversing every arc preserves both the
diameter and the diameter-two property, so half the space suffices.

The space below the first ``split_depth`` edges is cut into independent
subtrees.  They are always cut the same way, whatever the worker count, so
node counts and the returned orientation never depend on scheduling.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from orientdiam._parallel import ordered_map
from orientdiam.graph import INF, Graph, iter_bits, underlying_diameter
from orientdiam.orientation import (
    Orientation,
    check_diameter_two,
    diameter,
    format_distance,
    serialize_orientation,
)

DEFAULT_EDGE_BUDGET = 24
DEFAULT_SPLIT_DEPTH = 6


class EdgeBudgetExceeded(ValueError):
    pass


@dataclass
class SearchOutcome:
    status: str  # "found" | "none_exists" | "limit_reached"
    edge_budget: int
    orientation: Optional[Orientation] = None
    min_diameter: Optional[int | float] = None
    nodes_explored: int = 0
    leaves_covered: int = 0
    space_size: int = 0
    wall_time: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "status": self.status,
            "min_diameter": None if self.min_diameter is None else format_distance(self.min_diameter),
            "nodes_explored": self.nodes_explored,
            "leaves_covered": self.leaves_covered,
            "space_size": self.space_size,
            "edge_budget": self.edge_budget,
        }
        if self.orientation is not None:
            out["orientation"] = serialize_orientation(self.orientation)
        if timing:
            out["wall_time"] = self.wall_time
        return out


class _EdgeSearch:
    """Depth-first enumeration of edge directions with a per-depth pruning test.

    Subclasses implement ``ok(depth, out, inn)``: called after edge ``depth``
    is decided, it returns False when no completion can succeed.
    """

    def __init__(self, g: Graph, symmetric: bool):
        self.g = g
        self.m = g.m
        self.edges = g.edges
        self.symmetric = symmetric
        self.nodes = 0
        self.covered = 0

    def ok(self, depth: int, out: list[int], inn: list[int]) -> bool:
        raise NotImplementedError

    def space_size(self) -> int:
        return 1 << (self.m - 1) if self.symmetric and self.m else 1 << self.m

    def _choices(self, depth: int) -> tuple[int, ...]:
        return (0,) if depth == 0 and self.symmetric else (0, 1)

    def _descend(self, depth, stop, out, inn, bits, sink: Callable[[list[int]], bool]) -> bool:
        if depth == stop:
            return sink(bits)
        u, v = self.edges[depth]
        rest = self.m - 1 - depth
        for c in self._choices(depth):
            a, b = (u, v) if c == 0 else (v, u)
            self.nodes += 1
            out[a] |= 1 << b
            inn[b] |= 1 << a
            bits.append(c)
            if self.ok(depth, out, inn):
                if self._descend(depth + 1, stop, out, inn, bits, sink):
                    return True
            else:
                self.covered += 1 << rest
            bits.pop()
            out[a] ^= 1 << b
            inn[b] ^= 1 << a
        return False

    def prefixes(self, t: int) -> list[tuple[int, ...]]:
        """Surviving assignments of the first ``t`` edges, in DFS order."""
        found: list[tuple[int, ...]] = []

        def sink(bits):
            found.append(tuple(bits))
            return False

        self._descend(0, t, [0] * self.g.n, [0] * self.g.n, [], sink)
        return found

    def complete(self, prefix: tuple[int, ...]) -> Optional[list[int]]:
        """Extend ``prefix`` (assumed to pass ``ok``) to a full accepted assignment."""
        out, inn = [0] * self.g.n, [0] * self.g.n
        for (u, v), c in zip(self.edges, prefix):
            a, b = (u, v) if c == 0 else (v, u)
            out[a] |= 1 << b
            inn[b] |= 1 << a
        result: list[list[int]] = []

        def sink(bits):
            self.covered += 1
            result.append(list(bits))
            return True

        self._descend(len(prefix), self.m, out, inn, list(prefix), sink)
        return result[0] if result else None


class _Diam2Search(_EdgeSearch):
    """Prune once an ordered pair is settled without an arc or 2-path x->z->y.

    A pair is settled at the largest edge index among x-y (if present) and
    the edges x-z, z-y for every common neighbour z.
    """

    def __init__(self, g: Graph, symmetric: bool):
        super().__init__(g, symmetric)
        idx = g.edge_index
        self.checks: list[list[tuple[int, int, int]]] = [[] for _ in range(self.m)]
        self.hopeless = False
        for x in range(g.n):
            for y in range(g.n):
                if x == y:
                    continue
                deps = [idx[(min(x, z), max(x, z))] for z in iter_bits(g.adj[x] & g.adj[y])]
                deps += [idx[(min(z, y), max(z, y))] for z in iter_bits(g.adj[x] & g.adj[y])]
                if g.has_edge(x, y):
                    deps.append(idx[(min(x, y), max(x, y))])
                if not deps:
                    self.hopeless = True
                    continue
                self.checks[max(deps)].append((x, y, 1 << y))

    def ok(self, depth, out, inn):
        for x, y, ybit in self.checks[depth]:
            ox = out[x]
            if not (ox & ybit or ox & inn[y]):
                return False
        return True


class _BoundedDiameterSearch(_EdgeSearch):
    """Prune when the optimistic digraph already has some distance above ``target``.

    Undecided edges count in both directions, so optimistic distances are
    lower bounds on the distances of every completion.
    """

    def __init__(self, g: Graph, symmetric: bool, target: int):
        super().__init__(g, symmetric)
        self.target = target
        self.full = g.vertex_mask
        self.adj = g.adj

    def ok(self, depth, out, inn):
        adj, full, n = self.adj, self.full, self.g.n
        opt = [out[v] | (adj[v] & ~inn[v]) for v in range(n)]
        for x in range(n):
            seen = frontier = 1 << x
            for _ in range(self.target):
                nxt = 0
                for z in iter_bits(frontier):
                    nxt |= opt[z]
                frontier = nxt & ~seen
                seen |= frontier
                if seen == full:
                    break
            if seen != full:
                return False
        return True


def _run_subtree(args) -> tuple[Optional[list[int]], int, int]:
    kind, g, symmetric, target, prefix = args
    search = _make_search(kind, g, symmetric, target)
    bits = search.complete(prefix)
    return bits, search.nodes, search.covered


def _make_search(kind: str, g: Graph, symmetric: bool, target: int) -> _EdgeSearch:
    if kind == "diam2":
        return _Diam2Search(g, symmetric)
    return _BoundedDiameterSearch(g, symmetric, target)


@dataclass
class _Decision:
    bits: Optional[list[int]]
    nodes: int
    covered: int


def _decide(kind: str, g: Graph, symmetric: bool, target: int, workers: int, split_depth: int) -> _Decision:
    root = _make_search(kind, g, symmetric, target)
    t = min(split_depth, g.m)
    prefixes = root.prefixes(t)
    nodes, covered = root.nodes, root.covered
    tasks = [(kind, g, symmetric, target, p) for p in prefixes]
    results: Iterator = ordered_map(_run_subtree, tasks, workers)
    for bits, sub_nodes, sub_covered in results:
        nodes += sub_nodes
        covered += sub_covered
        if bits is not None:
            results.close()
            return _Decision(bits, nodes, covered)
    return _Decision(None, nodes, covered)


def exists_diam2_orientation(
    g: Graph,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
    workers: int = 1,
    symmetric: bool = True,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
) -> SearchOutcome:
    """Decide whether some orientation of ``g`` has diameter at most two."""
    start = time.perf_counter()
    if g.m > edge_budget:
        return SearchOutcome("limit_reached", edge_budget)
    search = _Diam2Search(g, symmetric)
    space = search.space_size()
    if g.n == 1:
        d = Orientation(g, (0,))
        return SearchOutcome("found", edge_budget, d, leaves_covered=1, space_size=1,
                             wall_time=time.perf_counter() - start)
    if search.hopeless or g.m == 0:
        # some pair is non-adjacent with no common neighbour
        return SearchOutcome("none_exists", edge_budget, leaves_covered=space, space_size=space,
                             wall_time=time.perf_counter() - start)
    dec = _decide("diam2", g, symmetric, 0, workers, split_depth)
    outcome = SearchOutcome("none_exists", edge_budget, nodes_explored=dec.nodes,
                            leaves_covered=dec.covered, space_size=space)
    if dec.bits is not None:
        d = Orientation.from_bits(g, dec.bits)
        assert check_diameter_two(d)
        outcome.status, outcome.orientation = "found", d
    else:
        assert dec.covered == space, "search finished without covering the space"
    outcome.wall_time = time.perf_counter() - start
    return outcome


def min_oriented_diameter(
    g: Graph,
    edge_budget: int = DEFAULT_EDGE_BUDGET,
    workers: int = 1,
    symmetric: bool = True,
    split_depth: int = DEFAULT_SPLIT_DEPTH,
) -> SearchOutcome:
    """Smallest diameter over all orientations (``math.inf`` if none is strong).

    Targets are tried in increasing order from the trivial lower bound
    max(2, underlying diameter); the first feasible target is the optimum.
    A strong orientation never has diameter above n - 1.
    """
    start = time.perf_counter()
    if g.m > edge_budget:
        return SearchOutcome("limit_reached", edge_budget)
    space = 1 << (g.m - 1) if symmetric and g.m else 1 << g.m
    if g.n == 1:
        return SearchOutcome("found", edge_budget, Orientation(g, (0,)), min_diameter=0,
                             leaves_covered=1, space_size=1, wall_time=time.perf_counter() - start)
    lower = max(2, underlying_diameter(g))
    nodes = 0
    if lower != INF:
        for target in range(int(lower), g.n):
            dec = _decide("bounded", g, symmetric, target, workers, split_depth)
            nodes += dec.nodes
            if dec.bits is not None:
                d = Orientation.from_bits(g, dec.bits)
                assert diameter(d) == target
                return SearchOutcome("found", edge_budget, d, min_diameter=target,
                                     nodes_explored=nodes, space_size=space,
                                     wall_time=time.perf_counter() - start)
            assert dec.covered == space
    return SearchOutcome("none_exists", edge_budget, min_diameter=INF, nodes_explored=nodes,
                         leaves_covered=space, space_size=space,
                         wall_time=time.perf_counter() - start)


def iter_out_sets(g: Graph) -> Iterator[tuple[list[int], list[int]]]:
    """Yield ``(out, inn)`` bitset lists for all 2**m orientations.

    The lists are reused between yields; copy them to keep one.
    """
    out, inn = [0] * g.n, [0] * g.n
    edges = g.edges
    m = len(edges)

    def rec(i):
        if i == m:
            yield out, inn
            return
        u, v = edges[i]
        for a, b in ((u, v), (v, u)):
            out[a] |= 1 << b
            inn[b] |= 1 << a
            yield from rec(i + 1)
            out[a] ^= 1 << b
            inn[b] ^= 1 << a

    yield from rec(0)


def _check_budget(g: Graph, edge_budget: int) -> None:
    if g.m > edge_budget:
        raise EdgeBudgetExceeded(f"{g.m} edges exceed the budget of {edge_budget}")


def x_pair_counts(g: Graph, edge_budget: int = DEFAULT_EDGE_BUDGET) -> dict[tuple[int, int], int]:
    """For each ordered pair, the number of orientations in which it has no directed 2-path."""
    _check_budget(g, edge_budget)
    n = g.n
    counts = [[0] * n for _ in range(n)]
    for out, inn in iter_out_sets(g):
        for x in range(n):
            ox, row = out[x], counts[x]
            for y in range(n):
                if not ox & inn[y]:
                    row[y] += 1
    return {(x, y): counts[x][y] for x in range(n) for y in range(n) if x != y}


def exact_total_x(g: Graph, edge_budget: int = DEFAULT_EDGE_BUDGET) -> int:
    """Sum of X over all orientations (an integer)."""
    return sum(x_pair_counts(g, edge_budget).values())


def exact_mean_X(g: Graph, edge_budget: int = DEFAULT_EDGE_BUDGET) -> float:
    return exact_total_x(g, edge_budget) / (1 << g.m)

