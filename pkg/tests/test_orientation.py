import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import small_graphs
from orientdiam.exact import iter_out_sets
from orientdiam.graph import Graph, complete_graph, cycle_graph, parse_graph, path_graph
from orientdiam.orientation import (
    Orientation,
    OrientationFormatError,
    check_diameter_two,
    diameter,
    directed_distance,
    is_strong,
    parse_orientation,
    reverse,
    serialize_orientation,
    violation_report,
    x_count,
)
from orientdiam.random_orient import random_orientation


def directed_cycle(n):
    g = cycle_graph(n)
    return Orientation.from_arcs(g, [(i, (i + 1) % n) for i in range(n)])


def single_arc():
    return Orientation.from_arcs(complete_graph(2), [(0, 1)])


def test_directed_distance_examples():
    tri = directed_cycle(3)
    assert directed_distance(tri, 0, 2) == 2
    assert directed_distance(tri, 0, 1) == 1
    assert directed_distance(tri, 1, 1) == 0
    assert directed_distance(single_arc(), 1, 0) == math.inf


def test_diameter_examples():
    assert diameter(directed_cycle(3)) == 2
    assert diameter(directed_cycle(5)) == 4
    p = path_graph(4)
    for bits in [(0, 0, 0), (1, 0, 1), (1, 1, 1)]:
        assert diameter(Orientation.from_bits(p, bits)) == math.inf


def test_is_strong_examples():
    assert is_strong(directed_cycle(3))
    assert not is_strong(single_arc())
    assert is_strong(directed_cycle(5))
    assert is_strong(Orientation(Graph(1, (0,)), (0,)))


def test_violation_report_directed_triangle():
    d = directed_cycle(3)
    rep = violation_report(d)
    # oracle: all six ordered pairs checked explicitly
    arcs = set(d.arcs())
    expected = [(x, y) for x in range(3) for y in range(3) if x != y and not oracles.has_two_path(3, arcs, x, y)]
    assert rep.no_two_path_pairs == expected
    assert rep.x_count == 3 == len(expected)
    assert sorted(expected) == [(0, 1), (1, 2), (2, 0)]
    assert rep.far_pairs == [] and rep.far_count == 0
    assert diameter(d) == 2


def test_violation_report_k2():
    rep = violation_report(single_arc())
    assert rep.x_count == 2
    assert rep.far_pairs == [(1, 0)]
    # (0, 1) is joined by the arc, so only one pair is far
    assert rep.far_count == 1


def test_violation_report_cap():
    d = directed_cycle(5)
    rep = violation_report(d, limit=3)
    full = violation_report(d)
    assert rep.x_count == full.x_count == 15  # each vertex reaches only x+2 by a 2-path
    assert rep.far_count == full.far_count
    assert len(rep.no_two_path_pairs) == 3 and rep.truncated
    assert not full.truncated


def test_check_diameter_two_examples():
    assert check_diameter_two(directed_cycle(3))
    assert not check_diameter_two(directed_cycle(5))
    k4 = complete_graph(4)
    assert not any(check_diameter_two(Orientation(k4, tuple(out))) for out, _ in iter_out_sets(k4))
    assert sum(1 for _ in iter_out_sets(k4)) == 64


def test_reverse_involution_and_invariants():
    d = directed_cycle(5)
    r = reverse(d)
    assert r.arcs() == sorted((v, u) for u, v in d.arcs())
    assert reverse(r) == d
    assert diameter(r) == diameter(d)


def test_x_reverse_invariance_all_orientations_of_c4():
    c4 = cycle_graph(4)
    for out, _ in iter_out_sets(c4):
        d = Orientation(c4, tuple(out))
        rep, rev = violation_report(d), violation_report(reverse(d))
        assert rev.x_count == rep.x_count
        assert sorted(rev.no_two_path_pairs) == sorted((y, x) for x, y in rep.no_two_path_pairs)


@pytest.mark.parametrize(
    "arcs",
    [
        [(0, 1), (1, 2)],  # edge 0-2 missing
        [(0, 1), (1, 2), (2, 0), (0, 2)],  # both directions
        [(0, 1), (1, 2), (2, 0), (0, 1)],
    ],
)
def test_orientation_must_match_graph(arcs):
    with pytest.raises(OrientationFormatError):
        Orientation.from_arcs(complete_graph(3), arcs)


def test_orientation_rejects_arc_without_edge():
    with pytest.raises(OrientationFormatError):
        Orientation.from_arcs(path_graph(3), [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError):
        Orientation(path_graph(3), (0b110, 0, 0))


def test_orientation_file_round_trip():
    g = parse_graph("3 3\n0 1\n1 2\n0 2\n")
    d = parse_orientation("3 3\n0 1\n1 2\n2 0\n", g)
    assert d == directed_cycle(3)
    assert parse_orientation(serialize_orientation(d), g) == d
    with pytest.raises(OrientationFormatError):
        parse_orientation("3 2\n0 1\n1 2\n", g)
    with pytest.raises(OrientationFormatError):
        parse_orientation("4 3\n0 1\n1 2\n2 0\n", g)


def test_from_bits_round_trip():
    g = complete_graph(5)
    bits = [0, 1, 1, 0, 1, 0, 0, 1, 1, 0]
    assert Orientation.from_bits(g, bits).bits() == bits


# cross-path properties

orientations = st.builds(
    lambda g, seed: random_orientation(g, np.random.default_rng(seed)),
    small_graphs(max_n=8),
    st.integers(0, 2**32 - 1),
)


@settings(max_examples=300)
@given(orientations)
def test_check_diameter_two_matches_bfs_and_oracle(d):
    assert check_diameter_two(d) == (diameter(d) <= 2)
    assert diameter(d) == oracles.arc_diameter(d.n, set(d.arcs()))


@settings(max_examples=200)
@given(orientations)
def test_report_against_oracle(d):
    arcs = set(d.arcs())
    rep = violation_report(d)
    assert rep.x_count == x_count(d) == oracles.x_value(d.n, arcs)
    dist = oracles.distance_matrix(d.n, arcs)
    assert rep.far_pairs == [(x, y) for x in range(d.n) for y in range(d.n) if dist[x][y] > 2]
    no_two = set(rep.no_two_path_pairs)
    for x, y in rep.far_pairs:
        assert (x, y) in no_two and (x, y) not in arcs


@settings(max_examples=200)
@given(orientations)
def test_reverse_invariants(d):
    r = reverse(d)
    assert reverse(r) == d
    assert diameter(r) == diameter(d)
    assert x_count(r) == x_count(d)
    if not violation_report(d).far_pairs:
        assert is_strong(d)
    assert is_strong(d) == (diameter(d) < math.inf)
