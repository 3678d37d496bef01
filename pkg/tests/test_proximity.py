import pytest
from hypothesis import given
from hypothesis import strategies as st

from prbg.experiments import gen_random_convex, gen_regular_unit_polygon
from prbg.geom import GeometryError, Point
from prbg.proximity import (
    GeoGraph,
    build_gabriel,
    build_udg,
    conflict,
    default_edge_order,
    edges_conflict,
    greedy_maximal_lgg,
    in_diameter_disk,
    is_valid_lgg,
    max_lgg_bruteforce,
)

UNIT_SQUARE = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]


def test_udg_unit_square():
    g = build_udg(UNIT_SQUARE)
    assert g.edge_list() == [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert g.convex


def test_udg_rational_rejects_tolerance():
    with pytest.raises(ValueError):
        build_udg(UNIT_SQUARE, tolerance=1e-9)


def test_udg_pythagorean_points_are_exact():
    pts = [Point(0, 0), Point("3/5", "4/5"), Point("8/5", "4/5"), Point(1, 0)]
    assert len(build_udg(pts).edges) == 4


def test_hexagon_has_six_unit_pairs():
    assert len(build_udg(gen_regular_unit_polygon(6)).edges) == 6


def test_gabriel_matches_disk_oracle():
    pts = gen_random_convex(9, 3).points
    g = build_gabriel(pts)
    for i in range(9):
        for j in range(i + 1, 9):
            empty = not any(in_diameter_disk(pts[k], pts[i], pts[j]) for k in range(9) if k not in (i, j))
            assert ((i, j) in g.edges) == empty


def test_conflict_is_the_right_angle_rule():
    pts = [Point(0, 0), Point(2, 0), Point(1, 1)]
    # (0,1) and (0,2): point 2 sits on the circle over 0-1, a right angle
    assert conflict(pts, 0, 1, 2)
    g = GeoGraph(pts, frozenset({(0, 1), (0, 2)}))
    assert edges_conflict(g, (0, 1), (0, 2))
    assert not is_valid_lgg(g)
    assert is_valid_lgg(GeoGraph(pts, frozenset({(0, 2), (1, 2)})))


def test_edges_conflict_needs_shared_endpoint():
    g = GeoGraph(UNIT_SQUARE, frozenset())
    with pytest.raises(ValueError):
        edges_conflict(g, (0, 1), (2, 3))


def test_geograph_validation():
    with pytest.raises(ValueError):
        GeoGraph(UNIT_SQUARE, frozenset({(0, 0)}))
    with pytest.raises(GeometryError):
        GeoGraph([Point(0, 0), Point(1, 0), Point(2, 0)], frozenset(), convex=True)


@pytest.mark.parametrize("n", range(3, 25))
def test_unit_distance_graphs_are_locally_gabriel(n):
    assert is_valid_lgg(build_udg(gen_regular_unit_polygon(n)))


@given(st.integers(4, 14), st.integers(0, 10_000), st.booleans())
def test_greedy_lgg_is_valid_and_maximal(n, seed, shuffle):
    pts = gen_random_convex(n, seed).points
    g = greedy_maximal_lgg(pts, seed=seed if shuffle else None)
    assert is_valid_lgg(g)
    adj = g.adjacency()
    for i, j in default_edge_order(pts):
        if (i, j) in g.edges:
            continue
        blocked = any(conflict(pts, i, j, w) for w in adj[i]) or any(conflict(pts, j, i, w) for w in adj[j])
        assert blocked, f"pair {(i, j)} could still be added"


def test_greedy_order_must_be_a_permutation():
    with pytest.raises(ValueError):
        greedy_maximal_lgg(UNIT_SQUARE, edge_order=[(0, 1)])


@pytest.mark.parametrize("seed", range(4))
def test_bruteforce_maximum_dominates_greedy(seed):
    pts = gen_random_convex(7, seed).points
    best, g = max_lgg_bruteforce(pts)
    assert is_valid_lgg(g) and len(g.edges) == best
    assert best >= len(greedy_maximal_lgg(pts).edges)
    assert best >= len(greedy_maximal_lgg(pts, seed=seed).edges)


def test_bruteforce_size_guard():
    with pytest.raises(ValueError):
        max_lgg_bruteforce(gen_random_convex(10, 0).points)
