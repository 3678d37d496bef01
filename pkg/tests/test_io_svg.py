import json
import re
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import obgs
from prbg import io as pio
from prbg.decompose import decompose_full
from prbg.experiments import gen_random_convex, gen_regular_unit_polygon
from prbg.geom import Point
from prbg.proximity import build_udg, greedy_maximal_lgg
from prbg.svg import export_svg


def test_coordinates_round_trip_exactly():
    assert pio.coord_in(pio.coord_out(Fraction(-7, 3))) == Fraction(-7, 3)
    assert pio.coord_in(pio.coord_out(0.1)) == 0.1
    assert pio.coord_in(2) == Fraction(2)


def test_geograph_round_trip(tmp_path):
    g = greedy_maximal_lgg(gen_random_convex(12, 7), seed=7)
    path = tmp_path / "g.json"
    pio.write_json(path, pio.geograph_to_dict(g))
    back = pio.load_graph(path)
    assert back.points == g.points and back.edges == g.edges and back.convex == g.convex


def test_indices_are_one_based():
    d = pio.geograph_to_dict(build_udg([Point(0, 0), Point(1, 0), Point(5, 5)]))
    assert d["edges"] == [[1, 2]]


@given(obgs(max_side=6))
def test_obg_round_trip(g):
    assert pio.obg_from_dict(json.loads(pio.dumps(pio.obg_to_dict(g)))) == g


def test_points_document(tmp_path):
    pts = gen_random_convex(5, 1).points
    path = tmp_path / "p.json"
    pio.write_json(path, {"type": "points", "points": pio.points_to_json(pts)})
    assert pio.load_graph(path) == list(pts)


def test_unknown_document(tmp_path):
    path = tmp_path / "x.json"
    path.write_text('{"type": "table"}')
    with pytest.raises(ValueError):
        pio.load_graph(path)


def test_bundle_is_plain_json():
    g = build_udg(gen_regular_unit_polygon(8))
    d = decompose_full(g)
    b = pio.bundle_dict(g, "example", d, counterexample={"set": {3, 1}, "r": Fraction(1, 2)})
    text = pio.dumps(b)
    assert json.loads(text)["counterexample"] == {"set": [1, 3], "r": "1/2"}
    assert b["decomposition"]["g1"]["type"] == "obg"
    assert text == pio.dumps(b)


def test_hexagon_drawing():
    svg = export_svg(build_udg(gen_regular_unit_polygon(6)))
    assert svg.count("<circle") == 6 and svg.count("<line") == 6
    assert svg.startswith("<svg") and svg.endswith("</svg>\n")


def test_empty_drawing():
    from prbg.proximity import GeoGraph

    assert "<line" not in export_svg(GeoGraph((), frozenset()))


def test_decomposition_drawing_uses_three_styles():
    g = greedy_maximal_lgg(gen_random_convex(40, 3), seed=3)
    d = decompose_full(g)
    svg = export_svg(d)
    assert d.g1.edges and d.g2.edges
    counts = {c: len(re.findall(f'class="{c}"', svg)) for c in ("e1", "e2", "dropped")}
    assert counts["e1"] == len(d.g1.edges) and counts["e2"] == len(d.g2.edges)
    assert sum(counts.values()) == len(g.edges)
    assert export_svg(d) == svg
