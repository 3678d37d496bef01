"""JSON forms of point sets, graphs, decompositions and failure bundles.

Vertex and point indices in files are 1-based. Rational coordinates are
written as "num/den" strings so they round-trip exactly.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .geom import Point
from .obg import OBG
from .proximity import GeoGraph


def coord_out(c):
    if isinstance(c, Fraction):
        return str(c)
    return float(c)


def coord_in(c):
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    return float(c)


def points_to_json(points) -> list:
    return [[coord_out(p.x), coord_out(p.y)] for p in points]


def points_from_json(data) -> list[Point]:
    return [Point(coord_in(x), coord_in(y)) for x, y in data]


def geograph_to_dict(g: GeoGraph) -> dict:
    return {"type": "geograph", "points": points_to_json(g.points),
            "edges": [[a + 1, b + 1] for a, b in sorted(g.edges)], "convex": g.convex}


def geograph_from_dict(d: dict) -> GeoGraph:
    pts = tuple(points_from_json(d["points"]))
    return GeoGraph(pts, frozenset((a - 1, b - 1) for a, b in d["edges"]), bool(d.get("convex", False)))


def obg_to_dict(g: OBG) -> dict:
    return {"type": "obg", "u_count": g.u_count, "v_count": g.v_count,
            "edges": [[u + 1, v + 1] for u, v in sorted(g.edges)]}


def obg_from_dict(d: dict) -> OBG:
    return OBG(int(d["u_count"]), int(d["v_count"]), frozenset((u - 1, v - 1) for u, v in d["edges"]))


def decomposition_to_dict(d) -> dict:
    def pairs(es):
        return [[a + 1, b + 1] for a, b in es]

    return {
        "type": "decomposition",
        "pair": [d.pair[0] + 1, d.pair[1] + 1],
        "u_points": [p + 1 for p in d.u_map],
        "v_points": [p + 1 for p in d.v_map],
        "g1": obg_to_dict(d.g1),
        "g2": obg_to_dict(d.g2),
        "noncrossing_dropped": pairs(d.noncrossing_dropped),
        "left_trimmed": pairs(d.left_trimmed),
        "right_trimmed": pairs(d.right_trimmed),
    }


def _plain(x):
    """Make nested results JSON-safe with stable ordering."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=repr)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def bundle_dict(g: GeoGraph, reason: str, decomposition=None, **extra) -> dict:
    out = {"type": "witness-bundle", "reason": reason, "source": geograph_to_dict(g)}
    if decomposition is not None:
        out["decomposition"] = decomposition_to_dict(decomposition)
    for k, v in sorted(extra.items()):
        out[k] = _plain(v)
    return out


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def write_json(path, obj: dict) -> None:
    Path(path).write_text(dumps(obj))


write_bundle = write_json


def read_json(path) -> dict:
    return json.loads(Path(path).read_text())


def load_graph(path):
    """A GeoGraph or OBG from a file written by this module; bundles give their source graph."""
    d = read_json(path)
    kind = d.get("type")
    if kind == "geograph":
        return geograph_from_dict(d)
    if kind == "obg":
        return obg_from_dict(d)
    if kind == "points":
        return points_from_json(d["points"])
    if kind == "witness-bundle":
        return geograph_from_dict(d["source"])
    raise ValueError(f"{path}: unknown document type {kind!r}")
