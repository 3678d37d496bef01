import math
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prbg.experiments import (
    ExperimentSpec,
    InexactWarning,
    Schedule,
    gen_random_convex,
    gen_regular_unit_polygon,
    grow_unit_configuration,
    optimize_unit_distances,
    run_suite,
)
from prbg.geom import RATIONAL, is_convex_position, squared_distance
from prbg.proximity import build_udg


@pytest.mark.parametrize("n", [3, 7, 12, 24])
def test_polygon_sides_are_unit(n):
    pts = gen_regular_unit_polygon(n).points
    for i in range(n):
        assert math.isclose(squared_distance(pts[i], pts[(i + 1) % n]), 1.0, rel_tol=1e-12)


def test_rational_polygon_warns_when_inexact():
    with pytest.warns(InexactWarning):
        gen_regular_unit_polygon(7, RATIONAL)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gen_regular_unit_polygon(4, RATIONAL)


def test_polygon_rejects_small_n():
    with pytest.raises(ValueError):
        gen_regular_unit_polygon(2)


@given(st.integers(3, 60), st.integers(0, 10_000))
def test_random_convex_is_exactly_convex(n, seed):
    cps = gen_random_convex(n, seed)
    assert cps.n == n and cps.points[0].mode == RATIONAL
    assert is_convex_position(cps.points)


def test_random_convex_is_seeded():
    assert gen_random_convex(15, 3) == gen_random_convex(15, 3)
    assert gen_random_convex(15, 3) != gen_random_convex(15, 4)


def test_schedule_cools():
    s = Schedule(10, 2.0, 0.1)
    temps = [s.temperature(i) for i in range(10)]
    assert temps[0] == 2.0 and math.isclose(temps[-1], 0.1)
    assert temps == sorted(temps, reverse=True)


def test_search_without_steps_returns_the_polygon():
    res = optimize_unit_distances(7, schedule=Schedule(0))
    assert res.count == 7 and res.history == [] and res.target == 7


def test_search_is_monotone_and_deterministic():
    a = optimize_unit_distances(10, seed=5, schedule=Schedule(600))
    b = optimize_unit_distances(10, seed=5, schedule=Schedule(600))
    assert a.history == b.history and a.count == b.count
    assert a.history == sorted(a.history)
    assert a.count >= 10 and is_convex_position(a.best.points)
    assert a.recheck_count >= a.count


def test_search_size_guard():
    with pytest.raises(ValueError):
        optimize_unit_distances(2)


def test_grown_configuration_is_convex_with_many_unit_pairs():
    res = grow_unit_configuration(9, seed=0, restarts=40)
    assert is_convex_position(res.best.points)
    assert res.count == len(build_udg(res.best, tolerance=1e-9).edges)
    assert res.count >= res.target


def test_spec_validation():
    with pytest.raises(ValueError):
        ExperimentSpec("x", "spiral")
    with pytest.raises(ValueError):
        ExperimentSpec("x", "random-convex", steps=("udg", "knn"))
    spec = ExperimentSpec("x", "regular-polygon", sizes=(7, 8), seeds=(1, 2, 3))
    assert spec.instances() == [(7, 0), (8, 0)]


def test_empty_suite():
    res = run_suite(ExperimentSpec("empty", "random-convex"))
    assert res.rows == [] and res.failures == 0
    assert res.csv_text().startswith("experiment,name,n,seed,check")


def test_suite_rows_and_csv_are_reproducible(tmp_path):
    spec = ExperimentSpec("small", "random-convex", sizes=(10, 14), seeds=(1, 2),
                          csv_path=str(tmp_path / "a.csv"), bundle_dir=str(tmp_path / "b"))
    a = run_suite(spec)
    b = run_suite(spec)
    assert a.failures == 0
    assert a.csv_text() == b.csv_text() == (tmp_path / "a.csv").read_text()
    assert {r["n"] for r in a.rows} == {10, 14}
    assert not (tmp_path / "b").exists()


def test_polygon_suite_checks_both_graphs():
    res = run_suite(ExperimentSpec("poly", "regular-polygon", sizes=(9,)))
    names = {r["name"] for r in res.rows}
    assert names == {"regular-polygon/udg", "regular-polygon/lgg"}
    assert res.failures == 0
    assert res.counters[("udg", "instances")] == 1
