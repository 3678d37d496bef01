import pytest
from hypothesis import given

from conftest import obgs
from prbg.bounds import gen_lower_bound_prbg
from prbg.decompose import decompose_full
from prbg.experiments import gen_regular_unit_polygon
from prbg.obg import OBG, PreconditionError, U, V, is_prbg
from prbg.pipeline import _geometry_maps
from prbg.proximity import build_udg
from prbg.udg import (
    DISTANCE_WITNESS,
    FUSING_MATCHING,
    FUSING_TOTAL_LINEAR,
    LINEAR_SEPARABLE_LINK,
    MODULE_LEMMAS,
    PARTITION,
    ModuleRecord,
    ModuleSplit,
    SeparabilityClass,
    detect_forbidden_udg_patterns,
    detect_modules,
    separability,
    verify_module_lemma,
)

PATTERN = OBG(2, 3, frozenset({(0, 0), (1, 0), (1, 1), (0, 2), (1, 2)}))


def test_u_pair_pattern_found_once():
    found = detect_forbidden_udg_patterns(PATTERN)
    assert found == [{"pattern": "u-pair", "u1": 0, "u2": 1, "vx": 0, "v2": 1, "v4": 2, "path": [0, 0, 1]}]


def test_longer_connecting_path_counts():
    # u1 v1 u2 v2 u3, then u3 v3, and u1, u3 share v4; no 4-cycle anywhere
    g = OBG(3, 4, frozenset({(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 3), (2, 3)}))
    found = detect_forbidden_udg_patterns(g)
    assert [(f["u1"], f["u2"], f["v2"], f["v4"], f["path"]) for f in found] == [(0, 2, 2, 3, [0, 0, 1, 1, 2])]


def test_v_pair_is_the_transposed_pattern():
    found = detect_forbidden_udg_patterns(PATTERN.transposed())
    assert [f["pattern"] for f in found] == ["v-pair"]
    assert (found[0]["v1"], found[0]["v2"], found[0]["ux"], found[0]["u2"], found[0]["u4"]) == (0, 1, 0, 1, 2)


def test_pattern_limit():
    assert len(detect_forbidden_udg_patterns(gen_lower_bound_prbg(4), limit=3)) <= 3


def test_no_pattern_without_the_detour():
    g = PATTERN.without([(1, 1)])
    assert detect_forbidden_udg_patterns(g) == []


@pytest.mark.parametrize("n", range(7, 25))
def test_unit_polygons_have_no_pattern(n):
    d = decompose_full(build_udg(gen_regular_unit_polygon(n)))
    for h in (d.g1, d.g2):
        assert detect_forbidden_udg_patterns(h) == []


def test_single_left_tree_is_one_module():
    g = OBG(3, 2, frozenset({(0, 0), (1, 0), (1, 1), (2, 1)}))
    split = detect_modules(g)
    assert len(split.modules) == 1
    m = split.modules[0]
    assert (m.v0, m.u0) == (0, 0) and m.full_tree
    assert m.core_edges == g.edges and not m.aux_edges
    assert not split.pool_edges and not split.pool_vertices


def test_modules_cover_every_edge_once():
    g = gen_lower_bound_prbg(4)
    split = detect_modules(g)
    seen = set(split.pool_edges)
    for m in split.modules:
        assert not (m.core_edges & m.aux_edges)
        assert not (seen & (m.core_edges | m.aux_edges))
        seen |= m.core_edges | m.aux_edges
    assert seen == g.edges


def test_modules_need_path_restricted_input():
    bad = OBG(3, 3, frozenset({(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)}))
    with pytest.raises(PreconditionError):
        detect_modules(bad)


@given(obgs(max_side=6))
def test_modules_are_disjoint(g):
    if not is_prbg(g):
        return
    split = detect_modules(g)
    owner = {}
    for k, m in enumerate(split.modules):
        for x in m.vertices:
            assert x not in owner
            owner[x] = k
    assert not set(owner) & split.pool_vertices


def module(us, vs, core_us=None, core_vs=None):
    core_us = us if core_us is None else core_us
    core_vs = vs if core_vs is None else core_vs
    core = frozenset([U(u) for u in core_us] + [V(v) for v in core_vs])
    aux = frozenset([U(u) for u in us if u not in core_us] + [V(v) for v in vs if v not in core_vs])
    return ModuleRecord(min(core_vs), min(core_us), core, frozenset(), frozenset(), aux)


def test_separability_classes():
    # sides are 0-based: U 1..3 against 4..6, V 1..2 against 3..5
    low, high = module([0, 1, 2], [0, 1]), module([3, 4, 5], [2, 3, 4])
    assert separability(low, high) is SeparabilityClass.LINEAR
    assert separability(high, low) is SeparabilityClass.LINEAR
    assert separability(module([0, 1], [3, 4]), module([2, 3], [0, 1])) is SeparabilityClass.CROSS
    partial = module([0, 1, 4], [0, 1], core_us=[0, 1])
    assert separability(partial, module([2, 3], [2, 3])) is SeparabilityClass.PARTIAL_LINEAR
    assert separability(module([2, 3], [2, 3]), partial) is SeparabilityClass.PARTIAL_LINEAR
    assert separability(module([0, 3], [0, 3]), module([1, 2], [1, 2])) is SeparabilityClass.OVERLAPPING
    with pytest.raises(ValueError):
        separability(low, low)


def test_lemmas_pass_vacuously_without_modules():
    g = OBG(2, 2)
    split = detect_modules(g)
    for lemma in MODULE_LEMMAS[:-1]:
        rep = verify_module_lemma(g, split, lemma)
        assert rep.passed
    assert verify_module_lemma(g, split, FUSING_TOTAL_LINEAR).value == 0


def test_fusing_matching_flags_a_shared_auxiliary_vertex():
    # a holds U 2..3 and V 0; b holds U 0..1 and V 1..2 with u0 auxiliary
    a = ModuleRecord(0, 2, frozenset({U(2), U(3), V(0)}), frozenset(), frozenset(), frozenset())
    b = ModuleRecord(1, 1, frozenset({U(1), V(1), V(2)}), frozenset(), frozenset(), frozenset({U(0)}))
    split = ModuleSplit([a, b], frozenset(), frozenset())
    assert separability(a, b) is SeparabilityClass.CROSS
    assert verify_module_lemma(OBG(4, 3, frozenset({(1, 0)})), split, FUSING_MATCHING).passed
    rep = verify_module_lemma(OBG(4, 3, frozenset({(0, 0), (1, 0)})), split, FUSING_MATCHING)
    assert not rep.passed and rep.counterexample["vertex"] == "v1"


def test_linear_link_counterexample():
    low = ModuleRecord(0, 0, frozenset({U(0), V(0)}), frozenset({(0, 0)}), frozenset(), frozenset())
    high = ModuleRecord(2, 2, frozenset({U(2), V(2)}), frozenset({(2, 2)}), frozenset(), frozenset())
    split = ModuleSplit([low, high], frozenset({(0, 2), (2, 0)}), frozenset())
    g = OBG(3, 3, frozenset({(0, 0), (2, 2), (0, 2), (2, 0)}))
    rep = verify_module_lemma(g, split, LINEAR_SEPARABLE_LINK)
    assert not rep.passed and rep.counterexample["to_core"] == ["u1", "v1"]
    single = OBG(3, 3, frozenset({(0, 0), (2, 2), (0, 2)}))
    assert verify_module_lemma(single, split, LINEAR_SEPARABLE_LINK).passed


def test_fusing_total_reports_the_constant():
    g = gen_lower_bound_prbg(3)
    split = detect_modules(g)
    rep = verify_module_lemma(g, split, FUSING_TOTAL_LINEAR)
    assert rep.value == len(split.pool_edges) / g.n
    assert verify_module_lemma(g, split, FUSING_TOTAL_LINEAR, constant=-1).passed is False


def test_partition_flags_a_cycle_in_a_part():
    m = ModuleRecord(0, 0, frozenset({U(0), U(1), V(0), V(1)}),
                     frozenset({(0, 0), (1, 0), (0, 1), (1, 1)}), frozenset(), frozenset())
    g = OBG(2, 2, m.core_edges)
    rep = verify_module_lemma(g, ModuleSplit([m], frozenset(), frozenset()), PARTITION)
    assert not rep.passed and rep.counterexample["line"] == (0, 0)


def test_distance_witness_needs_points():
    g = gen_lower_bound_prbg(2)
    with pytest.raises(PreconditionError):
        verify_module_lemma(g, detect_modules(g), DISTANCE_WITNESS)


def test_unknown_lemma():
    with pytest.raises(ValueError):
        verify_module_lemma(OBG(1, 1), ModuleSplit([], frozenset(), frozenset()), "Nope")


@pytest.mark.parametrize("n", [9, 12, 17, 24])
def test_module_lemmas_on_polygon_halves(n):
    d = decompose_full(build_udg(gen_regular_unit_polygon(n)))
    for h, which in ((d.g1, "g1"), (d.g2, "g2")):
        us, vs = _geometry_maps(d, which)
        split = detect_modules(h)
        for lemma in MODULE_LEMMAS:
            rep = verify_module_lemma(h, split, lemma, points=d.source.points, u_points=us, v_points=vs)
            assert rep.passed, (lemma, rep.counterexample)
