import math
import random
from itertools import product

import pytest
from hypothesis import assume, given

from conftest import obgs, random_obg
from prbg.bounds import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    ExactTable,
    crossing_lemma_check,
    crossing_sweep,
    dnc_edge_bound,
    gen_lower_bound_prbg,
    generator_edge_count,
    load_exact_fixture,
    max_prbg_edges_exact,
)
from prbg.obg import OBG, PreconditionError, is_prbg


def test_empty_graph_separators():
    g = OBG(3, 3)
    rep = crossing_lemma_check(g, (1, 1))
    assert rep.passed and rep.part1_edges == rep.part2_edges == 0


def test_k22_hand_check(k22):
    # left part is {u2, v2}; each side has a left neighbour
    rep = crossing_lemma_check(k22, (1, 1))
    assert rep.part1 == PASS and rep.part1_edges == 1 and rep.part1_bound == 2
    assert rep.part2 == PASS and rep.part2_edges == 1 and rep.part2_bound == 2


def test_premise_failure_is_not_a_pass():
    g = OBG(2, 2, frozenset({(1, 0)}))
    rep = crossing_lemma_check(g, (1, 1))
    assert rep.part1 == NOT_APPLICABLE


def test_invalid_separator():
    with pytest.raises(ValueError):
        crossing_lemma_check(OBG(2, 2), (3, 0))


@given(obgs(max_side=6))
def test_sweep_agrees_with_single_checks(g):
    sweep = crossing_sweep(g)
    checks = fails = 0
    for su, sv in product(range(g.u_count + 1), range(g.v_count + 1)):
        rep = crossing_lemma_check(g, (su, sv))
        if rep.part1 != NOT_APPLICABLE and su < g.u_count and sv > 0:
            checks += 1
            fails += rep.part1 == FAIL
        if rep.part2 != NOT_APPLICABLE and sv < g.v_count and su > 0:
            checks += 1
            fails += rep.part2 == FAIL
    assert sweep.checks == checks
    assert len(sweep.failures) == fails


@given(obgs(max_side=7))
def test_separator_bound_holds_on_path_restricted_graphs(g):
    assume(is_prbg(g))
    assert crossing_sweep(g).passed


@given(obgs(max_side=7))
def test_certificate_is_sound(g):
    assume(is_prbg(g))
    cert = dnc_edge_bound(g)
    assert cert.sound and cert.total_bound >= len(g.edges)
    assert cert.within_reference


def test_certificate_needs_path_restricted_input():
    bad = OBG(3, 3, frozenset({(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)}))
    with pytest.raises(PreconditionError):
        dnc_edge_bound(bad)


def test_certificate_single_edge_and_star():
    cert = dnc_edge_bound(OBG(1, 1, frozenset({(0, 0)})))
    assert cert.total_bound >= 1 and len(cert.trace) == 1
    star = OBG(1, 7, frozenset((0, v) for v in range(7)))
    assert dnc_edge_bound(star).total_bound >= 7


def test_certificate_is_deterministic():
    g = gen_lower_bound_prbg(5)
    assert dnc_edge_bound(g).to_dict() == dnc_edge_bound(g).to_dict()


@pytest.mark.parametrize("k", range(0, 9))
def test_generator(k):
    g = gen_lower_bound_prbg(k)
    assert g.u_count == g.v_count == 2 ** k
    assert len(g.edges) == generator_edge_count(k)
    assert is_prbg(g)
    cert = dnc_edge_bound(g, check=False)
    assert cert.sound and cert.within_reference


def test_generator_guard():
    with pytest.raises(ValueError):
        gen_lower_bound_prbg(13)


def _exhaustive_max(nu, nv):
    cells = [(u, v) for u in range(nu) for v in range(nv)]
    best = 0
    for mask in range(1 << len(cells)):
        k = bin(mask).count("1")
        if k <= best:
            continue
        g = OBG(nu, nv, frozenset(c for i, c in enumerate(cells) if mask >> i & 1))
        if is_prbg(g, engine="brute"):
            best = k
    return best


@pytest.mark.parametrize("nu,nv", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4)])
def test_exact_search_matches_exhaustive_enumeration(nu, nv):
    best, g = max_prbg_edges_exact(nu, nv)
    assert best == _exhaustive_max(nu, nv)
    assert len(g.edges) == best and is_prbg(g, engine="brute")


def test_exact_small_values():
    assert max_prbg_edges_exact(1, 1)[0] == 1
    assert max_prbg_edges_exact(2, 2)[0] == 4
    assert max_prbg_edges_exact(0, 5)[0] == 0
    with pytest.raises(ValueError):
        max_prbg_edges_exact(9, 8)


def test_exact_table_symmetry_and_growth():
    t = ExactTable()
    t.solve(5, 5)
    for a in range(1, 6):
        for b in range(1, 6):
            assert t.get(a, b) == t.get(b, a)
            g = t.graph(a, b)
            assert (g.u_count, g.v_count) == (a, b) and len(g.edges) == t.get(a, b)
        if a > 1:
            assert t.get(a, a) >= t.get(a - 1, a - 1)


def test_fixture_witnesses_verify():
    fx = load_exact_fixture()
    assert fx.values
    for (a, b), value in sorted(fx.values.items()):
        g = fx.graph(a, b)
        assert len(g.edges) == value and is_prbg(g)
        assert fx.value(b, a) == value
        if a != b:
            assert fx.graph(b, a).edges == g.transposed().edges


def test_fixture_matches_live_search_on_small_sizes():
    fx = load_exact_fixture()
    for a in range(1, 6):
        for b in range(1, a + 1):
            assert fx.value(a, b) == max_prbg_edges_exact(a, b)[0]


def test_random_graphs_never_beat_the_fixture():
    fx = load_exact_fixture()
    rng = random.Random(3)
    for _ in range(400):
        g = random_obg(rng, 16)
        if g.u_count <= 8 and g.v_count <= 8 and is_prbg(g):
            assert len(g.edges) <= fx.value(g.u_count, g.v_count)


def test_generator_below_exact_maximum():
    fx = load_exact_fixture()
    for k in range(0, 4):
        m = 2 ** k
        assert generator_edge_count(k) <= fx.value(m, m)
    assert generator_edge_count(3) >= 0.25 * 8 * math.log2(8)
