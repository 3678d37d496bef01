import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import obgs
from prbg.obg import (
    LEFTWARD,
    NEVER_MEET,
    OBG,
    RIGHTWARD,
    SINGLE_INCIDENCE,
    STRUCTURE_LEMMAS,
    TREE_EDGES,
    OBGError,
    PreconditionError,
    TreeViolation,
    U,
    V,
    back_edges,
    forward_reach,
    increasing,
    is_forward_path,
    is_prbg,
    iter_forward_paths,
    monotone_tree,
    path_range,
    verify_structure,
)


def graph(nu, nv, edges):
    return OBG(nu, nv, frozenset(edges))


def test_validation():
    with pytest.raises(OBGError):
        graph(1, 1, [(1, 0)])
    with pytest.raises(OBGError):
        OBG(-1, 0)


def test_vertex_labels_are_one_based():
    assert str(U(0)) == "u1" and str(V(4)) == "v5"


def test_forward_paths():
    g = graph(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1)])
    p = [U(0), V(0), U(1), V(1), U(2)]
    assert is_forward_path(g, p)
    assert is_forward_path(g, p[::-1])
    assert increasing(p[::-1]) == tuple(p)
    assert path_range(p) == (0, 2, 0, 1)
    assert not is_forward_path(g, [U(1), V(0), U(0), V(1)])
    with pytest.raises(OBGError):
        is_forward_path(g, [U(0), U(1)])


def test_known_back_edge():
    # u1 v1 u2 v2 u3 plus the chord u1-v2: the corner u1 reaches past v1
    g = graph(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)])
    path = [U(0), V(0), U(1), V(1), U(2), V(2)]
    assert is_forward_path(g, path)
    assert (0, 2) not in back_edges(g, path[:5])
    res = is_prbg(g)
    assert not res
    assert is_forward_path(g, res.path)
    assert res.back_edge in back_edges(g, res.path)


def test_k22_is_path_restricted(k22):
    assert is_prbg(k22)
    assert is_prbg(k22, engine="brute")


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_stars_are_path_restricted(m):
    assert is_prbg(graph(1, m, [(0, v) for v in range(m)]))
    assert is_prbg(graph(m, 1, [(u, 0) for u in range(m)]))


def test_empty_graphs():
    assert is_prbg(OBG(0, 0))
    assert is_prbg(OBG(3, 2))


def test_unknown_engine(k22):
    with pytest.raises(ValueError):
        is_prbg(k22, engine="magic")


@given(obgs(max_side=6))
def test_engines_agree(g):
    fast, brute = is_prbg(g), is_prbg(g, engine="brute")
    assert fast.ok == brute.ok


@given(obgs(max_side=7))
def test_witnesses_are_genuine(g):
    for engine in ("fast", "brute"):
        res = is_prbg(g, engine=engine)
        if not res:
            assert is_forward_path(g, res.path)
            assert res.back_edge in back_edges(g, res.path)


@given(obgs(max_side=6))
def test_swapping_sides_preserves_the_property(g):
    assert is_prbg(g).ok == is_prbg(g.transposed()).ok


@given(obgs(max_side=6), st.data())
def test_property_is_hereditary(g, data):
    if not is_prbg(g) or not g.edges:
        return
    drop = data.draw(st.sampled_from(sorted(g.edges)))
    assert is_prbg(g.without([drop]))


def test_reach_and_reversal():
    g = graph(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1)])
    r = forward_reach(g, U(0), LEFTWARD)
    assert r.vertices == {U(0), V(0), U(1), V(1), U(2)}
    back = forward_reach(g, U(2), RIGHTWARD)
    assert back.vertices == r.vertices
    assert back.edges == r.edges


def test_monotone_tree_of_a_path():
    g = graph(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1)])
    t = monotone_tree(g, V(0), LEFTWARD)
    assert t.path_to(U(2)) == [V(0), U(1), V(1), U(2)]
    assert t.leaves() == [U(0), U(2)]
    assert t.children(V(0)) == [U(0), U(1)]


def test_monotone_tree_detects_meeting_paths(k22):
    with pytest.raises(TreeViolation):
        monotone_tree(k22, U(0), LEFTWARD)


def test_iter_forward_paths_maximal():
    g = graph(2, 2, [(0, 0), (1, 0), (1, 1)])
    assert list(iter_forward_paths(g, U(0))) == [(U(0), V(0), U(1), V(1))]
    assert len(list(iter_forward_paths(g, U(0), maximal=False))) == 3


def test_structure_lemmas_on_a_tree():
    g = graph(4, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (3, 2)])
    for lemma in STRUCTURE_LEMMAS:
        rep = verify_structure(g, lemma)
        assert rep.passed, (lemma, rep.counterexample)
        assert rep.checks > 0


def test_structure_lemma_preconditions():
    bad = graph(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)])
    with pytest.raises(PreconditionError):
        verify_structure(bad, TREE_EDGES)
    with pytest.raises(ValueError):
        verify_structure(bad, "Nope")


def test_four_cycle_breaks_tree_lemmas(k22):
    # the square is allowed but its forward paths meet again
    assert not verify_structure(k22, NEVER_MEET)
    assert not verify_structure(k22, TREE_EDGES)
    assert not verify_structure(k22, SINGLE_INCIDENCE)
