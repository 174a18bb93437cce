import pytest
from conftest import tournaments
from hypothesis import given, settings
from hypothesis import strategies as st

from tourney.bits import full
from tourney.connectivity import is_strongly_connected
from tourney.domination import (
    CoveringEdge,
    DominationError,
    check_covering_edge,
    check_dom_family,
    check_transitive_domination,
    covering_edge,
    in_dom_family,
    in_dom_transitive,
    out_dom_family,
    out_dom_transitive,
)
from tourney.generators import gen_random, gen_rotational, gen_transitive


def test_covering_edge_rotational_two():
    e = covering_edge(gen_rotational(2), 0)
    assert e == CoveringEdge(0, 4, 1)
    assert e.activating == ((4, 0), (0, 1))


def test_covering_edge_triangle_fails(triangle):
    with pytest.raises(DominationError):
        covering_edge(triangle, 0)


@pytest.mark.parametrize("ell", [3, 5, 8])
def test_covering_edges_rotational(ell):
    T = gen_rotational(ell)
    edges = [covering_edge(T, v) for v in range(T.n)]
    assert all(check_covering_edge(T, e) for e in edges)
    assert [e.v for e in edges] == list(range(T.n))


@given(tournaments(min_n=3, max_n=10), st.integers(0, 9))
def test_covering_edge_exists_iff_proof_conditions(T, v):
    v %= T.n
    rest = full(T.n) & ~(1 << v)
    try:
        e = covering_edge(T, v)
    except DominationError:
        assert not (T.in_bits[v] and T.out_bits[v] and is_strongly_connected(T, rest))
        return
    assert check_covering_edge(T, e) and e.v == v


def test_out_dom_transitive_head_of_transitive():
    dom = out_dom_transitive(gen_transitive(20), 19, 3)
    A, E = dom
    assert A == {19, 0} and E == set()
    assert all(check_transitive_domination(gen_transitive(20), dom, 3).values())


def test_in_dom_transitive_tail_of_transitive():
    B, E = in_dom_transitive(gen_transitive(20), 0, 3)
    assert B == {0, 19} and E == set()


def test_out_dom_transitive_random_bound():
    T = gen_random(200, 13)
    v = int(T.in_degrees.argmin())
    dom = out_dom_transitive(T, v, 4, debug=True)
    assert len(dom.exceptional) <= T.in_degrees[v] / 8
    assert all(check_transitive_domination(T, dom, 4).values())


def test_degree_precondition():
    T = gen_transitive(20)
    with pytest.raises(DominationError):
        out_dom_transitive(T, 4, 2)  # in-degree 4: log 4 - 1 = 1 < 2
    with pytest.raises(DominationError):
        in_dom_transitive(T, 15, 2)
    with pytest.raises(DominationError):
        out_dom_transitive(T, 19, 1)


@given(st.integers(0, 10_000), st.integers(2, 5))
@settings(max_examples=30)
def test_in_dom_is_reversed_out_dom(seed, c):
    T = gen_random(120, seed)
    v = seed % 120
    try:
        a = out_dom_transitive(T.reverse(), v, c)
    except DominationError:
        with pytest.raises(DominationError):
            in_dom_transitive(T, v, c)
        return
    b = in_dom_transitive(T, v, c)
    assert b.vertices == tuple(reversed(a.vertices))
    assert b.exceptional == a.exceptional and b.trace == a.trace


def test_family_singleton_matches_single():
    T = gen_random(300, 2)
    fam = out_dom_family(T, [7], 4)
    single = out_dom_transitive(T, 7, 4)
    assert fam.sets[7] == single.vertices and fam.exceptionals[7] == single.exceptional


@pytest.mark.parametrize("fn", [out_dom_family, in_dom_family])
def test_family_checker_passes(fn):
    T = gen_random(500, 17)
    fam = fn(T, [0, 1, 2, 3, 4, 5], 4)
    assert all(check_dom_family(T, fam).values())


def test_family_degree_hypothesis():
    with pytest.raises(DominationError, match="2\\^\\(c\\+1\\)"):
        out_dom_family(gen_random(40, 1), [0, 1], 4)


def test_family_checker_catches_overlap():
    T = gen_random(500, 17)
    fam = out_dom_family(T, [0, 1], 4)
    fam.sets[1] = fam.sets[1][:-1] + (fam.sets[0][0], 1)
    rep = check_dom_family(T, fam)
    assert not rep["vi"]
