import networkx as nx
import pytest
from conftest import tournaments
from hypothesis import given, settings
from hypothesis import strategies as st
from networkx.algorithms.connectivity import local_node_connectivity

from tourney.bits import full, to_bits
from tourney.connectivity import (
    brute_force_connectivity,
    connectivity,
    is_strongly_connected,
    is_strongly_k_connected,
    local_connectivity,
    menger_paths,
    separates,
    strong_components,
)
from tourney.generators import gen_extremal, gen_random, gen_rotational, gen_transitive
from tourney.graph import is_path


def _check_menger(D, A, B, k, res):
    if res.ok:
        assert len(res.paths) == k
        used = set()
        for p in res.paths:
            assert is_path(D, p)
            assert p[0] in A and p[-1] in B
            assert not used & set(p)
            used |= set(p)
    else:
        assert len(res.cut) < k
        assert separates(D, A, B, res.cut)


def test_menger_transitive_head_to_tail_fails():
    T = gen_transitive(10)
    res = menger_paths(T, [9], [0], 1)
    assert not res.ok and res.cut == set()


def test_menger_random_disjoint_paths():
    T = gen_random(60, 4)
    A, B = range(0, 5), range(50, 55)
    res = menger_paths(T, A, B, 5)
    assert res.ok
    _check_menger(T, set(A), set(B), 5, res)


def test_menger_shared_vertices_are_trivial_paths():
    T = gen_random(20, 1)
    res = menger_paths(T, [0, 1, 2], [2, 3, 4], 3)
    assert res.ok and (2,) in res.paths


def test_menger_rerouting_keeps_new_edges():
    # the last augmentation cancels 0 -> 4 and reroutes 0 through 5
    T = gen_random(7, 114)
    A, B = {0, 1, 2, 3, 6}, {2, 3, 4, 5, 6}
    res = menger_paths(T, A, B, 5)
    _check_menger(T, A, B, 5, res)


def test_menger_needs_big_enough_sets():
    with pytest.raises(ValueError):
        menger_paths(gen_random(10, 0), [0], [1, 2], 2)


@given(tournaments(min_n=3, max_n=9), st.data())
def test_menger_paths_or_separator(T, data):
    n = T.n
    A = set(data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True)))
    B = set(data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True)))
    ex = set(data.draw(st.lists(st.integers(0, n - 1), max_size=2, unique=True)))
    k = data.draw(st.integers(1, min(len(A), len(B))))
    res = menger_paths(T, A, B, k, exclude=ex)
    if res.ok:
        assert not ex & {v for p in res.paths for v in p}
        _check_menger(T, A, B, k, res)
    else:
        assert len(res.cut) < k and separates(T, A - ex, B - ex, res.cut | ex)


@given(tournaments(min_n=1, max_n=8))
@settings(max_examples=150)
def test_kappa_matches_brute_force(T):
    rep = connectivity(T)
    assert rep.kappa == brute_force_connectivity(T)
    if rep.witness_cut is not None and rep.kappa < T.n - 1:
        assert len(rep.witness_cut) == rep.kappa
        rest = full(T.n) & ~to_bits(rep.witness_cut)
        assert not is_strongly_connected(T, rest)


def test_local_connectivity_matches_networkx():
    for seed in range(20):
        T = gen_random(11, seed)
        G = nx.DiGraph(T.adj.astype(int))
        for u in range(T.n):
            for v in range(T.n):
                if u != v and not T.adj[u, v]:
                    assert local_connectivity(T, u, v)[0] == local_node_connectivity(G, u, v)


def test_rotational_two_has_kappa_two():
    assert connectivity(gen_rotational(2)).kappa == 2


@pytest.mark.parametrize("ell", [1, 2, 3])
def test_extremal_kappa_at_least_ell(ell):
    assert connectivity(gen_extremal(2 * ell + 3, ell)).kappa >= ell


def test_transitive_has_kappa_zero():
    rep = connectivity(gen_transitive(7))
    assert rep.kappa == 0 and not is_strongly_connected(gen_transitive(7))
    assert len(strong_components(gen_transitive(7))) == 7


@given(tournaments(min_n=2, max_n=8), st.integers(0, 7))
def test_kappa_drops_by_at_most_one(T, v):
    v %= T.n
    kappa = connectivity(T).kappa
    S, _ = T.remove_vertices([v])
    assert connectivity(S).kappa >= kappa - 1


@given(tournaments(min_n=2, max_n=8))
def test_is_strongly_k_connected_consistent(T):
    kappa = brute_force_connectivity(T)
    for k in range(0, T.n + 1):
        assert is_strongly_k_connected(T, k) == (k <= kappa and (k == 0 or T.n > k))


def test_components_partition():
    T = gen_random(40, 8).remove_edges([])
    comps = strong_components(T)
    assert sorted(v for c in comps for v in c) == list(range(40))
