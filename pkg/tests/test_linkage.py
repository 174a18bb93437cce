import itertools
import random

import numpy as np
import pytest

from tourney.generators import gen_random, gen_rotational, gen_transitive
from tourney.graph import Digraph, is_path, path_edges
from tourney.linkage import (
    LinkageError,
    Switch,
    brute_force_is_k_linked,
    build_linkage_structure,
    check_link_with_paths,
    check_switch,
    find_switch,
    link,
    link_internally_disjoint,
    link_short,
    link_with_paths,
    route,
)
from tourney.sorting_network import ComparatorNetwork, batcher


def _disjoint_linkage(D, pairs, paths):
    assert len(paths) == len(pairs)
    seen = set()
    for p, (x, y) in zip(paths, pairs):
        assert is_path(D, p) and p[0] == x and p[-1] == y
        assert not seen & set(p)
        seen |= set(p)


def _internally_disjoint(D, pairs, paths):
    ends = {v for p in pairs for v in p}
    inner = set()
    for p, (x, y) in zip(paths, pairs):
        assert is_path(D, p) and p[0] == x and p[-1] == y
        mid = set(p[1:-1])
        assert not mid & inner and not mid & ends
        inner |= mid


# --- switches ---------------------------------------------------------------------


def test_switch_instance_validates():
    # a1=0, a2=1, b=2, b1=3, b2=4 with 0 -> 2 and 1 -> 3, 4, completed to a tournament
    adj = np.zeros((5, 5), dtype=bool)
    for u, v in [(0, 2), (2, 3), (2, 4), (1, 3), (1, 4), (0, 1), (0, 3), (0, 4), (1, 2), (3, 4)]:
        adj[u, v] = True
    T = Digraph(adj)
    assert T.is_tournament
    assert check_switch(T, Switch(0, 1, 2, 3, 4, 1))
    # entries of a 5-vertex host cannot meet the out-degree 7 precondition
    with pytest.raises(LinkageError, match="out-degree"):
        find_switch(T, 0, 1)


def test_find_switch_random():
    T = gen_random(40, 11)
    sw = find_switch(T, 0, 1)
    assert check_switch(T, sw)
    assert {sw.a1, sw.a2} == {0, 1}
    for swap in (False, True):
        p, q = sw.route(swap)
        assert p[0] == 0 and q[0] == 1
        assert {p[-1], q[-1]} == {sw.b1, sw.b2}


def test_find_switch_low_degree():
    T = gen_transitive(20)
    with pytest.raises(LinkageError):
        find_switch(T, 16, 2)  # vertex 16 has out-degree 3
    with pytest.raises(LinkageError):
        find_switch(T, 2, 2)


@pytest.mark.parametrize("seed", range(10))
def test_switches_on_random_hosts(seed):
    T = gen_random(30, seed)
    rng = random.Random(seed)
    a1, a2 = rng.sample([v for v in range(30) if T.out_degrees[v] >= 7], 2)
    assert check_switch(T, find_switch(T, a1, a2))


# --- linkage structure ----------------------------------------------------------------


def test_empty_network_structure():
    T = gen_random(20, 0)
    st = build_linkage_structure(T, [3, 5], ComparatorNetwork(2, ()))
    assert st.zs == (3, 5) and st.vertices == {3, 5}
    assert route(st, (1, 2)) == [(3,), (5,)]


def test_structure_size_and_routes():
    T = gen_random(400, 5)
    net = batcher(3)
    st = build_linkage_structure(T, [0, 1, 2], net)
    assert st.size == 3 * len(net) + 3
    assert len(set(st.zs)) == 3
    for pi in itertools.permutations((1, 2, 3)):
        paths = route(st, pi)
        _disjoint_linkage(T, [(st.xs[pi[i] - 1], st.zs[i]) for i in range(3)], paths)
        assert set().union(*map(set, paths)) <= st.vertices


def test_single_comparator_swap_crosses_middle():
    T = gen_random(60, 3)
    st = build_linkage_structure(T, [0, 1], batcher(2))
    sw = st.switches[0]
    straight = route(st, (1, 2))
    crossed = route(st, (2, 1))
    for paths in (straight, crossed):
        assert not set(paths[0]) & set(paths[1])
    assert crossed[0][0] == 1 and crossed[1][0] == 0
    assert any(sw.b in p for p in crossed)


def test_transitive_structure_reports_failure():
    with pytest.raises(LinkageError, match="precondition"):
        build_linkage_structure(gen_transitive(30), [27, 28], batcher(2))
    with pytest.raises(LinkageError, match="comparator 1"):
        build_linkage_structure(gen_transitive(30), [27, 28], batcher(2), check_degree=False)


# --- link ------------------------------------------------------------------------------------


def test_link_single_pair(triangle):
    assert link(triangle, [(0, 2)]) == [(0, 1, 2)]


def test_link_two_pairs_random():
    T = gen_random(600, 2)
    pairs = [(0, 1), (2, 3)]
    _disjoint_linkage(T, pairs, link(T, pairs))


def test_link_transitive_fails_with_cut():
    T = gen_transitive(100)
    with pytest.raises(LinkageError) as err:
        link(T, [(99, 0)])
    assert err.value.stage == "menger" and err.value.cut == set()


def test_link_rejects_repeated_endpoints():
    with pytest.raises(LinkageError):
        link(gen_random(50, 1), [(0, 1), (1, 2)])


def test_strict_mode_rejects_desk_scale():
    with pytest.raises(LinkageError, match="strict"):
        link(gen_random(60, 1), [(0, 1), (2, 3)], mode="strict")


def test_internally_disjoint_distinct_pairs_match_link():
    T = gen_random(300, 4)
    pairs = [(0, 1), (2, 3)]
    assert link_internally_disjoint(T, pairs) == link(T, pairs)


@pytest.mark.parametrize("method", ["network", "greedy"])
def test_internally_disjoint_shared_source(method):
    T = gen_random(400, 6)
    pairs = [(0, 5), (0, 9), (3, 3)]
    paths = link_internally_disjoint(T, pairs, method=method)
    assert paths[2] == (3,)
    _internally_disjoint(T, pairs, paths)


def test_link_short_bound():
    T = gen_random(1000, 9)
    paths = link_short(T, [(0, 1), (2, 3)], 5)
    assert len({v for p in paths for v in p}) <= 200
    _internally_disjoint(T, [(0, 1), (2, 3)], paths)


def test_link_short_trivial(triangle):
    # s = 1 asks for two families; the triangle has only one 0 -> 2 path
    with pytest.raises(LinkageError):
        link_short(triangle, [(0, 2)], 1, method="greedy")
    assert link_short(triangle, [(0, 2)], 1, method="greedy", allow_partial=True) == [(0, 1, 2)]
    paths = link_short(gen_rotational(3), [(0, 2)], 1, method="greedy")
    assert paths == [(0, 2)]
    paths = link_short(gen_random(80, 2), [(4, 4), (4, 4)], 2, method="greedy")
    assert paths == [(4,), (4,)]


def test_link_with_paths_empty_systems():
    T = gen_random(400, 7)
    pairs = [(0, 1), (2, 3)]
    paths = link_with_paths(T, pairs, [[], []], 2)
    assert all(check_link_with_paths(T, pairs, [[], []], paths, 2).values())


def test_link_with_paths_absorbs_subpath():
    T = gen_random(400, 8)
    q = next((a, b, c) for a in range(10, 400) for b in T.out_neighbours(a) for c in T.out_neighbours(b)
             if b > 9 and c > 9 and c != a)
    q = tuple(int(v) for v in q)
    paths = link_with_paths(T, [(0, 1)], [[q]], 2)
    assert all(check_link_with_paths(T, [(0, 1)], [[q]], paths, 2).values())


def test_link_with_paths_overlap_only_inside_systems():
    T = gen_random(500, 12)
    shared = next(v for v in range(10, 500) if T.adj[v, 20] and T.adj[21, v] and v not in (20, 21))
    q1 = [(int(shared), 20)]
    q2 = [(21, int(shared))]
    pairs = [(0, 1), (2, 3)]
    paths = link_with_paths(T, pairs, [q1, q2], 2, method="greedy")
    rep = check_link_with_paths(T, pairs, [q1, q2], paths, 2)
    assert all(rep.values())
    assert set(paths[0]) & set(paths[1]) <= {shared}


def test_link_with_paths_rejects_bad_systems():
    T = gen_random(100, 1)
    with pytest.raises(LinkageError):
        link_with_paths(T, [(0, 1)], [[(0, 5)]], 1)
    with pytest.raises(LinkageError):
        link_with_paths(T, [(0, 1)], [], 1)


# --- oracle ----------------------------------------------------------------------------------


def test_oracle_small_cases(triangle):
    assert brute_force_is_k_linked(triangle, 1)
    assert not brute_force_is_k_linked(gen_transitive(4), 1)
    with pytest.raises(ValueError):
        brute_force_is_k_linked(gen_random(11, 0), 1)


def test_greedy_linker_is_sound_against_oracle():
    # rotational(3) is strongly 3-connected but not 2-linked
    T = gen_rotational(3)
    assert not brute_force_is_k_linked(T, 2)
    failures = 0
    for ends in itertools.permutations(range(7), 4):
        pairs = [(ends[0], ends[2]), (ends[1], ends[3])]
        try:
            paths = link_internally_disjoint(T, pairs, method="greedy")
        except LinkageError:
            failures += 1
            continue
        _disjoint_linkage(T, pairs, paths)
    assert failures > 0


@pytest.mark.parametrize("seed", range(5))
def test_greedy_k1_matches_strong_connectivity(seed):
    T = gen_random(8, seed)
    ok = True
    for x, y in itertools.permutations(range(8), 2):
        try:
            link_internally_disjoint(T, [(x, y)], method="greedy")
        except LinkageError:
            ok = False
    assert ok == brute_force_is_k_linked(T, 1)


def test_robust_linkage_after_deletion():
    # deleting a vertex from a 3-pair instance still leaves 2 pairs linkable
    T = gen_random(500, 21)
    pairs = [(0, 1), (2, 3), (4, 5)]
    _disjoint_linkage(T, pairs, link(T, pairs))
    used = set(path_edges(link(T, pairs)[0]))
    assert used
    paths = link(T, pairs[1:], exclude=[0])
    _disjoint_linkage(T, pairs[1:], paths)
