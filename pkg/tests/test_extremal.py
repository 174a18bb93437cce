import math

import networkx as nx
import pytest
from conftest import tournaments
from hypothesis import given, settings

from tourney.engine import k_hamilton_cycles
from tourney.extremal import (
    check_regular_witness,
    cut_certifies,
    hamilton_cycles,
    max_hamilton_packing,
    max_regular_degree,
    regular_feasible,
    verify_extremal_claims,
)
from tourney.generators import gen_extremal, gen_planted, gen_random, gen_rotational, gen_transitive


def _nx_feasible(D, r):
    G = nx.DiGraph()
    for v in range(D.n):
        G.add_edge("s", ("o", v), capacity=r)
        G.add_edge(("i", v), "t", capacity=r)
    for u, v in D.edges():
        G.add_edge(("o", u), ("i", v), capacity=1)
    return nx.maximum_flow_value(G, "s", "t") == r * D.n


def _nx_max_r(D):
    r = 0
    while _nx_feasible(D, r + 1):
        r += 1
    return r


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_rotational_is_its_own_witness(ell):
    T = gen_rotational(ell)
    rep = max_regular_degree(T)
    assert rep.max_r == ell
    assert check_regular_witness(T, rep.witness, ell)
    assert cut_certifies(T, rep.cut, ell + 1)


def test_transitive_has_no_regular_subdigraph():
    rep = max_regular_degree(gen_transitive(6))
    assert rep.max_r == 0 and rep.witness == []
    assert cut_certifies(gen_transitive(6), rep.cut, 1)


def test_extremal_five_one():
    rep = max_regular_degree(gen_extremal(5, 1))
    assert rep.max_r <= 2


@given(tournaments(min_n=3, max_n=9))
@settings(max_examples=40)
def test_max_r_matches_networkx(T):
    rep = max_regular_degree(T)
    assert rep.max_r == _nx_max_r(T)
    assert check_regular_witness(T, rep.witness, rep.max_r)
    assert rep.cut is not None and cut_certifies(T, rep.cut, rep.max_r + 1)


@pytest.mark.parametrize("seed", range(3))
def test_max_r_matches_networkx_larger(seed):
    T = gen_random(30, seed)
    assert max_regular_degree(T).max_r == _nx_max_r(T)


def test_infeasible_cut_is_tight():
    T = gen_extremal(7, 2)
    ok, witness, cut = regular_feasible(T, 3)
    assert not ok and witness == []
    assert cut_certifies(T, cut, 3)
    cut.capacity += 1
    assert not cut_certifies(T, cut, 3)


def test_witness_checker_rejects():
    T = gen_rotational(2)
    assert not check_regular_witness(T, [(0, 1)], 1)
    assert not check_regular_witness(T, [(1, 0)], 1)


def test_hamilton_enumeration_small():
    T = gen_rotational(2)
    cycles = hamilton_cycles(T)
    assert len(cycles) == len(set(cycles)) > 0
    assert max_hamilton_packing(T) == 2  # T_2 decomposes into two Hamilton cycles
    with pytest.raises(ValueError):
        hamilton_cycles(gen_random(13, 0))


@pytest.mark.parametrize("m, ell", [(5, 1), (7, 2), (9, 3)])
def test_extremal_claims(m, ell):
    rep = verify_extremal_claims(m, ell)
    assert rep["kappa_lower_ok"] and rep["kappa"] >= ell
    assert rep["claim2_applicable"] and rep["claim2_ok"]
    assert rep["max_r"] <= math.sqrt(4 * ell)
    assert rep["edges_into_A_ok"] and rep["binomial_ok"] and rep["cut_certifies"]
    if m == 5:
        assert rep["ham_packing"] <= rep["max_r"] and rep["ham_upper_ok"]
    else:
        assert rep["ham_packing"] is None


def test_claim_not_applicable_for_small_m():
    rep = verify_extremal_claims(2, 2, ham_limit=0)
    assert not rep["claim2_applicable"] and rep["claim2_ok"] is None


@pytest.mark.parametrize("ell", range(1, 7))
def test_binomial_chain(ell):
    m = math.isqrt(4 * ell) + 1
    T = gen_extremal(m, ell)
    r = max_regular_degree(T).max_r
    assert math.comb(r + 1, 2) <= 2 * ell + 1


def test_guards():
    with pytest.raises(ValueError):
        verify_extremal_claims(0, 1)
    with pytest.raises(ValueError):
        verify_extremal_claims(60, 3)


def test_cycles_embed_in_regular_subdigraph():
    T, planted = gen_planted(21, 3, 5)
    assert max_regular_degree(T).max_r >= 3
    T = gen_random(500, 0)
    cert = k_hamilton_cycles(T, 2)
    if cert.valid:
        assert max_regular_degree(T).max_r >= len(cert.cycles)
