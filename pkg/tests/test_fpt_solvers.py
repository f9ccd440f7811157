import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import eid, named, vid
from extkit.errors import PreconditionError
from extkit.fpt_solvers import (
    LucpInstance,
    LucpVoid,
    WeightedGraph,
    enumerate_minimal_vertex_covers,
    ext_em_dual,
    ext_em_standard,
    ext_r_dcps_dual,
    ext_r_ec_standard,
    independent_sets_in_u,
    lucp_feasible,
    matching_threshold_test,
    max_weight_degree_bounded_subgraph,
    max_weight_matching,
)
from extkit.graphs import Graph, complete_graph, path_graph, star_graph
from test_graphs import graphs


def _maximal_matching_ok(g, A, S):
    return oracles.is_matching(g, S) and not (S & A) and all(
        any(x in g.edges[k] for k in S for x in g.edges[j]) or j in S for j in range(g.m)
    )


# -- minimal vertex covers ------------------------------------------------------------


def test_mvc_k3(k3):
    assert sorted(map(sorted, enumerate_minimal_vertex_covers(k3))) == [[0, 1], [0, 2], [1, 2]]


def test_mvc_p3(p3):
    assert set(enumerate_minimal_vertex_covers(p3)) == {vid("b"), vid("a", "c")}


def test_mvc_edgeless():
    assert list(enumerate_minimal_vertex_covers(Graph(3))) == [frozenset()]


def test_mvc_matches_exhaustive():
    for g in oracles.small_graphs(6):
        got = list(enumerate_minimal_vertex_covers(g))
        assert len(got) == len(set(got))
        assert set(got) == set(oracles.extremal_solutions("vc", g))


# -- weighted matchings ------------------------------------------------------------------


def test_mwm_p3(p3):
    assert max_weight_matching(WeightedGraph(p3, (2, 3))) == (3, eid(p3, "bc"))


def test_mwm_p4(p4):
    assert max_weight_matching(WeightedGraph(p4, (1, 1, 1))) == (2, eid(p4, "ab", "cd"))


def test_mwm_empty():
    assert max_weight_matching(WeightedGraph(Graph(2), ())) == (0, frozenset())


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=7), st.data())
def test_mwm_equals_exhaustive(g, data):
    w = tuple(data.draw(st.lists(st.integers(0, 9), min_size=g.m, max_size=g.m)))
    total, chosen = max_weight_matching(WeightedGraph(g, w))
    assert oracles.is_matching(g, chosen) and sum(w[k] for k in chosen) == total
    assert total == oracles.max_matching_weight(g, w)


def test_degree_bounded_examples():
    s = star_graph(3)
    assert max_weight_degree_bounded_subgraph(WeightedGraph(s, (1, 1, 1)), 2)[0] == 2
    p = path_graph(4)
    assert max_weight_degree_bounded_subgraph(WeightedGraph(p, (1, 1, 1)), 1)[0] == 2
    k = complete_graph(4)
    w = (1, 2, 3, 4, 5, 6)
    assert max_weight_degree_bounded_subgraph(WeightedGraph(k, w), 3) == (21, frozenset(range(6)))


@settings(max_examples=100, deadline=None)
@given(graphs(max_n=6), st.integers(1, 3), st.data())
def test_degree_bounded_equals_exhaustive(g, r, data):
    w = tuple(data.draw(st.lists(st.integers(0, 5), min_size=g.m, max_size=g.m)))
    total, chosen = max_weight_degree_bounded_subgraph(WeightedGraph(g, w), r)
    assert oracles.is_r_dcps(g, chosen, r) and sum(w[k] for k in chosen) == total
    best = max(sum(w[k] for k in K) for K in oracles.subsets(range(g.m)) if oracles.is_r_dcps(g, K, r))
    assert total == best


# -- Ext EM ---------------------------------------------------------------------------------


def test_em_standard_examples(p3):
    v = ext_em_standard(p3, eid(p3, "ab"))
    assert v.answer and v.witness == eid(p3, "ab")
    assert not ext_em_standard(p3, frozenset()).answer
    assert ext_em_standard(p3, frozenset(range(p3.m))).answer


def test_em_dual_examples(p3):
    assert not ext_em_dual(p3, eid(p3, "ab", "bc")).answer
    v = ext_em_dual(p3, eid(p3, "ab"))
    assert v.answer and v.witness == eid(p3, "bc")
    assert ext_em_dual(p3, frozenset()).answer


def test_em_dual_unsafe_constant_counterexample():
    # ab, cd, ef with A = {ab}: S = {a} is a minimal cover of (V, A); the
    # matching {cd, ef} weighs 4 = |S|(|E|+1) without saturating a, yet no
    # maximal matching avoids ab.
    g = named("ab cd ef")
    A = eid(g, "ab")
    assert not oracles.ext("em", g, frozenset(range(g.m)) - A)
    assert matching_threshold_test(g, A, vid("a"), safe=False)[0]
    assert not matching_threshold_test(g, A, vid("a"), safe=True)[0]
    assert not ext_em_dual(g, A).answer


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=7), st.data())
def test_em_dual_matches_reference(g, data):
    if g.m > 12:
        return
    A = data.draw(st.frozensets(st.integers(0, g.m - 1))) if g.m else frozenset()
    v = ext_em_dual(g, A)
    assert v.answer == oracles.ext("em", g, frozenset(range(g.m)) - A)
    if v.answer:
        assert oracles.is_matching(g, v.witness) and not v.witness & A
        assert frozenset(v.witness) in oracles.extremal_solutions("em", g)


# -- r-DCPS ---------------------------------------------------------------------------------


def test_r_dcps_examples(p3, k3):
    assert ext_r_dcps_dual(p3, eid(p3, "ab"), 1).answer == ext_em_dual(p3, eid(p3, "ab")).answer
    assert ext_r_dcps_dual(k3, eid(k3, "ab"), 2).answer == oracles.ext_r_dcps(k3, eid(k3, "ab"), 2)
    g = named("ab bc cd ac")
    assert ext_r_dcps_dual(g, frozenset(), g.max_degree()).answer


def test_r_dcps_rejects_bad_r(p3):
    with pytest.raises(PreconditionError):
        ext_r_dcps_dual(p3, frozenset(), 0)


@settings(max_examples=150, deadline=None)
@given(graphs(max_n=6), st.integers(1, 3), st.data())
def test_r_dcps_matches_reference(g, r, data):
    if g.m > 11:
        return
    A = data.draw(st.frozensets(st.integers(0, g.m - 1))) if g.m else frozenset()
    v = ext_r_dcps_dual(g, A, r)
    assert v.answer == oracles.ext_r_dcps(g, A, r)
    if v.answer:
        assert not v.witness & A and oracles.is_r_dcps(g, v.witness, r)


# -- LUCP -------------------------------------------------------------------------------------


def test_lucp_examples(p3):
    assert lucp_feasible(LucpInstance(p3, (0, 0, 0), (1, 2, 1))) == frozenset()
    assert lucp_feasible(LucpInstance(p3, (1, 0, 1), (1, 2, 1))) == frozenset({0, 1})
    k2 = named("ab")
    res = lucp_feasible(LucpInstance(k2, (2, 2), (2, 2)))
    assert isinstance(res, LucpVoid) and not res


def _lucp_brute(g, lo, hi):
    for K in oracles.subsets(range(g.m)):
        deg = [0] * g.n
        for k in K:
            for x in g.edges[k]:
                deg[x] += 1
        if all(lo[v] <= deg[v] <= hi[v] for v in range(g.n)):
            return True
    return False


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=6), st.data())
def test_lucp_matches_exhaustive(g, data):
    if g.m > 8:
        return
    hi = [data.draw(st.integers(0, g.degree(v))) for v in range(g.n)]
    lo = [data.draw(st.integers(0, hi[v])) for v in range(g.n)]
    res = lucp_feasible(LucpInstance(g, tuple(lo), tuple(hi)))
    assert (res is not None) == _lucp_brute(g, lo, hi)
    if res is not None:
        deg = [0] * g.n
        for k in res:
            for x in g.edges[k]:
                deg[x] += 1
        assert all(lo[v] <= deg[v] <= hi[v] for v in range(g.n))


# -- r-EC ---------------------------------------------------------------------------------------


def test_r_ec_examples(p3, p4, k3):
    assert ext_r_ec_standard(p3, eid(p3, "ab", "bc"), 1).answer
    assert not ext_r_ec_standard(p4, eid(p4, "bc"), 1).answer
    v = ext_r_ec_standard(k3, frozenset(), 2)
    assert v.answer and v.witness == frozenset(range(3))


def test_r_ec_degree_precondition(p3):
    with pytest.raises(PreconditionError):
        ext_r_ec_standard(p3, frozenset(), 2)


def test_independent_sets_in_u(p3):
    got = set(independent_sets_in_u(p3, [0, 1]))
    assert got == {frozenset(), vid("a"), vid("b"), vid("c"), vid("a", "c")}


@pytest.mark.parametrize("r", [1, 2, 3])
def test_r_ec_matches_reference(r):
    rng = random.Random(r)
    checked = 0
    while checked < 120:
        g = oracles.random_graph(rng.randint(2, 7), rng.uniform(0.3, 0.9), rng)
        if g.m > 12 or any(g.degree(v) < r for v in range(g.n)):
            continue
        U = frozenset(k for k in range(g.m) if rng.random() < 0.3)
        v = ext_r_ec_standard(g, U, r)
        assert v.answer == oracles.ext_r_ec(g, U, r), (g, U, r)
        if v.answer:
            assert U <= v.witness and oracles.is_r_ec(g, v.witness, r)
            assert not any(oracles.is_r_ec(g, v.witness - {k}, r) for k in v.witness)
        checked += 1


def test_threshold_marks_saturable_covers_small():
    # exhaustive over all graphs with <= 4 vertices; the full <= 6 sweep is criterion 7
    for g in oracles.small_graphs(4):
        ms = list(oracles.all_matchings(g))
        for A in oracles.subsets(range(g.m)):
            for S in enumerate_minimal_vertex_covers(g.partial_graph(A)):
                truth = any(not K & A and S <= g.vertices_of(K) for K in ms)
                assert matching_threshold_test(g, A, S)[0] == truth
