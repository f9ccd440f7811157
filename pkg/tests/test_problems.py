import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import eid, named, vid
from extkit import decide_extension_oracle, get_problem, is_extremal
from extkit.errors import CountMismatchError, IndexRangeError, PreconditionError
from extkit.graphs import Graph
from extkit.problems import (
    HittingSetInstance,
    complement_is_to_vc,
    extremality_with_privacy,
    feasibility,
    graph_instance,
    hs_to_instance,
    parse_hitting_set,
    serialize_hitting_set,
)

EDGE = {"ec", "em", "eds"}


def test_feasibility_examples(p3):
    assert feasibility("vc", p3, vid("b"))
    assert not feasibility("ds", p3, vid("a"))
    assert feasibility("eds", p3, eid(p3, "ab"))


def test_privacy_vc(p3):
    ok, rep = extremality_with_privacy("vc", p3, vid("b"))
    assert ok and rep.witnesses == {1: p3.edge_index(0, 1)}


def test_privacy_ec_p4(p4):
    ok, rep = extremality_with_privacy("ec", p4, eid(p4, "ab", "bc", "cd"))
    assert not ok
    assert rep.witnesses[p4.edge_index(1, 2)] is None
    assert rep.witnesses[p4.edge_index(0, 1)] == 0
    assert rep.witnesses[p4.edge_index(2, 3)] == 3


def test_privacy_ds(p3):
    ok, rep = extremality_with_privacy("ds", p3, vid("a", "c"))
    assert ok and rep.witnesses == {0: 0, 2: 2}


def test_privacy_requires_feasible(p3):
    with pytest.raises(PreconditionError):
        extremality_with_privacy("ds", p3, vid("a"))


def test_maximal_reports_addable(p4):
    ok, rep = extremality_with_privacy("em", p4, eid(p4, "bc"))
    assert ok and rep.addable is None
    ok, rep = extremality_with_privacy("is", p4, vid("a"))
    assert not ok and rep.addable == 2


def _touches(problem, g, x, w, cand):
    """Recompute privacy of witness w for element x from scratch."""
    if problem == "vc":
        u, v = g.edges[w]
        return x in (u, v) and len({u, v} & cand) == 1
    if problem == "ds":
        return len(g.closed_neighborhood(w) & cand) == 1 and w in g.closed_neighborhood(x)
    if problem == "ec":
        return w in g.edges[x] and sum(1 for k in cand if w in g.edges[k]) == 1
    if problem == "eds":
        ends = set(g.edges[w])
        return [k for k in cand if ends & set(g.edges[k])] == [x]
    raise AssertionError(problem)


@pytest.mark.parametrize("problem", ["vc", "is", "ds", "ec", "em", "eds"])
def test_privacy_agrees_with_extremality(problem):
    p = get_problem(problem)
    feas = oracles.PROBLEMS[problem][0]
    max_n = 6 if problem not in EDGE else 5
    for g in oracles.small_graphs(max_n):
        ground = range(g.m) if problem in EDGE else range(g.n)
        for S in oracles.subsets(ground):
            if not feas(g, S):
                continue
            ok, rep = extremality_with_privacy(problem, g, S)
            assert ok == is_extremal(p, g, S)
            if problem in ("is", "em"):
                assert (rep.addable is None) == ok
                continue
            assert ok == all(w is not None for w in rep.witnesses.values())
            for x, w in rep.witnesses.items():
                if w is not None:
                    assert _touches(problem, g, x, w, S)


@pytest.mark.slow
@pytest.mark.parametrize("problem", ["ec", "em", "eds"])
def test_privacy_edge_problems_six_vertices(problem):
    p = get_problem(problem)
    for g in oracles.small_graphs(6):
        if g.n < 6:
            continue
        check = p.mask_checker(g, None)
        for mask in range(1 << g.m):
            if check(mask):
                S = frozenset(k for k in range(g.m) if mask >> k & 1)
                assert extremality_with_privacy(problem, g, S)[0] == is_extremal(p, g, S)


def test_vc_is_duality():
    for g in oracles.small_graphs(6):
        V = frozenset(range(g.n))
        for U in oracles.subsets(V):
            a = decide_extension_oracle(graph_instance("vc", g, U)).answer
            b = decide_extension_oracle(graph_instance("is", g, V - U)).answer
            assert a == b


def test_complement_helper(p3):
    inst = complement_is_to_vc(graph_instance("is", p3, vid("a", "c")))
    assert inst.problem.problem_id.value == "vc" and inst.presolution == vid("b")


# -- hitting set ------------------------------------------------------------------


def test_hs_examples():
    h = HittingSetInstance(2, (frozenset({0}), frozenset({1})))
    assert decide_extension_oracle(hs_to_instance(h, ())).answer
    h = HittingSetInstance(2, (frozenset({0, 1}),))
    assert not decide_extension_oracle(hs_to_instance(h, {0, 1})).answer
    h = HittingSetInstance(1, (frozenset({0}),))
    assert decide_extension_oracle(hs_to_instance(h, {0})).answer


def test_hs_rejects_bad_hyperedges():
    with pytest.raises(ValueError):
        HittingSetInstance(2, (frozenset(),))
    with pytest.raises(IndexRangeError):
        HittingSetInstance(2, (frozenset({2}),))


def test_hs_parse():
    h = parse_hitting_set("3 2\n2 1 2\n1 3\n")
    assert h.hyperedges == (frozenset({0, 1}), frozenset({2}))
    with pytest.raises(CountMismatchError):
        parse_hitting_set("3 2\n2 1 2\n")
    with pytest.raises(IndexRangeError):
        parse_hitting_set("2 1\n1 3\n")


@st.composite
def hs_instances(draw):
    n = draw(st.integers(1, 6))
    edges = draw(st.lists(st.frozensets(st.integers(0, n - 1), min_size=1), max_size=6))
    return HittingSetInstance(n, tuple(edges))


@settings(max_examples=150, deadline=None)
@given(hs_instances(), st.data())
def test_hs_oracle_matches_reference(h, data):
    U = data.draw(st.frozensets(st.integers(0, h.ground_size - 1)))
    assert parse_hitting_set(serialize_hitting_set(h)) == h
    v = decide_extension_oracle(hs_to_instance(h, U))
    assert v.answer == oracles.ext_hs(h.ground_size, h.hyperedges, U)


def test_graph_instance_validates(p3):
    from extkit.errors import CandidateError

    with pytest.raises(CandidateError):
        graph_instance("vc", p3, {5})
    with pytest.raises(CandidateError):
        graph_instance("ec", Graph(2), {0})
    assert named("ab").m == 1
