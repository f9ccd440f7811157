from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from extkit.binpacking import (
    BpInstance,
    Partition,
    all_partitions,
    bp_instance,
    delta_candidates,
    ext_bp_dp,
    ext_bp_oracle,
    fill_delta_table,
    is_feasible_partition,
    is_minimal_partition,
    is_minimal_partition_all_pairs,
    parse_bp,
    refinements,
    serialize_bp,
)
from extkit.errors import (
    CandidateError,
    IndexRangeError,
    InvalidInstanceError,
    MalformedLineError,
    PreconditionError,
    SizeLimitError,
)
from extkit.framework import decide_extension_oracle


def bi(*ws):
    return BpInstance(tuple(F(w) for w in ws))


def part(n, *blocks):
    return Partition.of([[x - 1 for x in b] for b in blocks], n)


def test_feasibility_examples():
    assert is_feasible_partition(bi("0.6", "0.6"), part(2, [1], [2]))
    assert not is_feasible_partition(bi("0.6", "0.6"), part(2, [1, 2]))
    assert is_feasible_partition(bi("1/3", "1/3", "1/3"), part(3, [1, 2, 3]))


def test_minimality_examples():
    assert is_minimal_partition(bi("0.6", "0.6"), part(2, [1], [2]))
    assert not is_minimal_partition(bi("1/3", "1/3"), part(2, [1], [2]))
    assert is_minimal_partition(bi("0.4", "0.5"), part(2, [1, 2]))


def test_minimality_requires_feasible():
    with pytest.raises(PreconditionError):
        is_minimal_partition(bi("0.6", "0.6"), part(2, [1, 2]))


def test_delta_candidates_examples():
    assert delta_candidates(bi("0.6", "0.6")) == [F(2, 5)]
    assert delta_candidates(bi("1/3")) == []


def test_weights_strictly_inside_unit_interval():
    with pytest.raises(InvalidInstanceError):
        bi(1)
    with pytest.raises(InvalidInstanceError):
        bi(0)


def test_dp_examples():
    v = ext_bp_dp(bi("0.6", "0.6"), part(2, [1], [2]))
    assert v.answer and v.witness == part(2, [1], [2])
    assert not ext_bp_dp(bi("1/3", "1/3"), part(2, [1], [2])).answer
    seven = bi("2/3", *["1/3"] * 6)
    assert ext_bp_dp(seven, part(7, [1], [2, 3, 4, 5, 6, 7])).answer


def test_oracle_examples():
    v = ext_bp_oracle(bi("0.3", "0.4"), part(2, [1, 2]))
    assert v.answer and v.witness == part(2, [1, 2])
    # {1,2} must split; {1},{2},{3} has lightest pair 1.4 > 1
    v = ext_bp_oracle(bi("0.7", "0.7", "0.7"), part(3, [1, 2], [3]))
    assert v.answer and v.witness == part(3, [1], [2], [3])
    assert not ext_bp_oracle(bi("0.2", "0.2"), part(2, [1], [2])).answer


def test_oracle_cap():
    with pytest.raises(SizeLimitError):
        ext_bp_oracle(bi(*["0.1"] * 11), Partition.of([range(11)], 11))


def test_partition_validation():
    with pytest.raises(CandidateError):
        Partition.of([[0], [0, 1]], 2)
    with pytest.raises(CandidateError):
        Partition.of([[0]], 2)


def test_refinement_count():
    # refinements of {{1,2,3},{4,5}}: Bell(3) * Bell(2)
    assert sum(1 for _ in refinements(part(5, [1, 2, 3], [4, 5]), 5)) == 10
    assert sum(1 for _ in all_partitions(5)) == 52


@st.composite
def bp_cases(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    den = draw(st.sampled_from([2, 3, 4, 5, 6, 10]))
    ws = tuple(F(draw(st.integers(1, den - 1)), den) for _ in range(n))
    labels = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    blocks = [[i for i in range(n) if labels[i] == j] for j in set(labels)]
    return BpInstance(ws), Partition.of(blocks, n)


@settings(max_examples=200, deadline=None)
@given(bp_cases())
def test_dp_matches_reference(case):
    inst, pi = case
    truth = oracles.ext_bp(inst.weights, [sorted(b) for b in pi.blocks])
    d = ext_bp_dp(inst, pi)
    assert d.answer == truth == ext_bp_oracle(inst, pi).answer
    if d.answer:
        assert d.witness.refines(pi)
        assert oracles.minimal_bp(inst.weights, [sorted(b) for b in d.witness.blocks])


@settings(max_examples=100, deadline=None)
@given(bp_cases(max_n=6))
def test_generic_oracle_agrees(case):
    inst, pi = case
    assert decide_extension_oracle(bp_instance(inst, pi)).answer == ext_bp_oracle(inst, pi).answer


@settings(max_examples=150, deadline=None)
@given(bp_cases(max_n=7))
def test_two_lightest_shortcut(case):
    inst, _ = case
    for pi in all_partitions(inst.n):
        if is_feasible_partition(inst, pi):
            assert is_minimal_partition(inst, pi) == is_minimal_partition_all_pairs(inst, pi)


@settings(max_examples=60, deadline=None)
@given(bp_cases(max_n=6))
def test_dp_runs_close_heavy_bins(case):
    # every closed bin implied by a reachable state weighs between 1 - delta and 1
    inst, pi = case
    for delta in delta_candidates(inst):
        table = fill_delta_table(inst, pi, delta)
        for state, prev in table.parent.items():
            # a bin is closed when the new open bin holds only the item just added
            if prev is None or not prev[1] or state[1] != state[0] ^ prev[0]:
                continue
            closed = [i for i in range(inst.n) if prev[1] >> i & 1]
            w = inst.weight(closed)
            assert 1 - delta <= w <= 1


def test_parse_roundtrip():
    inst, pi = bi("1/3", "0.5", "2/7"), part(3, [1, 3], [2])
    back = parse_bp(serialize_bp(inst, pi, "demo"))
    assert back == (inst, pi)


@pytest.mark.parametrize(
    "text, err",
    [
        ("2\n0.5\n1 2\n", MalformedLineError),
        ("2\n0.5 1.5\n1 2\n", MalformedLineError),
        ("2\n0.5 0.5\n1 3\n", IndexRangeError),
        ("2\n0.5 0.5\n1\n", MalformedLineError),
        ("x\n", MalformedLineError),
    ],
)
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_bp(text)
