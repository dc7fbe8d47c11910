from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import C5_VECTORS
from topobounds.algebra import GF, QQ, in_span
from topobounds.errors import InsufficientRank, InvalidInput, InvalidParameter
from topobounds.graphs import Graph
from topobounds.matroids import (
    LinearMatroid,
    TransversalMatroid,
    UniformMatroid,
    closure_trace,
    greedy_independent_subset,
    oracle_from_json,
    uniform_matroid,
)


def gf2_example() -> LinearMatroid:
    return LinearMatroid.from_vectors(GF(2), {"a": (1, 0), "b": (0, 1), "c": (1, 1)})


def shared_target() -> TransversalMatroid:
    return TransversalMatroid(Graph(["u1", "u2", "w"], [("u1", "w"), ("u2", "w")]), ["u1", "u2"])


def random_transversal(rng: random.Random) -> TransversalMatroid:
    side = [f"u{i}" for i in range(rng.randint(1, 6))]
    other = [f"w{i}" for i in range(rng.randint(1, 5))]
    edges = [(u, w) for u in side for w in other if rng.random() < 0.35]
    return TransversalMatroid(Graph(side + other, edges), side)


def random_linear(rng: random.Random) -> LinearMatroid:
    f = rng.choice([GF(2), GF(3), QQ])
    dim = rng.randint(1, 4)
    n = rng.randint(1, 7)
    return LinearMatroid.from_vectors(
        f, {f"e{i}": [rng.randint(-2, 2) for _ in range(dim)] for i in range(n)}
    )


def test_uniform_examples():
    u42 = uniform_matroid(4, 2)
    assert u42.rank(["1", "2", "3"]) == 2
    assert uniform_matroid(3, 3).rank(["1", "2"]) == 2
    u50 = uniform_matroid(5, 0)
    assert u50.rank(u50.ground) == 0 and u50.is_loop("1")
    with pytest.raises(InvalidParameter):
        uniform_matroid(2, 3)


def test_linear_examples():
    m = gf2_example()
    assert m.rank(["a", "b", "c"]) == 2
    z = LinearMatroid.from_vectors(GF(3), {"z": (0, 0)})
    assert z.rank(["z"]) == 0
    c5 = LinearMatroid.from_vectors(QQ, {str(i): v for i, v in enumerate(C5_VECTORS)})
    assert c5.full_rank == 3


def test_transversal_examples():
    assert shared_target().rank(["u1", "u2"]) == 1
    pm = Graph(["a", "b", "c", "x", "y", "z"], [("a", "x"), ("b", "y"), ("c", "z")])
    assert TransversalMatroid(pm, ["a", "b", "c"]).rank(["a", "b", "c"]) == 3
    iso = TransversalMatroid(Graph(["u", "w"]), ["u"])
    assert iso.rank(["u"]) == 0
    with pytest.raises(InvalidInput):
        TransversalMatroid(Graph(["a", "b"], [("a", "b")]), ["a", "b"])


def test_closure_trace_examples():
    m = gf2_example()
    assert closure_trace(m, ["a"], ["a", "b", "c"]) == ["a"]
    u32 = uniform_matroid(3, 2)
    assert closure_trace(u32, ["1", "2"], u32.ground) == ["1", "2", "3"]
    assert closure_trace(shared_target(), ["u1"], ["u1", "u2"]) == ["u1", "u2"]


def test_greedy_examples():
    assert greedy_independent_subset(uniform_matroid(4, 2), ["1", "2", "3", "4"], 2) == ["1", "2"]
    m = LinearMatroid.from_vectors(GF(2), {"z": (0, 0), "a": (1, 0), "b": (0, 1)})
    assert greedy_independent_subset(m, ["z", "a", "b"], 2) == ["a", "b"]
    with pytest.raises(InsufficientRank):
        greedy_independent_subset(gf2_example(), ["a", "b", "c"], 3)


def test_json_round_trip():
    for m in (uniform_matroid(4, 2), gf2_example(), shared_target()):
        again = oracle_from_json(m.to_json())
        assert again.ground == m.ground
        assert all(again.rank_mask(s) == m.rank_mask(s) for s in range(1 << len(m.ground)))
    with pytest.raises(InvalidInput):
        oracle_from_json({"kind": "graphic"})


def check_axioms(m, rng: random.Random, samples: int = 60) -> None:
    n = len(m.ground)
    full = (1 << n) - 1
    assert m.rank_mask(0) == 0
    for _ in range(samples):
        a, b = rng.randint(0, full), rng.randint(0, full)
        ra, rb = m.rank_mask(a), m.rank_mask(b)
        assert ra <= a.bit_count()
        assert ra + rb >= m.rank_mask(a | b) + m.rank_mask(a & b)
        if a & b == a:
            assert ra <= rb
        for i in range(n):
            assert m.rank_mask(a | 1 << i) <= ra + 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_oracles_are_matroids(seed):
    rng = random.Random(seed)
    m = rng.randint(0, 7)
    for oracle in (UniformMatroid(m, rng.randint(0, m)), random_linear(rng), random_transversal(rng)):
        check_axioms(oracle, rng)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_transversal_rank_two_ways(seed):
    rng = random.Random(seed)
    t = random_transversal(rng)
    for s in range(1 << len(t.ground)):
        els = t.elements(s)
        assert t.rank(els) == t.rank_by_deletion(els)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_greedy_output_is_independent(seed):
    rng = random.Random(seed)
    m = random_linear(rng) if seed % 2 else random_transversal(rng)
    s = m.elements(rng.randint(0, (1 << len(m.ground)) - 1))
    k = rng.randint(0, m.rank(s))
    out = greedy_independent_subset(m, s, k)
    assert len(out) == k and m.rank(out) == k


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_linear_closure_matches_in_span(seed):
    rng = random.Random(seed)
    m = random_linear(rng)
    s = m.elements(rng.randint(0, (1 << len(m.ground)) - 1))
    trace = closure_trace(m, s, m.ground)
    span = [m.vector(e) for e in s]
    assert trace == [e for e in m.ground if in_span(m.vector(e), span)]
