from __future__ import annotations

import random
from itertools import product

import pytest

from conftest import C5_VECTORS, atlas_graphs, c5_rep
from topobounds.algebra import GF, QQ, ExactMatrix, matrix, rank
from topobounds.errors import InstanceTooLarge, InvalidInput, InvalidParameter, UnsupportedSearchField
from topobounds.graphs import Graph, complement, gen_complete, gen_cycle, gen_empty, gen_H, gen_kneser, is_proper
from topobounds.matroids import TransversalMatroid, UniformMatroid
from topobounds.representations import (
    MatroidAssignment,
    RepresentingMatrix,
    VectorAssignment,
    check_star_condition,
    coloring_assignment,
    indrep_to_matrix,
    local_chromatic,
    matrix_to_indrep,
    min_indrep_dimension,
    minrank_bruteforce,
    orthogonality_dimension,
    probe_pairwise_orthogonal_bipartite,
    verify_independent_rep,
    verify_orthogonal_rep,
)
from topobounds.solvers import chromatic_number


def brute_orthodim(g: Graph, p: int, t_max: int) -> int | None:
    """Try every assignment of nonzero vectors; only for tiny instances."""
    for t in range(1, t_max + 1):
        vecs = [v for v in product(range(p), repeat=t) if sum(x * x for x in v) % p]
        for choice in product(vecs, repeat=g.n):
            x = dict(zip(g.vertices, choice))
            if all(sum(a * b for a, b in zip(x[u], x[v])) % p == 0 for u, v in g.edges):
                return t
    return None


def brute_local_chromatic(g: Graph, m: int) -> int:
    best = None
    for cols in product(range(1, m + 1), repeat=g.n):
        c = dict(zip(g.vertices, cols))
        if not is_proper(g, c):
            continue
        worst = max(len({c[v]} | {c[u] for u in g.neighbors(v)}) for v in g.vertices)
        best = worst if best is None else min(best, worst)
    return best


def transversal_instance(rng: random.Random):
    """A bipartite B and a graph G whose adjacent vertices use elements with
    disjoint B-neighborhoods."""
    side = [f"u{i}" for i in range(rng.randint(2, 5))]
    other = [f"w{i}" for i in range(rng.randint(2, 5))]
    edges = [(u, w) for u in side for w in other if rng.random() < 0.4]
    b = Graph(side + other, edges)
    usable = [u for u in side if b.neighbors(u)]
    if not usable:
        return None
    verts = [str(i) for i in range(rng.randint(2, 6))]
    elems = {v: rng.choice(usable) for v in verts}
    g_edges = [
        (a, c)
        for i, a in enumerate(verts)
        for c in verts[i + 1:]
        if not (b.neighbors(elems[a]) & b.neighbors(elems[c])) and rng.random() < 0.8
    ]
    return Graph(verts, g_edges), MatroidAssignment(TransversalMatroid(b, side), elems)


def test_verify_orthogonal_examples(c5, c5_vectors):
    assert verify_orthogonal_rep(c5, c5_vectors)
    k2 = gen_complete(2)
    bad = VectorAssignment(QQ, 2, {"0": (1, 0), "1": (1, 0)})
    assert not verify_orthogonal_rep(k2, bad)
    zero = VectorAssignment(GF(3), 2, {"0": (0, 0), "1": (0, 1)})
    check = verify_orthogonal_rep(k2, zero)
    assert not check and any("= 0" in v for v in check.violations)


def test_orthogonality_dimension_examples():
    t, rep = orthogonality_dimension(gen_empty(2), GF(2), 3)
    assert t == 1 and rep["0"].entries == (1,)
    for n in (2, 3, 4):
        assert orthogonality_dimension(gen_complete(n), GF(2), n)[0] == n
    assert orthogonality_dimension(gen_H(4), GF(2), 4)[0] == 4
    assert orthogonality_dimension(gen_complete(3), GF(2), 2) is None
    with pytest.raises(UnsupportedSearchField):
        orthogonality_dimension(gen_cycle(5), QQ, 3)


def test_orthogonality_dimension_matches_brute_force():
    for g in atlas_graphs(4):
        for p, t_max in ((2, 4), (3, 3)):
            got = orthogonality_dimension(g, GF(p), t_max)
            expected = brute_orthodim(g, p, t_max) if p ** (t_max * g.n) < 3_000_000 else None
            if expected is not None or got is None:
                assert (got[0] if got else None) == expected


def test_verify_independent_examples(c5, c5_vectors):
    col = {"0": 1, "1": 2, "2": 1, "3": 2, "4": 3}
    assert verify_independent_rep(c5, coloring_assignment(col))
    k2 = gen_complete(2)
    same = MatroidAssignment(UniformMatroid(2, 2), {"0": "1", "1": "1"})
    assert not verify_independent_rep(k2, same)
    assert verify_independent_rep(c5, c5_vectors.to_matroid())


def test_loops_are_rejected():
    k2 = gen_complete(2)
    rep = VectorAssignment(GF(2), 2, {"0": (0, 0), "1": (1, 0)})
    check = verify_independent_rep(k2, rep.to_matroid())
    assert not check and "loop" in check.violations[0]


def test_orthogonal_reps_are_independent():
    for g in atlas_graphs(5):
        res = orthogonality_dimension(g, GF(2), 5)
        if res is None:
            continue
        assert verify_independent_rep(g, res[1].to_matroid())


def test_minrank_examples():
    assert minrank_bruteforce(gen_complete(4), GF(2))[0] == 1
    for f in (GF(2), GF(3)):
        assert minrank_bruteforce(gen_empty(4), f)[0] == 4
    for engine in ("subspaces", "matrices"):
        r, witness = minrank_bruteforce(gen_cycle(5), GF(2), engine=engine)
        assert r == 3 and not witness.violations() and witness.rank == 3
    with pytest.raises(InstanceTooLarge):
        minrank_bruteforce(gen_cycle(5), GF(3), engine="matrices", cap=100)
    with pytest.raises(UnsupportedSearchField):
        minrank_bruteforce(gen_cycle(5), QQ)


def test_minrank_engines_agree():
    for g in atlas_graphs(5):
        if len(g.edges) > 7:
            continue
        a = minrank_bruteforce(g, GF(2), engine="subspaces")[0]
        assert a == minrank_bruteforce(g, GF(2), engine="matrices")[0]


def test_min_indrep_examples():
    for f in (GF(2), GF(3)):
        assert min_indrep_dimension(gen_complete(4), f, 5)[0] == 4
    assert min_indrep_dimension(gen_empty(3), GF(2), 2)[0] == 1
    c5 = gen_cycle(5)
    assert min_indrep_dimension(c5, GF(2), 5)[0] == minrank_bruteforce(complement(c5), GF(2))[0]
    assert min_indrep_dimension(gen_complete(3), GF(2), 2) is None


def test_matrix_to_indrep_examples():
    f = GF(3)
    ident = RepresentingMatrix(f, ExactMatrix.identity(f, 3), gen_empty(3))
    rep = matrix_to_indrep(ident, gen_complete(3))
    assert rep.dim == 3 and verify_independent_rep(gen_complete(3), rep.to_matroid())
    ones = RepresentingMatrix(f, matrix(f, [[1] * 3] * 3), gen_complete(3))
    rep = matrix_to_indrep(ones)
    assert rep.dim == 1 and {x.entries for x in rep.vectors.values()} == {(1,)}
    _, w = minrank_bruteforce(gen_cycle(5), GF(2))
    rep = matrix_to_indrep(w, complement(gen_cycle(5)))
    assert rep.dim == 3
    with pytest.raises(InvalidInput):
        matrix_to_indrep(ones, gen_complete(3))


def test_indrep_to_matrix_examples():
    f = GF(2)
    rep = VectorAssignment(f, 1, {"0": (1,), "1": (1,)})
    m = indrep_to_matrix(gen_empty(2), rep)
    assert not m.violations() and m.rank <= 1
    basis = VectorAssignment(f, 2, {"0": (1, 0), "1": (0, 1)})
    m = indrep_to_matrix(gen_complete(2), basis)
    assert m.matrix.rows == ((1, 0), (0, 1))
    c5 = gen_cycle(5)
    _, rep = min_indrep_dimension(c5, f, 5)
    m = indrep_to_matrix(c5, rep)
    assert m.graph == complement(c5) and not m.violations() and m.rank <= rep.dim
    with pytest.raises(InvalidInput):
        indrep_to_matrix(gen_complete(2), VectorAssignment(f, 1, {"0": (1,), "1": (1,)}))


def test_representing_matrix_json(c5):
    _, w = minrank_bruteforce(c5, GF(3))
    again = RepresentingMatrix.from_json(w.to_json(), c5)
    assert again.matrix == w.matrix and rank(again.matrix) == w.rank


def test_star_condition_examples():
    petersen, _ = gen_kneser(5, 2)
    _, col = chromatic_number(petersen)
    res = check_star_condition(petersen, coloring_assignment(col.colors))
    assert res.ok and res.independent and res.checked == 110
    k2 = gen_complete(2)
    bad = MatroidAssignment(UniformMatroid(2, 1), {"0": "1", "1": "2"})
    res = check_star_condition(k2, bad)
    assert not res.ok and not res.independent
    assert res.violation["rank_X"] + res.violation["rank_Y"] == 2 > res.violation["rank_M"]


def test_star_condition_on_colorings_and_transversal():
    rng = random.Random(3)
    for g in atlas_graphs(5, min_edges=1):
        _, col = chromatic_number(g)
        assert check_star_condition(g, coloring_assignment(col.colors)).ok
    done = 0
    while done < 60:
        inst = transversal_instance(rng)
        if inst is None:
            continue
        g, a = inst
        assert verify_independent_rep(g, a)
        assert check_star_condition(g, a).ok
        done += 1


def test_star_condition_balanced_subset():
    g = gen_complete(4)
    full = check_star_condition(g, coloring_assignment({str(i): i + 1 for i in range(4)}))
    bal = check_star_condition(g, coloring_assignment({str(i): i + 1 for i in range(4)}), balanced_only=True)
    assert bal.ok and bal.checked < full.checked


def test_local_chromatic_examples():
    assert local_chromatic(gen_complete(4), 4)[0] == 4
    assert local_chromatic(gen_empty(3), 3)[0] == 1
    psi, col = local_chromatic(gen_cycle(5), 5)
    assert psi == 3 and is_proper(gen_cycle(5), col.colors)
    with pytest.raises(InvalidParameter):
        local_chromatic(gen_complete(3), 2)


def test_local_chromatic_matches_brute_force():
    for g in atlas_graphs(5, min_edges=1):
        chi = chromatic_number(g)[0]
        for m in range(chi, chi + 2):
            assert local_chromatic(g, m)[0] == brute_local_chromatic(g, m)


def test_probe_examples(c5, c5_vectors):
    assert probe_pairwise_orthogonal_bipartite(c5, c5_vectors, 1, 2) is None
    k2 = gen_complete(2)
    basis = VectorAssignment(GF(2), 2, {"0": (1, 0), "1": (0, 1)})
    w = probe_pairwise_orthogonal_bipartite(k2, basis, 1, 1)
    assert w is not None and {w.X[0], w.Y[0]} == {"0", "1"}
    k3 = VectorAssignment(GF(2), 3, {"0": (1, 0, 0), "1": (0, 1, 0), "2": (0, 0, 1)})
    assert probe_pairwise_orthogonal_bipartite(gen_complete(3), k3, 1, 2) is not None


def test_assignment_json_round_trips(c5_vectors):
    again = VectorAssignment.from_json(c5_vectors.to_json())
    assert [again[v].entries for v in "01234"] == [c5_vectors[v].entries for v in "01234"]
    a = coloring_assignment({"0": 1, "1": 2}, m=3, r=2)
    b = MatroidAssignment.from_json(a.to_json())
    assert b.elements == a.elements and b.oracle.full_rank == 2
    assert c5_rep()["1"].entries == tuple(QQ(x) for x in C5_VECTORS[1])
