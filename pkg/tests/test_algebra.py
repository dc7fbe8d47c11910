from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topobounds.algebra import (
    GF,
    QQ,
    ExactMatrix,
    Field,
    bilinear,
    in_span,
    kernel_basis,
    matrix,
    rank,
    rank_of_rows,
    rref,
    vector,
)
from topobounds.errors import DimensionMismatch, InvalidParameter

from conftest import C5_VECTORS


def span_size(p: int, rows) -> int:
    """Brute-force count of the row space over GF(p)."""
    n = len(rows[0]) if rows else 0
    seen = set()
    for coeffs in product(range(p), repeat=len(rows)):
        seen.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)))
    return len(seen)


def small_matrices(max_rows=4, max_cols=4, lo=-3, hi=3):
    return st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=1, max_size=max_rows)
    )


def test_field_validation():
    with pytest.raises(InvalidParameter):
        Field(4)
    assert GF(3)(-1) == 2
    assert QQ("3/6") == Fraction(1, 2)
    assert Field.from_json("GF(5)") == GF(5)
    assert Field.from_json("QQ") == QQ


def test_bilinear_examples():
    assert bilinear(vector(QQ, C5_VECTORS[0]), vector(QQ, C5_VECTORS[1])) == 0
    assert bilinear(vector(GF(2), (1, 0)), vector(GF(2), (1, 0))) == 1
    assert bilinear(vector(GF(2), (1, 1)), vector(GF(2), (1, 1))) == 0


def test_bilinear_mismatch():
    with pytest.raises(DimensionMismatch):
        bilinear(vector(GF(2), (1, 0)), vector(GF(2), (1,)))
    with pytest.raises(DimensionMismatch):
        bilinear(vector(GF(2), (1,)), vector(GF(3), (1,)))


def test_rank_examples():
    assert rank(matrix(GF(2), [[1, 1], [1, 1]])) == 1
    for f in (GF(2), GF(3), QQ):
        assert rank(ExactMatrix.identity(f, 3)) == 3
    assert rank(matrix(QQ, C5_VECTORS)) == 3


def test_kernel_examples():
    assert kernel_basis(ExactMatrix.identity(GF(2), 2)) == []
    ker = kernel_basis(matrix(GF(2), [[1, 1]]))
    assert [k.entries for k in ker] == [(1, 1)]
    assert len(kernel_basis(ExactMatrix.zeros(QQ, 2, 3))) == 3


def test_in_span_examples():
    f = GF(2)
    assert in_span(vector(QQ, (1, 1)), [vector(QQ, (1, 0)), vector(QQ, (0, 1))])
    assert not in_span(vector(QQ, (0, 0, 1)), [vector(QQ, (1, 0, 0))])
    assert in_span(vector(f, (1, 1, 0)), [vector(f, (1, 0, 1)), vector(f, (0, 1, 1))])


def test_rationals_stay_exact():
    big = [[Fraction(10**30 + 1, 7), Fraction(1, 3)], [Fraction(2 * (10**30 + 1), 7), Fraction(2, 3)]]
    assert rank_of_rows(QQ, big) == 1


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.sampled_from([2, 3, 5]))
def test_rank_matches_span_count(rows, p):
    f = GF(p)
    m = matrix(f, rows)
    r = rank(m)
    assert span_size(p, [list(x) for x in m.rows]) == p**r


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.sampled_from([GF(2), GF(3), QQ]))
def test_rank_nullity(rows, f):
    m = matrix(f, rows)
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for y in ker:
        assert m.matvec(y).is_zero()


@settings(max_examples=60, deadline=None)
@given(small_matrices(), st.randoms(use_true_random=False))
def test_rank_invariant_under_row_operations(rows, rnd):
    m = matrix(QQ, rows)
    shuffled = list(m.rows)
    rnd.shuffle(shuffled)
    scaled = []
    for r in shuffled:
        c = rnd.choice([-2, 3, Fraction(1, 5)])
        scaled.append([x * c for x in r])
    assert rank_of_rows(QQ, scaled) == rank(m)
    # fraction-free path and the plain rref path must agree
    assert len(rref(QQ, m.rows)[1]) == rank(m)


@settings(max_examples=60, deadline=None)
@given(small_matrices(max_rows=3), st.lists(st.integers(-3, 3), min_size=4, max_size=4), st.sampled_from([GF(3), QQ]))
def test_in_span_agrees_with_kernel(rows, v, f):
    n = len(rows[0])
    vec = vector(f, v[:n])
    basis = [vector(f, r) for r in rows]
    # v in span(S) iff the system S^T c = v is solvable, i.e. the augmented
    # matrix [S^T | v] has a kernel vector with last coordinate nonzero
    aug = matrix(f, [[r[j] for r in basis] + [vec[j]] for j in range(n)])
    solvable = any(y[len(basis)] != 0 for y in kernel_basis(aug))
    assert in_span(vec, basis) == solvable
