from fractions import Fraction

from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from artifact._linalg import (
    Echelon,
    IncrementalSpan,
    bareiss_nullspace,
    dense_to_rows,
    nullspace,
    rank,
    solve_many,
    spans_equal,
)
from artifact.scalars_division import gauss
from oracles import sympy_rank

entry = st.integers(-3, 3).map(mpq)


def matrices(max_rows=6, max_cols=8):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=m, max_size=m)))


def apply(row, vec):
    return sum((v * vec.get(j, 0) for j, v in row.items()), mpq(0))


def test_zero_map_and_identity():
    assert len(nullspace([], 3)) == 3
    assert nullspace([{0: mpq(1)}, {1: mpq(1)}, {2: mpq(1)}], 3) == []


def test_random_5x8_residual_zero():
    mat = [[mpq((3 * i + 7 * j) % 5 - 2, 1 + (i + j) % 3) for j in range(8)] for i in range(5)]
    rows = dense_to_rows(mat)
    ns = nullspace(rows, 8)
    assert len(ns) + rank(rows) == 8
    for v in ns:
        assert all(apply(r, v) == 0 for r in rows)


@given(matrices())
def test_rank_nullity_and_residual(mat):
    n = len(mat[0])
    rows = dense_to_rows(mat)
    ns = nullspace(rows, n)
    assert len(ns) + rank(rows) == n
    assert rank(rows) == sympy_rank(rows, n)
    for v in ns:
        assert all(apply(r, v) == 0 for r in rows)


@given(matrices())
def test_bareiss_agrees_with_sparse_kernel(mat):
    n = len(mat[0])
    dense = bareiss_nullspace(mat, n)
    sparse = nullspace(dense_to_rows(mat), n)
    as_rows = [{j: mpq(v.numerator, v.denominator) for j, v in enumerate(x) if v} for x in dense]
    assert spans_equal(as_rows, sparse)
    for x in dense:
        for r in mat:
            assert sum((Fraction(int(a.numerator), int(a.denominator)) * b for a, b in zip(r, x)), Fraction(0)) == 0


@given(matrices())
def test_echelon_key_is_canonical(mat):
    rows = dense_to_rows(mat)
    mixed = [dict((k, 2 * v) for k, v in r.items()) for r in reversed(rows)]
    if len(rows) > 1:
        mixed.append({k: rows[0].get(k, 0) + rows[1].get(k, 0) for k in set(rows[0]) | set(rows[1])})
    assert Echelon(rows).key() == Echelon(mixed).key()


@given(matrices(), st.lists(entry, min_size=8, max_size=8))
def test_solve_many_consistency(mat, x):
    n = len(mat[0])
    rows = dense_to_rows(mat)
    xs = {j: x[j] for j in range(n) if x[j]}
    rhs = {i: apply(r, xs) for i, r in enumerate(rows)}
    sol = solve_many(rows, n, [{i: v for i, v in rhs.items() if v}])[0]
    assert sol is not None
    assert all(apply(r, sol) == rhs[i] for i, r in enumerate(rows))


def test_solve_many_inconsistent():
    rows = [{0: mpq(1)}, {0: mpq(2)}]
    assert solve_many(rows, 1, [{0: mpq(1), 1: mpq(1)}])[0] is None


def test_gaussian_entries():
    i = gauss(0, 1)
    rows = [{0: mpq(1), 1: i}, {0: i, 1: mpq(-1)}]
    ns = nullspace(rows, 2)
    assert len(ns) == 1
    assert all(apply(r, ns[0]) == 0 for r in rows)


@given(matrices())
def test_incremental_span_matches_rank(mat):
    sp = IncrementalSpan()
    for r in dense_to_rows(mat):
        sp.add(r)
    assert sp.dim == rank(dense_to_rows(mat))
