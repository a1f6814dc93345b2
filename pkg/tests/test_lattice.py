from hypothesis import given, settings, strategies as st

from logmap.lattice import (
    determinant,
    hermite_normal_form,
    matmul,
    rank,
    saturated_span,
    smith_normal_form,
    solve_integer,
)
from oracles import sympy_invariant_factors

matrices = st.integers(0, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m
        ).map(lambda rows: (rows, n))
    )
)


def check_snf(A, n):
    U, D, V = smith_normal_form(A, ncols=n)
    m = len(A)
    if m:
        assert matmul(matmul(U, A), V) == D
        assert abs(determinant(U)) == 1
    assert abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(m, n))]
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else b % a == 0
    return diag


def test_snf_identity():
    U, D, V = smith_normal_form([[1, 0], [0, 1]])
    assert D == [[1, 0], [0, 1]] and U == D and V == D


def test_snf_zero():
    _, D, _ = smith_normal_form([[0]])
    assert D == [[0]]


def test_snf_worked():
    A = [[2, 4], [6, 8]]
    U, D, V = smith_normal_form(A)
    assert D == [[2, 0], [0, 4]]
    assert matmul(matmul(U, A), V) == D


def test_snf_empty_rows():
    U, D, V = smith_normal_form([], ncols=3)
    assert D == [] and V == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_snf_big_entries_stay_exact():
    A = [[10**30 + 7, 3], [6, 10**29]]
    diag = check_snf(A, 2)
    assert diag[0] * diag[1] == abs(determinant(A))


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_snf_properties(case):
    A, n = case
    diag = check_snf(A, n)
    assert [d for d in diag if d] == (sympy_invariant_factors(A) if A else [])


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_inverse_of_v(case):
    A, n = case
    _, _, V, Vinv = smith_normal_form(A, ncols=n, want_v_inverse=True)
    assert matmul(V, Vinv) == [[int(i == j) for j in range(n)] for i in range(n)]


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_hnf(case):
    A, n = case
    H, U = hermite_normal_form(A, ncols=n)
    if A:
        assert matmul(U, A) == H
        assert abs(determinant(U)) == 1
    nonzero = [r for r in H if any(r)]
    assert H[len(nonzero):] == [[0] * n] * (len(H) - len(nonzero))
    leads = [next(j for j, x in enumerate(r) if x) for r in nonzero]
    assert leads == sorted(set(leads))
    for k, (row, lead) in enumerate(zip(nonzero, leads)):
        assert row[lead] > 0
        assert all(0 <= above[lead] < row[lead] for above in nonzero[:k])
    assert sum(1 for r in H if any(r)) == rank(A)


def test_hnf_depends_only_on_lattice():
    H1, _ = hermite_normal_form([[2, 0], [0, 3]])
    H2, _ = hermite_normal_form([[2, 3], [2, 6], [4, 3]])
    assert H1 == [r for r in H2 if any(r)]


def test_solve_integer():
    A = [[2, 0], [0, 3]]
    assert solve_integer(A, [[4], [9]]) == [[2], [3]]
    assert solve_integer(A, [[1], [0]]) is None
    assert solve_integer([[1, 1]], [[5]]) is not None


def test_saturated_span():
    B, C = saturated_span([[2, 4, 0]], 3)
    assert len(B) == 1 and matmul(B, C) == [[1]]
    assert sorted(map(abs, B[0])) == [0, 1, 2]
