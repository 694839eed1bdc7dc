import pytest
from hypothesis import given, settings, strategies as st

from toricdef.exact_linalg import (
    LinAlgError,
    det,
    hnf,
    hnf_basis,
    identity,
    inverse_unimodular,
    kernel_basis,
    lattice_contains,
    lattices_equal,
    left_kernel_int,
    mat,
    mat_mul,
    primitive,
    rank,
    snf,
    solve_exact,
    subspace_sum_dim,
)


def test_rank_identity():
    assert rank(identity(3)) == 3


def test_rank_zero_matrix():
    assert rank(((0, 0, 0, 0), (0, 0, 0, 0))) == 0


def test_rank_proportional_rows():
    assert rank(((1, 2), (2, 4))) == 1


def test_kernel_single_row():
    assert kernel_basis(((1, 1),)) == ((1, -1),)


def test_kernel_full_rank_square():
    assert kernel_basis(((1, 2), (3, 4))) == ()


def test_kernel_column_sum_zero():
    # columns (1,0), (0,1), (-1,-1)
    m = ((1, 0, -1), (0, 1, -1))
    assert kernel_basis(m) == ((1, 1, 1),)


def test_subspace_sum_dim():
    assert subspace_sum_dim([((1, 0),), ((1, 0),)], 2) == 1
    assert subspace_sum_dim([((1, 0),), ((0, 1),)], 2) == 2
    assert subspace_sum_dim([], 2) == 0


def test_hnf_already_normal():
    h, u = hnf(((2, 0), (0, 3)))
    assert h == ((2, 0), (0, 3))
    assert mat_mul(u, ((2, 0), (0, 3))) == h


def test_hnf_row_swap():
    h, u = hnf(((0, 1), (1, 0)))
    assert h == ((1, 0), (0, 1))


def test_hnf_derived_example():
    m = ((2, 4), (1, 3))
    h, u = hnf(m)
    assert mat_mul(u, m) == h
    assert det(u) in (1, -1)
    # row HNF shape: pivots positive, entries above reduced into [0, pivot)
    assert h == ((1, 1), (0, 2))


def test_snf_examples():
    s, u, v = snf(((2, 0), (0, 3)))
    assert (s[0][0], s[1][1]) == (1, 6)
    s, _, _ = snf(identity(3))
    assert s == identity(3)
    s, _, _ = snf(((2, 0), (0, 2)))
    assert (s[0][0], s[1][1]) == (2, 2)


def test_primitive():
    assert primitive((2, -4)) == (1, -2)
    assert primitive((1, 0, 0)) == (1, 0, 0)
    assert primitive((-3, -3)) == (-1, -1)
    with pytest.raises(LinAlgError):
        primitive((0, 0))


def test_left_kernel_int():
    # {x : x . (0,0,1) = 0} has basis e1, e2 up to unimodular change
    m = ((0,), (0,), (1,))
    k = left_kernel_int(m)
    assert len(k) == 2
    assert all(sum(x * y for x, y in zip(row, (0, 0, 1))) == 0 for row in k)
    assert rank(k) == 2


def test_lattice_membership():
    rows = ((2, 0), (0, 3))
    assert lattice_contains(rows, (4, -3))
    assert not lattice_contains(rows, (1, 0))
    assert lattices_equal(((1, 0), (0, 1)), ((1, 5), (0, 1)))
    assert not lattices_equal(((2, 0), (0, 1)), ((1, 0), (0, 1)))


def test_solve_exact():
    assert solve_exact(((2, 0), (0, 4)), (1, 2)) is not None
    assert solve_exact(((1, 0), (0, 1), (1, 1)), (1, 2, 0)) is None


def test_inverse_unimodular():
    u = ((3, -1), (5, -2))
    ui = inverse_unimodular(u)
    assert mat_mul(u, ui) == identity(2)


small_int = st.integers(min_value=-9, max_value=9)


@st.composite
def int_matrices(draw, max_dim=4):
    nrows = draw(st.integers(1, max_dim))
    ncols = draw(st.integers(1, max_dim))
    return mat(
        [[draw(small_int) for _ in range(ncols)] for _ in range(nrows)]
    )


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_rank_plus_kernel_is_cols(m):
    assert rank(m) + len(kernel_basis(m)) == len(m[0])


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_hnf_roundtrip(m):
    h, u = hnf(m)
    assert mat_mul(u, m) == h
    assert det(u) in (1, -1)
    # pivot structure
    last = -1
    for row in h:
        nz = [j for j, a in enumerate(row) if a != 0]
        if not nz:
            continue
        p = nz[0]
        assert p > last
        assert row[p] > 0
        last = p


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_snf_roundtrip_and_divisibility(m):
    s, u, v = snf(m)
    assert mat_mul(mat_mul(u, m), v) == s
    assert det(u) in (1, -1)
    assert det(v) in (1, -1)
    diag = [s[i][i] for i in range(min(len(s), len(s[0])))]
    for i in range(len(s)):
        for j in range(len(s[0])):
            if i != j:
                assert s[i][j] == 0
    for a, b in zip(diag, diag[1:]):
        if a != 0:
            assert b % a == 0
        else:
            assert b == 0


@given(int_matrices())
@settings(max_examples=60, deadline=None)
def test_kernel_rows_annihilate(m):
    for row in kernel_basis(m):
        assert all(sum(a * b for a, b in zip(mrow, row)) == 0 for mrow in m)
