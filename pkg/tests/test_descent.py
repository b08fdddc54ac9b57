import itertools
from math import gcd, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equikt.descent import (
    SQUARES,
    BlowupSquare,
    cokernel_invariants,
    describe_group,
    integer_kernel,
    invariant_factors,
    mv_solve,
    rank_audit,
    smith_normal_form,
)
from equikt.errors import DomainError
from equikt.oracles import quotient_order_mod


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def det(M):
    n = len(M)
    if n == 0:
        return 1
    return sum((-1) ** j * M[0][j] * det([r[:j] + r[j + 1:] for r in M[1:]]) for j in range(n))


small_matrix = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@settings(max_examples=150, deadline=None)
@given(small_matrix)
def test_snf_shape_and_unimodularity(A):
    D, U, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == D
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag == sorted(nz) + [0] * (len(diag) - len(nz))


@settings(max_examples=120, deadline=None)
@given(small_matrix)
def test_cokernel_against_enumeration(A):
    inv = cokernel_invariants(A, len(A))
    for k in (2, 3, 4, 6, 12):
        # |Z^m/im A  tensor  Z/k| = prod gcd(d, k) with gcd(0, k) = k
        expect = prod(k if d == 0 else gcd(d, k) for d in inv)
        assert quotient_order_mod(A, k) == expect


@settings(max_examples=80, deadline=None)
@given(small_matrix)
def test_integer_kernel(A):
    n = len(A[0])
    K = integer_kernel(A, n)
    for v in K:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    r = sum(1 for d in invariant_factors(A) if d)
    assert len(K) == n - r
    # kernel vectors of small integer matrices are saturated: any integer
    # kernel vector in a small box is an integer combination
    for x in itertools.product(range(-2, 3), repeat=n):
        if any(x) and all(sum(a * y for a, y in zip(row, x)) == 0 for row in A):
            assert _in_lattice(x, K)


def _in_lattice(x, K):
    if not K:
        return False
    M = [list(col) for col in zip(*K)]  # n x k
    D, U, V = smith_normal_form(M)
    Ux = [sum(u * y for u, y in zip(row, x)) for row in U]
    k = len(K)
    for i in range(len(Ux)):
        d = D[i][i] if i < k else 0
        if d == 0:
            if Ux[i] != 0:
                return False
        elif Ux[i] % d:
            return False
    return True


def test_invariants_unique_under_unimodular_change():
    A = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    U = [[1, 2, 0], [0, 1, 0], [0, 3, 1]]
    V = [[1, 0, 0], [-1, 1, 0], [2, 0, 1]]
    assert invariant_factors(A) == invariant_factors(matmul(matmul(U, A), V)) == [2, 6, 12]


def test_describe_group():
    assert describe_group([0]) == "Z"
    assert describe_group([]) == "0"
    assert describe_group([2, 0]) == "Z/2 + Z"


# -- squares -----------------------------------------------------------------------------


def test_nodal_cubic():
    res = mv_solve(SQUARES["nodal-cubic"]())
    assert res.kneg1 == [0]
    assert res.kernel_rank == 1
    assert res.exact
    assert res.to_json()["K-1"] == "Z"
    # same cokernel with the sign of the Z-column flipped
    assert cokernel_invariants([[1, 1], [1, 1]], 2) == [0]
    assert SQUARES["nodal-cubic"]().difference_matrix() == [[1, -1], [1, -1]]


def test_identity_square():
    res = mv_solve(SQUARES["identity"]())
    assert res.kneg1 == [] and res.kernel_rank == 1


def test_gl2_square():
    sq = SQUARES["gl2-adjoint"]()
    res = mv_solve(sq)
    assert res.kernel_rank == 3 and res.split and res.kneg1 == [] and res.exact
    for y, z in zip(res.kernel.y_elements, res.kernel.z_elements):
        assert sq.phi_Y.apply(y) == sq.phi_Z.apply(z)
    assert rank_audit(res, 3).passed


def test_gl3_square():
    res = mv_solve(SQUARES["gl3-adjoint"]())
    assert res.kernel_rank == 7 and res.split and res.exact
    assert res.ranks == (9, 1, 3)
    assert rank_audit(res, 9 + 1 - 3).passed


def test_audit_reports_delta():
    res = mv_solve(SQUARES["gl2-adjoint"]())
    rep = rank_audit(res, 5)
    assert not rep.passed and rep.delta == -2


def test_non_split_abelian_square():
    sq = BlowupSquare("doubling", "abelian", ranks=(1, 1, 1), HY=[[2]], HZ=[[2]])
    res = mv_solve(sq)
    assert res.kneg1 == [2] and not res.split and res.kernel_rank == 1


def test_bad_square_shapes():
    with pytest.raises(DomainError):
        BlowupSquare("bad", "abelian", ranks=(1, 1, 2), HY=[[1]], HZ=[[1], [1]])
    with pytest.raises(DomainError):
        BlowupSquare("bad", "tower")
