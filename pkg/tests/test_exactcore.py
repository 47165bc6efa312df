import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fper.exactcore import (
    GF, QQ, ZZ, BaseRing, FreeComplex, Matrix, homology, nullspace, rank, smith, solve,
)


def M(ring, rows):
    return Matrix.from_rows(ring, rows)


def cofactor_det(rows):
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** j * rows[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in rows[1:]])
               for j in range(len(rows)))


small_int_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


def test_base_ring_validation():
    assert GF(7).is_field and not ZZ.is_field
    with pytest.raises(ValueError):
        GF(9)
    with pytest.raises(ValueError):
        GF(2**31 + 11)
    assert BaseRing.parse("Fp:5") == GF(5)
    assert GF(5).coerce(Fraction(1, 2)) == 3
    assert QQ.coerce("1/2") == Fraction(1, 2)


def test_rank_examples():
    assert rank(Matrix.identity(GF(5), 3)) == 3
    assert rank(Matrix.zeros(QQ, 2, 2)) == 0
    assert cofactor_det([[2, 4], [6, 8]]) == -8
    assert rank(M(ZZ, [[2, 4], [6, 8]])) == 2


def test_solve_examples():
    b = M(QQ, [[1, 2], [3, 4], [5, 6]])
    assert solve(Matrix.identity(QQ, 3), b) == b
    assert solve(M(ZZ, [[2]]), M(ZZ, [[1]])) is None
    assert solve(M(QQ, [[2]]), M(QQ, [[1]])) == M(QQ, [["1/2"]])
    with pytest.raises(ValueError):
        solve(M(QQ, [[1, 2]]), M(QQ, [[1], [2]]))


def test_smith_examples():
    assert smith(Matrix.identity(ZZ, 3)).d == (1, 1, 1)
    assert smith(M(ZZ, [[2, 4], [6, 8]])).d == (2, 4)
    assert smith(Matrix.zeros(ZZ, 2, 3)).d == ()
    with pytest.raises(ValueError):
        smith(Matrix.identity(QQ, 2))


def test_homology_examples():
    h = homology([M(ZZ, [[2]])], lo=-1)
    assert h.rank(0) == 0 and h.torsion(0) == (2,)
    assert h.rank(-1) == 0
    assert homology([M(QQ, [[1]])]).is_zero()
    h = homology([], dims=[4], lo=3)
    assert h.rank(3) == 4
    with pytest.raises(ValueError):
        homology([M(QQ, [[1]]), M(QQ, [[1]])])


@settings(max_examples=150, deadline=None)
@given(small_int_matrices)
def test_smith_reconstructs(rows):
    A = M(ZZ, rows)
    sf = smith(A)
    D = Matrix.diagonal(ZZ, sf.d, A.rows, A.cols)
    assert sf.U @ A @ sf.V == D
    assert abs(sympy.Matrix(sf.U.tolist()).det()) == 1
    assert abs(sympy.Matrix(sf.V.tolist()).det()) == 1
    assert all(x > 0 for x in sf.d)
    assert all(sf.d[i + 1] % sf.d[i] == 0 for i in range(len(sf.d) - 1))
    # independent oracle: sympy's invariant factors
    from sympy.matrices.normalforms import invariant_factors
    expected = tuple(abs(int(x)) for x in invariant_factors(sympy.Matrix(rows), domain=sympy.ZZ) if x != 0)
    assert sf.d == expected


@settings(max_examples=150, deadline=None)
@given(small_int_matrices)
def test_rank_over_z_equals_rank_over_q(rows):
    assert rank(M(ZZ, rows)) == rank(M(QQ, rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_over_z_against_residue_brute_force(r, c, data):
    rows = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=r, max_size=r))
    rhs = data.draw(st.lists(st.integers(-4, 4), min_size=r, max_size=r))
    A, b = M(ZZ, rows), M(ZZ, [[x] for x in rhs])
    x = solve(A, b)
    if x is not None:
        assert A @ x == b
        return
    # unsolvable over Z: some prime dividing an invariant factor (or the
    # rational obstruction) must block a solution mod that prime
    sf = smith(A)
    if solve(A.change_ring(QQ), b.change_ring(QQ)) is None:
        return
    primes = sorted({p for f in sf.d for p in sympy.primefactors(f)})
    assert primes
    blocked = False
    for p in primes:
        found = any(
            all(sum(rows[i][j] * v[j] for j in range(c)) % p == rhs[i] % p for i in range(r))
            for v in itertools.product(range(p), repeat=c))
        if not found:
            blocked = True
            break
    # a solution mod every p could still fail to lift mod p^k; check that too
    if not blocked:
        for p in primes:
            k = max(sympy.multiplicity(p, f) for f in sf.d if f % p == 0)
            q = p ** k
            found = any(
                all(sum(rows[i][j] * v[j] for j in range(c)) % q == rhs[i] % q for i in range(r))
                for v in itertools.product(range(q), repeat=c))
            if not found:
                blocked = True
                break
    assert blocked


def test_nullspace_over_fields_and_z():
    A = M(QQ, [[1, 2, 3], [2, 4, 6]])
    N = nullspace(A)
    assert N.cols == 2 and (A @ N).is_zero()
    Z = M(ZZ, [[2, 4, 6]])
    N = nullspace(Z)
    assert N.cols == 2 and (Z @ N).is_zero()
    # lattice basis: the kernel vector (1, 1, -1) must be an integral combination
    assert solve(N, M(ZZ, [[1], [1], [-1]])) is not None


def test_cone_of_identity_is_acyclic():
    for ring in (QQ, ZZ, GF(3)):
        for n in range(1, 4):
            C = FreeComplex(ring, -1, (n, n), (Matrix.identity(ring, n),))
            assert C.homology().is_zero()


def test_free_complex_tensor_kunneth_over_field():
    C = FreeComplex(QQ, 0, (1, 1), (M(QQ, [[0]]),))
    T = C.tensor(C)
    assert T.dims == (1, 2, 1)
    assert T.homology().total_rank() == 4
    Z2 = FreeComplex(ZZ, -1, (1, 1), (M(ZZ, [[2]]),))
    h = Z2.tensor(Z2).homology()
    # Z/2 ⊗ Z/2 and Tor(Z/2, Z/2)
    assert h.torsion(0) == (2,) and h.torsion(-1) == (2,)
