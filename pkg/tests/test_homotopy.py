import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from fper import homotopy as ht
from fper.exactcore import GF, QQ, ZZ, FreeComplex, Matrix
from fper.homotopy import (
    ChainMap, FiltComplex, GradedMatrix, SplitObject, beta_map, cone, cone_beta, direct_sum, dual,
    elementary, embed_degree_zero, evaluation, free, gr_complex, gr_total, homotopy_hom_rank,
    graded_central_ring, identity, is_nullhomotopic, is_zero_object, localized_hom, pi_complex, shift,
    shift_map, tensor, twist, twist_map, unit,
)
from fper.oracle import random_chain_map, random_complex, random_split_object
from fper.spectrum import support

F2, F3 = GF(2), GF(3)
RINGS = [F2, F3, QQ, ZZ]


def maps_between(ring, src: SplitObject, tgt: SplitObject):
    """Every GradedMatrix src → tgt with coefficients in F_p (brute force)."""
    slots = [(i, j) for i, ti in enumerate(tgt.twists) for j, sj in enumerate(src.twists) if ti >= sj]
    for coeffs in itertools.product(range(ring.p), repeat=len(slots)):
        yield GradedMatrix.from_entries(ring, src, tgt, [(i, j, c) for (i, j), c in zip(slots, coeffs)])


def brute_hom_rank(A: FiltComplex, B: FiltComplex) -> int:
    """dim H^0 Hom(A, B) over F_p by enumerating chain maps and homotopies."""
    ring = A.ring
    ks = sorted(set(A.degrees()) | set(B.degrees()))
    deg = [k for k in ks if A.obj(k) and B.obj(k)]
    chain = set()
    for comps in itertools.product(*[list(maps_between(ring, A.obj(k), B.obj(k))) for k in deg]):
        f = ChainMap(A, B, dict(zip(deg, comps)))
        if f.is_chain_map():
            chain.add(tuple(f.at(k).mat for k in deg))
    hdeg = [k for k in A.degrees() if B.obj(k - 1)]
    bounds = set()
    for comps in itertools.product(*[list(maps_between(ring, A.obj(k), B.obj(k - 1))) for k in hdeg]):
        h = ht.Homotopy(A, B, dict(zip(hdeg, comps)))
        b = h.boundary()
        bounds.add(tuple(b.at(k).mat for k in deg))
    return round(math.log(len(chain) // len(bounds), ring.p))


def test_cone_of_identity_is_contractible():
    for R in RINGS:
        assert is_zero_object(cone(identity(free(R, 0))))


def test_cone_of_zero_is_sum():
    A = cone_beta(F3)
    B = free(F3, 2, 1)
    assert cone(ht.zero_map(A, B)) == direct_sum(shift(A, 1), B)


def test_cone_beta_presentation():
    C = cone_beta(ZZ)
    assert C.lo == -1 and C.obj(-1) == SplitObject.of((0, 1)) and C.obj(0) == SplitObject.of((1, 1))
    assert C.diff(-1).mat[0, 0] == -1 and C.diff(-1).exponent(0, 0) == 1


def test_tensor_examples():
    for m, n, i, j in [(0, 0, 0, 0), (1, -2, 1, 3), (-3, 2, -1, 0)]:
        assert tensor(free(QQ, m, i), free(QQ, n, j)) == free(QQ, m + n, i + j)
    T = tensor(cone_beta(F3), cone_beta(F3))
    assert pi_complex(T).homology().is_zero()
    assert gr_total(T).homology().total_rank() == 4
    A = random_complex(ZZ, 3)
    assert tensor(A, unit(ZZ)) == A
    assert tensor(unit(ZZ), A) == A


def test_symmetry_on_twists_is_trivial():
    assert tensor(free(QQ, 1), free(QQ, 1)) == free(QQ, 2)


def test_dual_examples():
    assert dual(free(QQ, 3, 2)) == free(QQ, -3, -2)
    C = cone_beta(QQ)
    assert ht.are_homotopy_equivalent(dual(C), shift(twist(C, -1), -1)) is not None
    for s in range(5):
        A = random_complex(F3, s)
        assert ht.are_homotopy_equivalent(dual(dual(A)), A) is not None
        assert evaluation(A).is_chain_map()


def test_beta_map():
    f = beta_map(free(ZZ, 0))
    g = elementary(ZZ, 0, 1)
    assert f.source == g.source and f.target == g.target and f.at(0) == g.at(0)
    A, B = cone_beta(ZZ), free(ZZ, 1)
    S = direct_sum(A, B)
    lay_s, lay_t = ht.direct_sum_layout([A, B]), ht.direct_sum_layout([twist(A, 1), twist(B, 1)])
    assert beta_map(S) == ht.direct_sum_maps(lay_s, lay_t, [beta_map(A), beta_map(B)])
    C = cone(beta_map(free(ZZ, 0)))
    for xi in ("pi", "gr"):
        assert support(tensor(C, C), xi) == support(cone_beta(ZZ), xi)


def test_pi_and_gr_of_cone_beta():
    C = cone_beta(ZZ)
    assert pi_complex(C).diffs[0] == Matrix.from_rows(ZZ, [[-1]])
    assert pi_complex(C).homology().is_zero()
    assert gr_total(C).diffs[0].is_zero() and gr_total(C).homology().total_rank() == 2
    assert sorted(gr_complex(C)) == [0, 1]
    P = free(ZZ, 4, 2)
    assert pi_complex(P).homology().nonzero() == {-2: (1, ())}
    assert gr_total(P).homology().nonzero() == {-2: (1, ())}


def test_section_sigma0():
    for s in range(3):
        C = pi_complex(random_complex(ZZ, s))
        S = embed_degree_zero(C)
        assert pi_complex(S) == C and gr_total(S) == C
    assert embed_degree_zero(FreeComplex(ZZ, 0, (), ())).is_empty()
    assert embed_degree_zero(FreeComplex(ZZ, -5, (1,), ())) == free(ZZ, 0, 5)


def test_zero_objects():
    c2 = lambda R: cone(elementary(R, 0, 0, 2))
    assert is_zero_object(c2(QQ))
    assert not is_zero_object(c2(ZZ))
    assert not is_zero_object(cone_beta(ZZ))
    assert is_nullhomotopic(identity(cone(identity(free(ZZ, 3))))) is not None


def test_hom_rank_unit():
    for R in RINGS:
        for n in range(-2, 4):
            assert homotopy_hom_rank(free(R, 0), free(R, 0), n) == ((1, ()) if n >= 0 else (0, ()))


def test_hom_unit_to_cone_beta():
    # chain maps R(0) → cone(β)(n) are c·β^{n+1}; homotopies a·β^n kill them unless n = -1
    for R in (F2, F3):
        got = {n: homotopy_hom_rank(free(R, 0), cone_beta(R), n)[0] for n in range(-3, 3)}
        assert got == {-3: 0, -2: 0, -1: 1, 0: 0, 1: 0, 2: 0}
    for n in range(-2, 2):
        assert homotopy_hom_rank(free(F2, 0), cone_beta(F2), n)[0] == \
            brute_hom_rank(free(F2, 0), twist(cone_beta(F2), n))


def test_hom_rank_matches_brute_force():
    for s in range(6):
        A = random_complex(F2, f"hb-{s}", max_rank=3)
        B = random_complex(F2, f"hb2-{s}", max_rank=3)
        assert homotopy_hom_rank(A, B)[0] == brute_hom_rank(A, B)


def test_graded_central_ring():
    for R in RINGS:
        sl = graded_central_ring(R, -2, 4)
        assert [s.rank for s in sl] == [0, 0, 1, 1, 1, 1, 1]
        assert all(s.torsion == () for s in sl)
        assert sl[2].generator == identity(free(R, 0))
    with pytest.raises(ValueError):
        graded_central_ring(QQ, 2, 1)


def test_central_ring_multiplication():
    for R in RINGS:
        for a in range(4):
            for b in range(4):
                prod = twist_map(elementary(R, 0, b), a) @ elementary(R, 0, a)
                assert prod == elementary(R, 0, a + b)


def test_localized_hom_examples():
    S = SplitObject.of
    r = localized_hom(S((0, 1), (2, 1)), S((1, 1)), ZZ)
    assert (r.stabilization, r.rank) == (1, 2)
    r = localized_hom(S((0, 1)), S((0, 1)), ZZ)
    assert (r.stabilization, r.rank) == (0, 1)
    r = localized_hom(S((5, 1)), S((0, 1)), F2)
    assert (r.stabilization, r.rank) == (5, 1) and r.ranks[:5] == (0,) * 5


seeds = st.integers(0, 10 ** 6)
rings = st.sampled_from(RINGS)


@settings(max_examples=40, deadline=None)
@given(rings, seeds, seeds)
def test_constructors_keep_d_squared_zero(R, s, t):
    A, B = random_complex(R, s, max_rank=4), random_complex(R, t, max_rank=4)
    f = random_chain_map(A, B, __import__("random").Random(s ^ t))
    for C in (cone(f), tensor(A, B), dual(A), shift(A, 3), twist(A, -2), direct_sum(A, B)):
        assert ht.validate(C) == C


@settings(max_examples=40, deadline=None)
@given(rings, seeds)
def test_gr_is_conservative(R, s):
    A = random_complex(R, s)
    assert gr_total(A).homology().is_zero() == is_zero_object(A)


@settings(max_examples=30, deadline=None)
@given(rings, seeds, seeds)
def test_pi_and_gr_are_monoidal(R, s, t):
    A, B = random_complex(R, s, max_rank=4), random_complex(R, t, max_rank=4)
    T = tensor(A, B)
    for xi in (pi_complex, gr_total):
        assert xi(T).homology().nonzero() == xi(A).tensor(xi(B)).homology().nonzero()


@settings(max_examples=30, deadline=None)
@given(rings, seeds, seeds)
def test_triangle_composites_vanish(R, s, t):
    import random
    A, B = random_complex(R, s, max_rank=4), random_complex(R, t, max_rank=4)
    f = random_chain_map(A, B, random.Random(s + t))
    cd = ht.cone_data(f)
    i, p = cd.inclusion, cd.projection
    assert i.is_chain_map() and p.is_chain_map()
    assert (p @ i).is_zero()
    assert is_nullhomotopic(i @ f) is not None
    assert is_nullhomotopic(shift_map(f, 1) @ p) is not None
    assert cd.complex.total_rank == A.total_rank + B.total_rank


@settings(max_examples=30, deadline=None)
@given(rings, seeds)
def test_beta_is_natural(R, s):
    import random
    A, B = random_complex(R, s, max_rank=4), random_complex(R, s + 1, max_rank=4)
    f = random_chain_map(A, B, random.Random(s))
    assert beta_map(B) @ f == twist_map(f, 1) @ beta_map(A)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([F2, ZZ]), seeds, seeds)
def test_localized_rank_is_product(R, s, t):
    a, b = random_split_object(R, s), random_split_object(R, t)
    r = localized_hom(a, b, R)
    assert r.rank == a.rank * b.rank and r.stabilization <= r.bound
