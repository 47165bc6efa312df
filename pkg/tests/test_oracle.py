import random

import pytest
from hypothesis import given, settings, strategies as st

from fper import filtcat as fc
from fper import homotopy as ht
from fper.exactcore import GF, QQ, ZZ
from fper.homotopy import cone_beta, free, shift, twist
from fper.oracle import (
    Query, check_query, closure_search, find_witness, membership_battery, random_complex, random_filt_complex,
    random_filt_morphism, random_filt_object, witness_cone_beta_power,
)
from fper.serialize import complex_to_text

F2 = GF(2)


@pytest.mark.parametrize("ring", [F2, QQ, ZZ], ids=lambda r: r.name)
def test_cone_beta_power_witnesses(ring):
    for n in range(1, 5):
        w = witness_cone_beta_power(n, ring)
        assert w.verify() and w.cone_steps == n - 1
        assert w.target == cone_beta(ring, n)
    with pytest.raises(ValueError):
        witness_cone_beta_power(0, ring)


def test_closure_search_examples():
    w = closure_search(cone_beta(F2, 2), [cone_beta(F2)])
    assert w is not None and w.verify() and w.cone_steps == 1
    w = closure_search(shift(twist(cone_beta(F2), 2), 1), [cone_beta(F2)])
    assert w is not None and w.verify() and w.cone_steps == 0
    assert closure_search(free(F2), [cone_beta(F2)], max_objects=60) is None
    with pytest.raises(ValueError):
        closure_search(cone_beta(QQ, 2), [cone_beta(QQ)])


def test_find_witness_uses_builders():
    w = find_witness(cone_beta(ZZ, 3), [free(ZZ, 5), cone_beta(ZZ)])
    assert w.verify() and w.cone_steps == 2
    assert all(s.args == (1,) for s in w.steps if s.op == "generator")
    c = lambda n: ht.cone(ht.elementary(ZZ, 0, 0, n))
    w = find_witness(c(6), [c(2), c(3)])
    assert w is not None and w.verify()


def test_witness_rejects_tampering():
    w = witness_cone_beta_power(2, F2)
    bad = type(w)(w.generators, w.steps, cone_beta(F2, 3), w.equivalence)
    assert not bad.verify()


def test_random_complex_is_deterministic():
    for R in (F2, QQ, ZZ):
        for s in range(5):
            assert complex_to_text(random_complex(R, s)) == complex_to_text(random_complex(R, s))
    texts = {complex_to_text(random_complex(F2, s)) for s in range(20)}
    assert len(texts) > 10


def test_random_complex_bounds():
    for s in range(40):
        A = random_complex(QQ, s, max_rank=6, twist_bound=2, degree_bound=2)
        assert A.total_rank <= 6
        assert all(-2 <= k <= 2 for k in A.degrees() if A.obj(k))
        assert all(abs(t) <= 2 for k in A.degrees() for t in A.obj(k).twists)
        assert ht.validate(A) == A


def test_battery_has_no_conflicts():
    qs = membership_battery(0)
    assert len(qs) == 30
    kinds = {q.kind for q in qs}
    assert kinds == {"positive", "negative", "random"}
    outs = [check_query(q) for q in qs]
    assert [o.query.label for o in outs if not o.ok] == []
    randoms = [o.decision for o in outs if o.query.kind == "random"]
    assert True in randoms and False in randoms


def test_random_filt_objects():
    rng = random.Random(4)
    for _ in range(30):
        a = random_filt_object(GF(3), rng)
        b = random_filt_object(GF(3), rng)
        f = random_filt_morphism(a, b, rng)
        assert all(f.source.dim(n) == a.dim(n) and f.target.dim(n) == b.dim(n) for n in range(-3, 4))
        assert fc.gr_dims(f.source) == fc.gr_dims(a)
    kinds = set()
    for s in range(40):
        C = random_filt_complex(GF(3), s)
        for f, g in zip(C.diffs, C.diffs[1:]):
            assert (g @ f).is_zero()
        kinds.add(fc.strictly_exact(C))
    assert kinds == {True, False}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_member_decisions_are_backed(s):
    ring = (F2, ZZ)[s % 2]
    tgt = random_complex(ring, s)
    gen = random_complex(ring, s + 1)
    out = check_query(Query("h", tgt, (gen,), "random"), search_random=False)
    assert out.ok
