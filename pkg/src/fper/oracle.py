"""Independent checks of the membership decision.

Positive answers are backed by build traces: a list of steps (generator,
shift, twist, cone) ending in an object with a certified homotopy
equivalence to the target.  Negative answers are backed by a separating
prime.  Random complexes for the test corpora are also produced here.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from fper.exactcore import BaseRing, Matrix, inverse, rank
from fper import filtcat as fc
from fper import homotopy as ht
from fper.homotopy import (
    ChainMap, Equivalence, FiltComplex, GradedMatrix, SplitObject, are_homotopy_equivalent, cycles_basis,
    elementary, enumerate_chain_maps, free, identity, invariant_signature, minimize, reduce_units, shift,
    shift_map, twist,
)
from fper.spectrum import HomPrime, in_ideal, prime_test, separate

__all__ = [
    "Step", "Witness", "TraceBuilder", "random_complex", "random_split_object", "random_filt_object",
    "random_filt_morphism", "random_seq_object", "random_filt_complex", "witness_cone_beta_power",
    "witness_composite", "closure_search", "separate", "Query", "QueryOutcome", "membership_battery",
    "check_query", "find_witness",
]


# --- random corpora ----------------------------------------------------------

def _rng(ring: BaseRing, seed) -> random.Random:
    return random.Random(f"{ring.name}/{seed}")


def _random_scalar(ring: BaseRing, rng: random.Random):
    return ring.coerce(rng.choice((1, 1, -1, 2, -2, 3)))


def random_split_object(ring: BaseRing, seed, max_rank: int = 3, twist_bound: int = 3) -> SplitObject:
    rng = _rng(ring, seed)
    n = rng.randint(1, max_rank)
    return SplitObject.from_twists(rng.randint(-twist_bound, twist_bound) for _ in range(n))


def random_chain_map(A: FiltComplex, B: FiltComplex, rng: random.Random) -> ChainMap:
    H, Z = cycles_basis(A, B)
    ring = A.ring
    vec = [ring.zero] * H.dim(0)
    for z in Z:
        if rng.random() < 0.7:
            c = _random_scalar(ring, rng)
            vec = [ring.reduce(x + c * y) for x, y in zip(vec, z)]
    return H.as_chain_map(vec)


def random_complex(ring: BaseRing, seed, max_rank: int = 6, twist_bound: int = 2,
                   degree_bound: int = 2, max_steps: int = 2) -> FiltComplex:
    """Iterated cones of random chain maps between random sums of elementary pieces.

    A piece is a shifted twist ``R(n)[k]`` or a shifted, twisted cone of
    ``c·β^e``.  Deterministic in ``(ring, seed)``; the result has total rank
    at most ``max_rank``, twists in ``[-twist_bound, twist_bound]`` and
    degrees in ``[-degree_bound, degree_bound]``.
    """
    rng = _rng(ring, seed)

    def piece() -> FiltComplex:
        t = rng.randint(-twist_bound, twist_bound)
        s = rng.randint(-1, 1)
        if rng.random() < 0.3:
            return free(ring, t, s)
        e = rng.choice((0, 1, 1, 2))
        t = min(t, twist_bound - e)
        c = _random_scalar(ring, rng)
        return shift(ht.cone(elementary(ring, t, t + e, c)), s)

    def block() -> FiltComplex:
        return ht.direct_sum(*[piece() for _ in range(rng.choice((1, 1, 2)))])

    def ok(C: FiltComplex) -> bool:
        return (C.total_rank <= max_rank and all(-degree_bound <= k <= degree_bound for k in C.degrees()))

    A = block()
    while not ok(A):
        A = block()
    for _ in range(rng.randint(0, max_steps)):
        B = block()
        f = random_chain_map(B, A, rng) if rng.random() < 0.5 else random_chain_map(A, B, rng)
        C = ht.cone(f)
        if ok(C):
            A = C
    return A


def _random_invertible(ring: BaseRing, n: int, rng: random.Random) -> Matrix:
    while True:
        M = Matrix.from_rows(ring, [[ring.coerce(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)], n)
        if rank(M) == n:
            return M


def random_filt_object(ring: BaseRing, rng: random.Random, max_dim: int = 3,
                       lo: int = -1, hi: int = 2) -> fc.FiltObject:
    """A split object presented through random bases of its flag."""
    twists = sorted(rng.randint(lo, hi) for _ in range(rng.randint(0, max_dim)))
    if not twists:
        return fc.FiltObject.of(fc.SeqObject.zero(ring))
    N = len(twists)
    P = _random_invertible(ring, N, rng)
    bases = []
    for n in range(twists[0], twists[-1] + 1):
        cols = [i for i, t in enumerate(twists) if t >= n]
        E = P.submatrix(range(N), cols)
        bases.append(E @ _random_invertible(ring, len(cols), rng))
    return fc.from_flag(ring, twists[0], bases)


def random_filt_morphism(a: fc.FiltObject, b: fc.FiltObject, rng: random.Random) -> fc.SeqMorphism:
    """Random ``π(a) → π(b)`` respecting the filtrations, sometimes non-strict."""
    ring = a.ring
    sa, ua = fc.split_decompose(a)
    sb, ub = fc.split_decompose(b)
    ta = [t for t, m in sa for _ in range(m)]
    tb = [t for t, m in sb for _ in range(m)]
    if not ta or not tb:
        return fc.zero_morphism(a, b)
    rows = [[ring.coerce(rng.choice((0, 0, 1, -1, 2))) if s >= t else ring.zero for t in ta] for s in tb]
    F = ub.pi() @ Matrix.from_rows(ring, rows, len(ta)) @ inverse(ua.pi())
    lo, hi = fc._window(a, b)
    return fc.from_ambient(a.extend(lo, hi), b.extend(lo, hi), F)


def random_seq_object(ring: BaseRing, rng: random.Random, max_dim: int = 2, width: int = 3) -> fc.SeqObject:
    lo = rng.randint(-1, 1)
    dims = tuple(rng.randint(0, max_dim) for _ in range(rng.randint(1, width)))
    trans = tuple(Matrix.from_rows(ring, [[ring.coerce(rng.randint(-1, 1)) for _ in range(dims[i + 1])]
                                          for _ in range(dims[i])], dims[i + 1])
                  for i in range(len(dims) - 1))
    return fc.SeqObject(ring, lo, dims, trans)


def _strict_sequence(m: fc.FiltObject, g: fc.SeqMorphism) -> tuple:
    """``ker g → m → coker(ker g → m)``: a strict short exact sequence."""
    k, inc = fc.kernel_seq(g)
    k = fc.FiltObject.of(k)
    i = fc.SeqMorphism.build(k, m, inc.at)
    q_seq, q = fc.cokernel_seq(i)
    c, eta = fc.kappa_unit(q_seq)
    return (k, m, c), (i, fc.compose(eta, q))


def random_filt_complex(ring: BaseRing, seed, max_dim: int = 3) -> fc.FiltObjComplex:
    """Two- and three-term complexes, about half of them built from strict exact sequences."""
    rng = _rng(ring, f"filt/{seed}")
    kind = rng.choice(("map", "map", "kernel", "strict", "strict", "perturbed"))
    a = random_filt_object(ring, rng, max_dim)
    b = random_filt_object(ring, rng, max_dim)
    f = random_filt_morphism(a, b, rng)
    if kind == "map":
        return fc.FiltObjComplex((a, b), (f,))
    if kind == "kernel":
        k, inc = fc.kernel_seq(f)
        k = fc.FiltObject.of(k)
        return fc.FiltObjComplex((k, a, b), (fc.SeqMorphism.build(k, a, inc.at), f))
    objs, maps = _strict_sequence(a, f)
    if kind == "perturbed":
        # precompose the last map with a random endomorphism: exactness may break
        e = random_filt_morphism(objs[1], objs[1], rng)
        last = fc.compose(maps[1], e)
        if (last @ maps[0]).is_zero():
            maps = (maps[0], last)
    return fc.FiltObjComplex(objs, maps)


# --- build traces ------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    op: str          # generator | shift | twist | cone
    args: tuple      # generator: (index,); shift/twist: (ref, k); cone: (src_ref, tgt_ref)
    result: FiltComplex
    map: Optional[ChainMap] = None

    def to_dict(self) -> dict:
        from fper.serialize import complex_to_dict, chain_map_to_dict
        d = {"op": self.op, "args": list(self.args), "result": complex_to_dict(self.result)}
        if self.map is not None:
            d["map"] = chain_map_to_dict(self.map)
        return d


class TraceBuilder:
    def __init__(self, generators: Sequence[FiltComplex]):
        self.generators = list(generators)
        self.steps: list[Step] = []

    def _push(self, step: Step) -> int:
        self.steps.append(step)
        return len(self.steps) - 1

    def obj(self, ref: int) -> FiltComplex:
        return self.steps[ref].result

    def generator(self, i: int) -> int:
        return self._push(Step("generator", (i,), self.generators[i]))

    def shift(self, ref: int, k: int) -> int:
        return self._push(Step("shift", (ref, k), shift(self.obj(ref), k)))

    def twist(self, ref: int, n: int) -> int:
        return self._push(Step("twist", (ref, n), twist(self.obj(ref), n)))

    def cone(self, src: int, tgt: int, f: ChainMap) -> int:
        if f.source != self.obj(src) or f.target != self.obj(tgt):
            raise ValueError("cone step map does not connect the referenced objects")
        return self._push(Step("cone", (src, tgt), ht.cone(f), f))

    def finish(self, target: FiltComplex, equivalence: Equivalence) -> "Witness":
        """The witness for the last step, keeping only the steps it depends on."""
        keep, todo = set(), [len(self.steps) - 1]
        while todo:
            i = todo.pop()
            if i in keep:
                continue
            keep.add(i)
            s = self.steps[i]
            if s.op != "generator":
                todo.extend(s.args[:2] if s.op == "cone" else s.args[:1])
        order = sorted(keep)
        new = {old: k for k, old in enumerate(order)}
        steps = []
        for i in order:
            s = self.steps[i]
            if s.op == "cone":
                args = (new[s.args[0]], new[s.args[1]])
            elif s.op in ("shift", "twist"):
                args = (new[s.args[0]], s.args[1])
            else:
                args = s.args
            steps.append(Step(s.op, args, s.result, s.map))
        return Witness(tuple(self.generators), tuple(steps), target, equivalence)


@dataclass(frozen=True)
class Witness:
    """A build trace from the generators plus a certified equivalence (last step → target)."""
    generators: tuple
    steps: tuple
    target: FiltComplex
    equivalence: Equivalence

    @property
    def cone_steps(self) -> int:
        return sum(1 for s in self.steps if s.op == "cone")

    def verify(self) -> bool:
        """Replay every step and re-check the homotopies."""
        for i, s in enumerate(self.steps):
            if s.op == "generator":
                expect = self.generators[s.args[0]]
            elif s.op in ("shift", "twist"):
                ref, k = s.args
                if ref >= i:
                    return False
                expect = (shift if s.op == "shift" else twist)(self.steps[ref].result, k)
            elif s.op == "cone":
                a, b = s.args
                if a >= i or b >= i or s.map is None:
                    return False
                if s.map.source != self.steps[a].result or s.map.target != self.steps[b].result:
                    return False
                if not s.map.is_chain_map():
                    return False
                expect = ht.cone(s.map)
            else:
                return False
            if expect != s.result:
                return False
        eq = self.equivalence
        if eq.source != self.steps[-1].result or eq.target != self.target:
            return False
        return eq.is_certified()

    def to_dict(self) -> dict:
        from fper.serialize import complex_to_dict
        return {
            "generators": [complex_to_dict(g) for g in self.generators],
            "steps": [s.to_dict() for s in self.steps],
            "target": complex_to_dict(self.target),
            "cone_steps": self.cone_steps,
            "certified": self.equivalence.is_certified(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def _match(built: FiltComplex, target: FiltComplex) -> Optional[Equivalence]:
    if built == target:
        return Equivalence(identity(built), identity(built)).certify()
    return are_homotopy_equivalent(built, target)


def witness_composite(tb: TraceBuilder, ref_f: int, eq_f: Equivalence, ref_g: int, eq_g: Equivalence,
                      f: ChainMap, g: ChainMap) -> tuple[int, Equivalence]:
    """Build ``cone(g∘f)`` from built objects equivalent to ``cone(f)`` and ``cone(g)``.

    ``eq_f: built_f ≃ cone(f)`` and ``eq_g: built_g ≃ cone(g)``.  The
    octahedron says ``cone(g∘f) ≃ cone(cone(g)[-1] → B → cone(f))``.
    """
    cf, cg = ht.cone_data(f), ht.cone_data(g)
    w0 = cf.inclusion @ shift_map(cg.projection, -1)            # cone(g)[-1] → cone(f)
    s = tb.shift(ref_g, -1)
    w = eq_f.backward @ w0 @ shift_map(eq_g.forward, -1)      # built_g[-1] → built_f
    ref = tb.cone(s, ref_f, w)
    eq = _match(tb.obj(ref), ht.cone(g @ f))
    if eq is None:
        raise AssertionError("octahedron cone is not equivalent to the cone of the composite")
    return ref, eq


def witness_cone_beta_power(n: int, ring: BaseRing) -> Witness:
    """Build ``cone(β^n)`` from ``cone(β)`` with ``n - 1`` cone steps."""
    if n < 1:
        raise ValueError("need n >= 1")
    G = ht.cone_beta(ring)
    tb = TraceBuilder([G])
    ref = tb.generator(0)
    eq = Equivalence(identity(G), identity(G)).certify()
    for k in range(2, n + 1):
        f = elementary(ring, 0, k - 1)       # β^{k-1}: R(0) → R(k-1)
        g = elementary(ring, k - 1, k)       # β: R(k-1) → R(k)
        tw = tb.twist(0, k - 1)              # cone(β)(k-1) = cone(g)
        eq_g = Equivalence(identity(tb.obj(tw)), identity(tb.obj(tw)))
        if tb.obj(tw) != ht.cone(g):
            raise AssertionError("twisted generator differs from cone(β) on R(k-1)")
        ref, eq = witness_composite(tb, ref, eq, tw, eq_g, f, g)
    target = ht.cone_beta(ring, n)
    if eq.target != target:
        eq = eq.then(_match(eq.target, target))
        eq = eq.certify()
    return tb.finish(target, eq)


# --- bounded closure search -----------------------------------------------------

def closure_search(target: FiltComplex, generators: Sequence[FiltComplex], max_objects: int = 1000,
                   max_rank: Optional[int] = None, max_twist_spread: Optional[int] = None,
                   cap: int = 2 ** 12, rounds: int = 3, degree_pad: int = 1) -> Optional[Witness]:
    """Breadth-first closure of the generators under shift, twist and cone.

    Only objects whose twists stay in a window of width ``max_twist_spread``
    around the target's twists, whose degrees stay within ``degree_pad`` of
    the target's, and whose rank is at most ``max_rank`` enter the pool.
    Finite prime fields only, so hom-sets can be enumerated.  A result is a
    certified witness; None only means nothing was found within the bounds.
    """
    ring = target.ring
    if ring.kind != "Fp":
        raise ValueError("closure search enumerates hom-sets and needs a finite prime field")
    tmin = minimize(target).complex
    tsig = invariant_signature(tmin)
    ref_obj = tmin if not tmin.is_empty() else target
    tlo, thi = ref_obj.twist_range()
    spread = thi - tlo if max_twist_spread is None else max(max_twist_spread, thi - tlo)
    pad = spread - (thi - tlo)
    tw_lo, tw_hi = tlo - pad, thi + pad
    dg_lo, dg_hi = ref_obj.lo - degree_pad, ref_obj.hi + degree_pad
    max_rank = ref_obj.total_rank + 2 if max_rank is None else max_rank
    tb = TraceBuilder(generators)
    pool: list[int] = []
    seen: set = set()

    def fits(C: FiltComplex) -> bool:
        if C.is_empty():
            return False
        lo, hi = C.twist_range()
        return tw_lo <= lo and hi <= tw_hi and dg_lo <= C.lo and C.hi <= dg_hi and C.total_rank <= max_rank

    def consider(ref: int) -> Optional[Witness]:
        C = tb.obj(ref)
        M = minimize(C).complex
        key = repr(M)
        if key in seen:
            return None
        seen.add(key)
        if invariant_signature(M) == tsig:
            eq = _match(C, target)
            if eq is not None:
                return tb.finish(target, eq)
        if fits(M):
            pool.append(ref)
        return None

    for i, G in enumerate(generators):
        ref = tb.generator(i)
        w = consider(ref)
        if w:
            return w
        if G.is_empty():
            continue
        glo, ghi = G.twist_range()
        for n in range(tw_lo - glo, tw_hi - ghi + 1):
            for k in range(G.lo - dg_hi + (G.hi - G.lo), G.lo - dg_lo + 1):
                if n == 0 and k == 0:
                    continue
                r = tb.twist(ref, n) if n else ref
                r = tb.shift(r, k) if k else r
                w = consider(r)
                if w:
                    return w
    done: set = set()
    for _ in range(rounds):
        frontier = sorted(pool, key=lambda r: minimize(tb.obj(r)).complex.total_rank)
        size = {r: minimize(tb.obj(r)).complex.total_rank for r in frontier}
        pairs = sorted(((i, j) for i in frontier for j in frontier if (i, j) not in done),
                       key=lambda ij: size[ij[0]] + size[ij[1]])
        grew = False
        for i, j in pairs:
            done.add((i, j))
            if size[i] + size[j] > max_rank + 2:
                continue
            for u in enumerate_chain_maps(tb.obj(i), tb.obj(j), cap):
                if len(seen) >= max_objects:
                    return None
                ref = tb.cone(i, j, u)
                before = len(pool)
                w = consider(ref)
                if w:
                    return w
                grew = grew or len(pool) > before
        if not grew:
            break
    return None


# --- the membership battery --------------------------------------------------

@dataclass(frozen=True)
class Query:
    label: str
    target: FiltComplex
    generators: tuple
    kind: str  # positive | negative | random
    build: Optional[str] = None  # how to construct a witness for positives


@dataclass
class QueryOutcome:
    query: Query
    decision: bool
    witness: Optional[Witness] = None
    prime: Optional[HomPrime] = None
    conflicts: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.conflicts


def membership_battery(seed: int = 0) -> list[Query]:
    from fper.exactcore import GF, QQ, ZZ
    F2 = GF(2)
    cb = ht.cone_beta
    c = lambda ring, n: ht.cone(elementary(ring, 0, 0, n))  # cone(n: R(0) → R(0))
    qs = [
        Query("cone(β) ∈ ⟨cone(β)⟩ / F2", cb(F2), (cb(F2),), "positive", "closure"),
        Query("cone(β²) ∈ ⟨cone(β)⟩ / F2", cb(F2, 2), (cb(F2),), "positive", "beta_power"),
        Query("cone(β³) ∈ ⟨cone(β)⟩ / F2", cb(F2, 3), (cb(F2),), "positive", "beta_power"),
        Query("cone(β⁴) ∈ ⟨cone(β)⟩ / F2", cb(F2, 4), (cb(F2),), "positive", "beta_power"),
        Query("cone(β)(2)[1] ∈ ⟨cone(β)⟩ / F2", shift(twist(cb(F2), 2), 1), (cb(F2),), "positive", "closure"),
        Query("cone(β²) ∈ ⟨cone(β)⟩ / Q", cb(QQ, 2), (cb(QQ),), "positive", "beta_power"),
        Query("cone(β²) ∈ ⟨cone(β)⟩ / Z", cb(ZZ, 2), (cb(ZZ),), "positive", "beta_power"),
        Query("cone(2β) ∈ ⟨cone(β), cone(2)⟩ / Z", cb(ZZ, 1, 2), (cb(ZZ), c(ZZ, 2)), "positive", "composite"),
        Query("cone(6) ∈ ⟨cone(2), cone(3)⟩ / Z", c(ZZ, 6), (c(ZZ, 2), c(ZZ, 3)), "positive", "composite"),
        Query("cone(4) ∈ ⟨cone(2)⟩ / Z", c(ZZ, 4), (c(ZZ, 2),), "positive", "composite"),
        Query("R(0) ∉ ⟨cone(β)⟩ / F2", free(F2), (cb(F2),), "negative"),
        Query("R(0) ∉ ⟨cone(β)⟩ / Q", free(QQ), (cb(QQ),), "negative"),
        Query("R(0) ∉ ⟨cone(β)⟩ / Z", free(ZZ), (cb(ZZ),), "negative"),
        Query("cone(3) ∉ ⟨cone(2)⟩ / Z", c(ZZ, 3), (c(ZZ, 2),), "negative"),
        Query("cone(β) ∉ ⟨cone(2)⟩ / Z", cb(ZZ), (c(ZZ, 2),), "negative"),
        Query("cone(2) ∉ ⟨cone(β)⟩ / Z", c(ZZ, 2), (cb(ZZ),), "negative"),
        Query("R(3)[1] ∉ ⟨cone(β²)⟩ / F2", free(F2, 3, 1), (cb(F2, 2),), "negative"),
        Query("cone(6) ∉ ⟨cone(2)⟩ / Z", c(ZZ, 6), (c(ZZ, 2),), "negative"),
        Query("cone(2β) ∉ ⟨cone(β)⟩ / Z", cb(ZZ, 1, 2), (cb(ZZ),), "negative"),
        Query("cone(β) ⊕ R(1) ∉ ⟨cone(β)⟩ / Q", ht.direct_sum(cb(QQ), free(QQ, 1)), (cb(QQ),), "negative"),
    ]
    for i in range(10):
        ring = (F2, ZZ)[i % 2]
        tgt = random_complex(ring, f"battery-target-{seed}-{i}")
        gens = tuple(_proper_generator(ring, f"battery-gen-{seed}-{i}-{j}") for j in range(1 + i % 2))
        qs.append(Query(f"random #{i} / {ring.name}", tgt, gens, "random"))
    return qs


def _proper_generator(ring: BaseRing, seed) -> FiltComplex:
    """A random complex that does not generate everything (so verdicts vary)."""
    for k in range(100):
        G = random_complex(ring, f"{seed}/{k}")
        if not in_ideal(free(ring), [G]):
            return G
    return ht.cone_beta(ring)


def _positive_witness(q: Query) -> Optional[Witness]:
    ring = q.target.ring
    if q.build == "beta_power":
        n = q.target.obj(0).twists[0]
        return witness_cone_beta_power(n, ring)
    if q.build == "composite":
        return _composite_from_generators(q)
    if ring.kind == "Fp":
        return closure_search(q.target, q.generators)
    return None


def _composite_from_generators(q: Query) -> Optional[Witness]:
    """Targets of the form cone(a·b) with cone(a), cone(b) among the generators (1×1 maps)."""
    ring = q.target.ring
    d = q.target.diff(-1)
    src_t, tgt_t = d.source.twists[0], d.target.twists[0]
    coef = -d.mat[0, 0]
    for i, Gi in enumerate(q.generators):
        for j, Gj in enumerate(q.generators):
            fi, fj = _as_elementary(Gi), _as_elementary(Gj)
            if fi is None or fj is None:
                continue
            (a_s, a_t, a_c), (b_s, b_t, b_c) = fi, fj
            # f: R(src) → R(src + e_f), g: R(src + e_f) → R(tgt)
            if a_t - a_s + b_t - b_s != tgt_t - src_t or ring.reduce(a_c * b_c) != ring.reduce(coef):
                continue
            f = elementary(ring, src_t, src_t + a_t - a_s, a_c)
            g = elementary(ring, src_t + a_t - a_s, tgt_t, b_c)
            tb = TraceBuilder(q.generators)
            rf = tb.generator(i)
            rg = tb.generator(j)
            rf2 = tb.twist(rf, src_t - a_s) if src_t != a_s else rf
            shift_g = src_t + a_t - a_s - b_s
            rg2 = tb.twist(rg, shift_g) if shift_g else rg
            if tb.obj(rf2) != ht.cone(f) or tb.obj(rg2) != ht.cone(g):
                continue
            idf = Equivalence(identity(tb.obj(rf2)), identity(tb.obj(rf2)))
            idg = Equivalence(identity(tb.obj(rg2)), identity(tb.obj(rg2)))
            ref, eq = witness_composite(tb, rf2, idf, rg2, idg, f, g)
            if eq.target != q.target:
                nxt = _match(eq.target, q.target)
                if nxt is None:
                    continue
                eq = eq.then(nxt)
            return tb.finish(q.target, eq.certify())
    return None


def _as_elementary(G: FiltComplex):
    """``(source twist, target twist, coefficient)`` when G is cone(c·β^e) on R(n)."""
    if G.lo != -1 or G.hi != 0 or G.obj(-1).rank != 1 or G.obj(0).rank != 1:
        return None
    d = G.diff(-1)
    return d.source.twists[0], d.target.twists[0], -d.mat[0, 0]


def find_witness(target: FiltComplex, generators: Sequence[FiltComplex]) -> Optional[Witness]:
    """Try the constructive builders, then bounded closure search over a finite field."""
    ring = target.ring
    el = _as_elementary(target)
    if el is not None and el[0] == 0 and el[2] == 1 and el[1] >= 1 and ht.cone_beta(ring) in generators:
        w = witness_cone_beta_power(el[1], ring)
        if list(w.generators) != list(generators):
            # reindex the trace onto the caller's generator list
            j = list(generators).index(ht.cone_beta(ring))
            steps = tuple(Step(s.op, (j,), s.result) if s.op == "generator" else s for s in w.steps)
            w = Witness(tuple(generators), steps, w.target, w.equivalence)
        return w
    if el is not None:
        w = _composite_from_generators(Query("", target, tuple(generators), "positive", "composite"))
        if w is not None:
            return w
    if ring.kind == "Fp":
        return closure_search(target, generators)
    return None


def check_query(q: Query, search_random: bool = True) -> QueryOutcome:
    """Run the decision procedure and the oracles; record every disagreement."""
    decision = in_ideal(q.target, q.generators)
    out = QueryOutcome(q, decision)
    P = separate(q.target, q.generators)
    out.prime = P
    if decision and P is not None:
        out.conflicts.append(f"member but separated by {P}")
    if not decision:
        if P is None:
            out.conflicts.append("non-member without separating prime")
        elif prime_test(q.target, P) or not all(prime_test(g, P) for g in q.generators):
            out.conflicts.append(f"{P} does not separate")
    if q.kind == "positive" or (q.kind == "random" and decision and search_random
                                and q.target.ring.kind == "Fp"):
        w = _positive_witness(q) if q.kind == "positive" else closure_search(q.target, q.generators,
                                                                             max_objects=30, rounds=1)
        out.witness = w
        if w is not None:
            if not w.verify():
                out.conflicts.append("witness failed to verify")
            if not decision:
                out.conflicts.append("witness found for a non-member")
        elif q.kind == "positive":
            out.conflicts.append("no witness for a curated positive")
    if q.kind == "positive" and not decision:
        out.conflicts.append("curated positive rejected")
    if q.kind == "negative" and decision:
        out.conflicts.append("curated negative accepted")
    return out
