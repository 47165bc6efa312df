"""Presheaves on Z and finitely filtered modules over a field.

A ``SeqObject`` stores the levels ``a_lo, …, a_hi`` with transitions
``t_n: a_{n+1} → a_n``.  Below ``lo`` the object is constant with identity
transitions and above ``hi`` it vanishes.  A ``FiltObject`` is a sequence
whose transitions are injective, so every level embeds into
``π(a) = a_lo``; most constructions below work with those embeddings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from fper.exactcore import (
    BaseRing, Matrix, column_basis, inverse, kron, left_kernel, nullspace, rank, solve,
)


def _require_field(ring: BaseRing):
    if not ring.is_field:
        raise ValueError("filtered modules are implemented over fields only")


def _span(m: Matrix) -> Matrix:
    return column_basis(m) if m.cols else m


def _coords(basis: Matrix, vectors: Matrix) -> Matrix:
    """Coordinates of ``vectors`` in ``basis`` (columns); raises if not contained."""
    if vectors.cols == 0:
        return Matrix.zeros(basis.ring, basis.cols, 0)
    if basis.cols == 0:
        if not vectors.is_zero():
            raise ValueError("vectors are not in the span")
        return Matrix.zeros(basis.ring, 0, vectors.cols)
    x = solve(basis, vectors)
    if x is None:
        raise ValueError("vectors are not in the span")
    return x


def _dim_sum(ring, *mats: Matrix) -> int:
    m = None
    for x in mats:
        if x.cols:
            m = x if m is None else m.hstack(x)
    return rank(m) if m is not None else 0


@dataclass(frozen=True)
class SeqObject:
    ring: BaseRing
    lo: int
    dims: tuple
    trans: tuple = field(default=())  # trans[i]: a_{lo+i+1} → a_{lo+i}

    def __post_init__(self):
        _require_field(self.ring)
        if not self.dims:
            raise ValueError("a window needs at least one level")
        if len(self.trans) != len(self.dims) - 1:
            raise ValueError("need one transition between consecutive levels")
        for i, t in enumerate(self.trans):
            if t.shape != (self.dims[i], self.dims[i + 1]) or t.ring != self.ring:
                raise ValueError(f"transition at level {self.lo + i} has the wrong shape")

    @classmethod
    def zero(cls, ring: BaseRing) -> "SeqObject":
        return cls(ring, 0, (0,))

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def dim(self, n: int) -> int:
        if n < self.lo:
            return self.dims[0]
        return self.dims[n - self.lo] if n <= self.hi else 0

    def t(self, n: int) -> Matrix:
        """Transition ``a_{n+1} → a_n``."""
        if n < self.lo:
            return Matrix.identity(self.ring, self.dims[0])
        if n < self.hi:
            return self.trans[n - self.lo]
        return Matrix.zeros(self.ring, self.dim(n), 0)

    def composite(self, m: int, n: int) -> Matrix:
        """``a_m → a_n`` for ``m ≥ n``."""
        out = Matrix.identity(self.ring, self.dim(m))
        for k in range(m - 1, n - 1, -1):
            out = self.t(k) @ out
        return out

    def extend(self, lo: int, hi: int) -> "SeqObject":
        """The same object presented on a larger window."""
        if lo > self.lo or hi < self.hi:
            raise ValueError("extend only enlarges the window")
        dims = tuple(self.dim(n) for n in range(lo, hi + 1))
        trans = tuple(self.t(n) for n in range(lo, hi))
        return SeqObject(self.ring, lo, dims, trans)

    def is_filtered(self) -> bool:
        return all(rank(t) == t.cols for t in self.trans)

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims)


class FiltObject(SeqObject):
    """A sequence with injective transitions."""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_filtered():
            raise ValueError("transitions of a filtered object must be injective")

    @classmethod
    def of(cls, a: SeqObject) -> "FiltObject":
        return cls(a.ring, a.lo, a.dims, a.trans)

    def extend(self, lo: int, hi: int) -> "FiltObject":
        return FiltObject.of(SeqObject.extend(self, lo, hi))

    def embedding(self, n: int) -> Matrix:
        """``a_n ↪ π(a)``."""
        return self.composite(n, min(n, self.lo))


def unit_object(ring: BaseRing, n: int = 0, rank_: int = 1) -> FiltObject:
    """``k(n)^rank``: the field in every level ``≤ n``."""
    return FiltObject(ring, n, (rank_,))


def from_flag(ring: BaseRing, lo: int, bases: Sequence[Matrix]) -> FiltObject:
    """A filtered object from nested subspaces ``bases[0] ⊇ bases[1] ⊇ …`` of ``π``."""
    dims = tuple(b.cols for b in bases)
    trans = tuple(_coords(bases[i], bases[i + 1]) for i in range(len(bases) - 1))
    return FiltObject(ring, lo, dims, trans)


def split_object(ring: BaseRing, twists: Sequence[int]) -> FiltObject:
    """``⊕ k(n)`` with ambient basis ordered as ``twists`` (sorted)."""
    twists = sorted(twists)
    if not twists:
        return FiltObject.of(SeqObject.zero(ring))
    N = len(twists)
    lo, hi = twists[0], twists[-1]
    ident = Matrix.identity(ring, N)
    bases = [ident.submatrix(range(N), [i for i, t in enumerate(twists) if t >= n]) for n in range(lo, hi + 1)]
    return from_flag(ring, lo, bases)


def _window(*objs: SeqObject) -> tuple[int, int]:
    return min(o.lo for o in objs), max(o.hi for o in objs)


@dataclass(frozen=True)
class SeqMorphism:
    source: SeqObject
    target: SeqObject
    lo: int
    maps: tuple  # f_n for n in [lo, lo + len(maps) - 1]

    def __post_init__(self):
        for i, f in enumerate(self.maps):
            n = self.lo + i
            if f.shape != (self.target.dim(n), self.source.dim(n)):
                raise ValueError(f"component at level {n} has the wrong shape")
        for n in range(self.lo - 1, self.hi + 1):
            lhs = self.at(n) @ self.source.t(n)
            rhs = self.target.t(n) @ self.at(n + 1)
            if lhs != rhs:
                raise ValueError(f"square at level {n} does not commute")

    @classmethod
    def build(cls, a: SeqObject, b: SeqObject, comps) -> "SeqMorphism":
        lo, hi = _window(a, b)
        return cls(a, b, lo, tuple(comps(n) for n in range(lo, hi + 1)))

    @property
    def hi(self) -> int:
        return self.lo + len(self.maps) - 1

    @property
    def ring(self) -> BaseRing:
        return self.source.ring

    def at(self, n: int) -> Matrix:
        if n < self.lo:
            return self.maps[0]
        if n > self.hi:
            return Matrix.zeros(self.ring, self.target.dim(n), self.source.dim(n))
        return self.maps[n - self.lo]

    def window(self) -> range:
        return range(self.lo, self.hi + 1)

    def __matmul__(self, other: "SeqMorphism") -> "SeqMorphism":
        return SeqMorphism.build(other.source, self.target, lambda n: self.at(n) @ other.at(n))

    def pi(self) -> Matrix:
        return self.at(min(self.lo, self.source.lo, self.target.lo))

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps)

    def is_iso(self) -> bool:
        return all(f.rows == f.cols and rank(f) == f.rows for f in self.maps)


FiltMorphism = SeqMorphism


def identity_morphism(a: SeqObject) -> SeqMorphism:
    return SeqMorphism.build(a, a, lambda n: Matrix.identity(a.ring, a.dim(n)))


def zero_morphism(a: SeqObject, b: SeqObject) -> SeqMorphism:
    return SeqMorphism.build(a, b, lambda n: Matrix.zeros(a.ring, b.dim(n), a.dim(n)))


def from_ambient(a: FiltObject, b: FiltObject, F: Matrix) -> SeqMorphism:
    """The morphism whose underlying map ``π(a) → π(b)`` is ``F`` (must respect the filtrations)."""
    return SeqMorphism.build(a, b, lambda n: _coords(b.embedding(n), F @ a.embedding(n)))


# --- the reflector and the Rees functor --------------------------------------

def kappa_unit(a: SeqObject) -> tuple[FiltObject, SeqMorphism]:
    """``κ(a)_n = image(a_n → a_lo)`` together with the unit ``a → κ(a)``."""
    images = [_span(a.composite(n, a.lo)) for n in range(a.lo, a.hi + 1)]
    k = from_flag(a.ring, a.lo, images)
    eta = SeqMorphism.build(a, k, lambda n: _coords(images[max(n, a.lo) - a.lo], a.composite(n, a.lo))
                            if n <= a.hi else Matrix.zeros(a.ring, 0, 0))
    return k, eta


def kappa(a: SeqObject) -> FiltObject:
    return kappa_unit(a)[0]


def factor_through_kappa(g: SeqMorphism) -> tuple[SeqMorphism, int]:
    """Solve ``h ∘ η = g`` for ``h: κ(a) → b``; returns ``h`` and the dimension of the solution space."""
    a, b = g.source, g.target
    k, eta = kappa_unit(a)
    lo, hi = _window(a, b)
    ring = a.ring
    shapes = {n: (b.dim(n), k.dim(n)) for n in range(lo, hi + 1)}
    offs, tot = {}, 0
    for n, (r, c) in shapes.items():
        offs[n] = tot
        tot += r * c
    eqs, rhs = [], []

    def add_term(rows, n, L: Matrix, R: Matrix, sign=1):
        # vec(L X R) with row-major vec(X): coefficient of X[i, j] in (L X R)[p, q] is L[p, i] R[j, q]
        r, c = shapes[n]
        for p in range(L.rows):
            for q in range(R.cols):
                row = rows.setdefault((p, q), [ring.zero] * tot)
                for i in range(r):
                    lp = L[p, i]
                    if lp:
                        for j in range(c):
                            rq = R[j, q]
                            if rq:
                                row[offs[n] + i * c + j] = ring.reduce(row[offs[n] + i * c + j] + sign * lp * rq)

    for n in range(lo, hi + 1):
        rows = {}
        add_term(rows, n, Matrix.identity(ring, b.dim(n)), eta.at(n))
        for (p, q), row in sorted(rows.items()):
            eqs.append(row)
            rhs.append(g.at(n)[p, q])
        if n < hi:
            rows = {}
            # t^b_n h_{n+1} − h_n t^κ_n = 0
            add_term(rows, n + 1, b.t(n), Matrix.identity(ring, k.dim(n + 1)))
            add_term(rows, n, Matrix.identity(ring, b.dim(n)), k.t(n), sign=-1)
            for _, row in sorted(rows.items()):
                eqs.append(row)
                rhs.append(ring.zero)
    if tot == 0:
        return SeqMorphism.build(k, b, lambda n: Matrix.zeros(ring, b.dim(n), k.dim(n))), 0
    A = Matrix.from_rows(ring, eqs, tot) if eqs else Matrix.zeros(ring, 0, tot)
    x = solve(A, Matrix.from_rows(ring, [[v] for v in rhs], 1)) if eqs else Matrix.zeros(ring, tot, 1)
    if x is None:
        raise ValueError("morphism does not factor through κ")
    nullity = tot - rank(A)
    vals = [r[0] for r in x.data]

    def comp(n):
        r, c = shapes.get(n, (b.dim(n), k.dim(n)))
        if n not in shapes:
            return Matrix.zeros(ring, r, c)
        o = offs[n]
        return Matrix.from_rows(ring, [vals[o + i * c: o + (i + 1) * c] for i in range(r)], c)

    return SeqMorphism.build(k, b, comp), nullity


class Rees(NamedTuple):
    obj: FiltObject
    counit: SeqMorphism  # λ(a) → a


def rees_lambda(a: SeqObject) -> Rees:
    """``λ(a)_n = ⊕_{m ≥ n} a_m`` over the window, with the counit ``ε``.

    Levels below ``lo`` reuse ``λ(a)_lo``, i.e. the infinite tail of copies of
    ``a_lo`` is truncated to the one copy inside the window.
    """
    ring = a.ring
    lo, hi = a.lo, a.hi
    offs, N = {}, 0
    for m in range(lo, hi + 1):
        offs[m] = N
        N += a.dim(m)
    ident = Matrix.identity(ring, N)
    bases = [ident.submatrix(range(N), range(offs[n], N)) for n in range(lo, hi + 1)]
    lam = from_flag(ring, lo, bases)

    def eps(n):
        n0 = max(n, lo)
        blocks = None
        for m in range(n0, hi + 1):
            c = a.composite(m, n)
            blocks = c if blocks is None else blocks.hstack(c)
        return blocks if blocks is not None else Matrix.zeros(ring, a.dim(n), 0)

    return Rees(lam, SeqMorphism.build(lam, a, eps))


def lkappa_resolution(a: SeqObject) -> "FiltObjComplex":
    """The two-term complex ``ker(ε) → λ(a)``; its κ-cokernel is ``κ(a)``."""
    lam, eps = rees_lambda(a)
    k, inc = kernel_seq(eps)
    k = FiltObject.of(k)
    return FiltObjComplex((k, lam), (SeqMorphism.build(k, lam, inc.at),))


def kernel_seq(f: SeqMorphism) -> tuple[SeqObject, SeqMorphism]:
    """Levelwise kernel with its inclusion."""
    a = f.source
    lo, hi = _window(a, f.target)
    K = {n: nullspace(f.at(n)) if f.at(n).cols else Matrix.zeros(a.ring, 0, 0) for n in range(lo, hi + 1)}
    dims = tuple(K[n].cols for n in range(lo, hi + 1))
    trans = tuple(_coords(K[n], a.t(n) @ K[n + 1]) for n in range(lo, hi))
    ker = SeqObject(a.ring, lo, dims, trans)
    return ker, SeqMorphism.build(ker, a, lambda n: K[n] if lo <= n <= hi else Matrix.zeros(a.ring, a.dim(n), 0))


def kernel(f: SeqMorphism) -> FiltObject:
    k, _ = kernel_seq(f)
    return FiltObject.of(k) if k.is_filtered() else kappa(k)


def image(f: SeqMorphism) -> FiltObject:
    """Levelwise image ``f_n(a_n) ⊂ b_n``."""
    b = f.target
    lo, hi = _window(f.source, b)
    I = {n: _span(f.at(n)) for n in range(lo, hi + 1)}
    dims = tuple(I[n].cols for n in range(lo, hi + 1))
    trans = tuple(_coords(I[n], b.t(n) @ I[n + 1]) for n in range(lo, hi))
    return FiltObject(b.ring, lo, dims, trans)


def _strict_image_bases(f: SeqMorphism) -> list[Matrix]:
    b = FiltObject.of(f.target)
    P = _span(f.pi())
    lo, hi = _window(f.source, b)
    bases = []
    for n in range(lo, hi + 1):
        E = b.embedding(n)
        N = nullspace(P.hstack(-E)) if P.cols and E.cols else Matrix.zeros(b.ring, 0, 0)
        if N.cols == 0:
            bases.append(Matrix.zeros(b.ring, P.rows, 0))
        else:
            bases.append(_span(P @ N.submatrix(range(P.cols), range(N.cols))))
    return bases


def _flag_in(basis: Matrix, lo: int, bases: Sequence[Matrix]) -> FiltObject:
    """Nested subspaces of ``span(basis)``, in the coordinates of ``basis``."""
    rel = [_coords(basis, B) for B in bases]
    rel[0] = Matrix.identity(basis.ring, basis.cols)
    return from_flag(basis.ring, lo, rel)


def strict_image(f: SeqMorphism) -> FiltObject:
    """``im π(f) ∩ b_n``: the image in the quasi-abelian sense, in coordinates of a basis of ``im π(f)``."""
    lo, _ = _window(f.source, f.target)
    return _flag_in(_span(f.pi()), lo, _strict_image_bases(f))


def cokernel_seq(f: SeqMorphism) -> tuple[SeqObject, SeqMorphism]:
    """Levelwise cokernel and the projection ``b → coker``."""
    b = f.target
    lo, hi = _window(f.source, b)
    P = {n: left_kernel(f.at(n)) if b.dim(n) else Matrix.zeros(b.ring, 0, 0) for n in range(lo, hi + 1)}
    # a section of each projection: columns S with P S = 1
    S = {n: (_right_inverse(P[n]) if P[n].rows else Matrix.zeros(b.ring, b.dim(n), 0)) for n in P}
    dims = tuple(P[n].rows for n in range(lo, hi + 1))
    trans = tuple(P[n] @ b.t(n) @ S[n + 1] for n in range(lo, hi))
    q = SeqObject(b.ring, lo, dims, trans)
    return q, SeqMorphism.build(b, q, lambda n: P[n] if lo <= n <= hi else Matrix.zeros(b.ring, 0, b.dim(n)))


def _right_inverse(P: Matrix) -> Matrix:
    """``S`` with ``P S = 1`` for a surjective ``P``."""
    x = solve(P, Matrix.identity(P.ring, P.rows))
    if x is None:
        raise ValueError("projection is not surjective")
    return x


def cokernel(f: SeqMorphism) -> FiltObject:
    return kappa(cokernel_seq(f)[0])


def coimage(f: SeqMorphism) -> FiltObject:
    _, inc = kernel_seq(f)
    return kappa(cokernel_seq(inc)[0])


def is_strict(f: SeqMorphism) -> bool:
    """``dim(im π(f) ∩ b_n) = rank f_n`` at every level."""
    b = f.target
    lo, hi = _window(f.source, b)
    P = _span(f.pi())
    for n in range(lo, hi + 1):
        E = FiltObject.of(b).embedding(n)
        inter = P.cols + E.cols - _dim_sum(b.ring, P, E)
        if inter != rank(f.at(n)):
            return False
    return True


def is_mono(f: SeqMorphism) -> bool:
    return rank(f.pi()) == f.pi().cols


def is_epi(f: SeqMorphism) -> bool:
    return rank(f.pi()) == f.pi().rows


class Factorization(NamedTuple):
    strict_epi: SeqMorphism   # a → coim(f)
    epimono: SeqMorphism      # coim(f) → im(f)
    strict_mono: SeqMorphism  # im(f) → b


def factorize(f: SeqMorphism) -> Factorization:
    """``f = f_m ∘ f_em ∘ f_e`` through the coimage and the strict image."""
    a, b = FiltObject.of(f.source), FiltObject.of(f.target)
    F = f.pi()
    K = nullspace(F) if F.cols else Matrix.zeros(a.ring, 0, 0)
    Q = left_kernel(K) if K.rows else Matrix.zeros(a.ring, 0, 0)  # π(a) → π(a)/ker
    lo, hi = _window(a, b)
    ident = Matrix.identity(a.ring, Q.rows)
    coim = _flag_in(ident, lo, [_span(Q @ a.embedding(n)) if Q.rows else Matrix.zeros(a.ring, 0, 0)
                                for n in range(lo, hi + 1)])
    Pb = _span(F)
    im = _flag_in(Pb, lo, _strict_image_bases(f))
    e = from_ambient(a.extend(lo, hi), coim, Q)
    # F = Pb · G · Q for the unique G: π(a)/ker → im π(f)
    G = _coords(Pb, F @ _right_inverse(Q)) if Q.rows else Matrix.zeros(a.ring, Pb.cols, 0)
    em = from_ambient(coim, im, G)
    m = from_ambient(im, b.extend(lo, hi), Pb)
    return Factorization(e, em, m)


def compose(*fs: SeqMorphism) -> SeqMorphism:
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = SeqMorphism.build(out.source, g.target, lambda n, g=g, out=out: g.at(n) @ out.at(n))
    return out


# --- invariants and the tensor product -------------------------------------------

def pi_forget(a: SeqObject) -> int:
    return a.dims[0]


def gr_dims(a: SeqObject) -> dict:
    out = {}
    for n in range(a.lo, a.hi + 1):
        d = a.dim(n) - rank(a.t(n)) if a.dim(n) else 0
        if d:
            out[n] = d
    return out


def gr_piece(a: FiltObject, n: int) -> tuple[Matrix, Matrix]:
    """Projection ``a_n → gr_n(a)`` and a section."""
    P = left_kernel(a.t(n)) if a.dim(n) else Matrix.zeros(a.ring, 0, 0)
    S = _right_inverse(P) if P.rows else Matrix.zeros(a.ring, a.dim(n), 0)
    return P, S


def gr_map(f: SeqMorphism, n: int) -> Matrix:
    """The induced ``gr_n(a) → gr_n(b)``."""
    Pa, Sa = gr_piece(FiltObject.of(f.source), n)
    Pb, _ = gr_piece(FiltObject.of(f.target), n)
    if Pb.rows == 0 or Sa.cols == 0:
        return Matrix.zeros(f.ring, Pb.rows, Sa.cols)
    return Pb @ f.at(n) @ Sa


def twist(a: SeqObject, n: int) -> SeqObject:
    cls = FiltObject if isinstance(a, FiltObject) else SeqObject
    return cls(a.ring, a.lo + n, a.dims, a.trans)


def convolve(x: dict, y: dict) -> dict:
    out = {}
    for (p, a), (q, b) in itertools.product(x.items(), y.items()):
        out[p + q] = out.get(p + q, 0) + a * b
    return out


def day_tensor(a: FiltObject, b: FiltObject) -> FiltObject:
    """``(a ⊗ b)_n = Σ_{p+q=n} a_p ⊗ b_q`` inside ``π(a) ⊗ π(b)``."""
    ring = a.ring
    lo, hi = a.lo + b.lo, a.hi + b.hi
    N = pi_forget(a) * pi_forget(b)
    bases = []
    for n in range(lo, hi + 1):
        # p below a.lo only repeats the p = a.lo term with a smaller b-part
        parts = None
        for p in range(a.lo, a.hi + 1):
            if n - p > b.hi:
                continue
            E = kron(a.embedding(p), b.embedding(n - p))
            parts = E if parts is None else parts.hstack(E)
        bases.append(_span(parts) if parts is not None else Matrix.zeros(ring, N, 0))
    return from_flag(ring, lo, bases)


def tensor_morphism(f: SeqMorphism, g: SeqMorphism) -> SeqMorphism:
    a, b = FiltObject.of(f.source), FiltObject.of(g.source)
    c, d = FiltObject.of(f.target), FiltObject.of(g.target)
    return from_ambient(day_tensor(a, b), day_tensor(c, d), kron(f.pi(), g.pi()))


def split_decompose(a: FiltObject) -> tuple[list, SeqMorphism]:
    """``[(twist, multiplicity)]`` and an isomorphism ``⊕ k(n)^m → a``."""
    ring = a.ring
    N = pi_forget(a)
    chosen, weights = [], []
    for n in range(a.hi, a.lo - 1, -1):
        E = a.embedding(n)
        for j in range(E.cols):
            v = E.submatrix(range(N), [j])
            trial = v if not chosen else _stack(chosen).hstack(v)
            if rank(trial) > len(chosen):
                chosen.append(v)
                weights.append(n)
    mult = {}
    for w in weights:
        mult[w] = mult.get(w, 0) + 1
    if not chosen:
        return [], zero_morphism(FiltObject.of(SeqObject.zero(ring)), a)
    order = sorted(range(len(weights)), key=lambda i: weights[i])
    U = _stack([chosen[i] for i in order])
    s = split_object(ring, [weights[i] for i in order])
    lo, hi = _window(s, a)
    return sorted(mult.items()), from_ambient(s.extend(lo, hi), a.extend(lo, hi), U)


def _stack(vs: Sequence[Matrix]) -> Matrix:
    out = vs[0]
    for v in vs[1:]:
        out = out.hstack(v)
    return out


def isomorphic(a: FiltObject, b: FiltObject) -> bool:
    """Over a field every object splits, so gr dimensions decide."""
    return gr_dims(a) == gr_dims(b)


def find_iso(a: FiltObject, b: FiltObject) -> Optional[SeqMorphism]:
    """An explicit isomorphism built from split decompositions."""
    if not isomorphic(a, b):
        return None
    if pi_forget(a) == 0:
        return zero_morphism(a, b)
    _, ua = split_decompose(a)
    _, ub = split_decompose(b)
    F = ub.pi() @ inverse(ua.pi())
    lo, hi = _window(a, b)
    f = from_ambient(a.extend(lo, hi), b.extend(lo, hi), F)
    return f if f.is_iso() else None


# --- filtered complexes (quasi-abelian exactness) --------------------------------

@dataclass(frozen=True)
class FiltObjComplex:
    """``a^0 → a^1 → …`` of filtered objects on a common window."""
    objects: tuple
    diffs: tuple

    def __post_init__(self):
        if len(self.diffs) != max(len(self.objects) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise ValueError("d∘d != 0")

    def levels(self) -> range:
        lo = min(o.lo for o in self.objects)
        hi = max(o.hi for o in self.objects)
        return range(lo, hi + 1)


def _is_exact(dims, maps) -> bool:
    """Exactness of ``V_0 → V_1 → …`` (interior and both ends)."""
    for i, d in enumerate(dims):
        r_in = rank(maps[i - 1]) if i > 0 and maps[i - 1].cols and maps[i - 1].rows else 0
        r_out = rank(maps[i]) if i < len(maps) and maps[i].cols and maps[i].rows else 0
        if d - r_out != r_in:
            return False
    return True


def strictly_exact(C: FiltObjComplex) -> bool:
    """Exact at every filtration level."""
    for n in C.levels():
        if not _is_exact([o.dim(n) for o in C.objects], [d.at(n) for d in C.diffs]):
            return False
    return True


def strict_and_pi_exact(C: FiltObjComplex) -> bool:
    if not all(is_strict(d) for d in C.diffs):
        return False
    return _is_exact([pi_forget(o) for o in C.objects], [d.pi() for d in C.diffs])


def gr_exact(C: FiltObjComplex) -> bool:
    for n in C.levels():
        dims = [FiltObject.of(o).dim(n) - rank(o.t(n)) if o.dim(n) else 0 for o in C.objects]
        if not _is_exact(dims, [gr_map(d, n) for d in C.diffs]):
            return False
    return True
