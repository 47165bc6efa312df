"""Split finite projectives, morphisms over R[β], bounded complexes and their calculus.

A split object ``⊕ R(n)^{r_n}`` is stored as sorted ``(twist, rank)`` pairs and
its basis is ordered by twist.  Since ``Hom(R(m), R(n))`` is ``R·β^{n-m}``
for ``n ≥ m`` and zero otherwise, a morphism is an ordinary matrix over R
whose ``(i, j)`` entry may be nonzero only when the target twist of row
``i`` is at least the source twist of column ``j``; the β-exponent is the
difference of the twists.  Composition is plain matrix multiplication.

Cohomological conventions: ``A[k]^i = A^{i+k}`` with differential
``(-1)^k d``; ``cone(f: A → B) = A[1] ⊕ B`` with differential
``[[-d_A, 0], [-f, d_B]]``; on ``A ⊗ B`` the differential is
``d_A ⊗ 1 + (-1)^i 1 ⊗ d_B`` on ``A^i ⊗ B^j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from fper.exactcore import BaseRing, FreeComplex, Matrix


@dataclass(frozen=True)
class SplitObject:
    summands: tuple = ()

    def __post_init__(self):
        merged = {}
        for t, r in self.summands:
            if r < 0:
                raise ValueError("ranks must be nonnegative")
            if r:
                merged[t] = merged.get(t, 0) + r
        object.__setattr__(self, "summands", tuple(sorted(merged.items())))

    @classmethod
    def of(cls, *pairs) -> "SplitObject":
        return cls(tuple(pairs))

    @classmethod
    def from_twists(cls, twists: Iterable[int]) -> "SplitObject":
        counts = {}
        for t in twists:
            counts[t] = counts.get(t, 0) + 1
        return cls(tuple(counts.items()))

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.summands)

    @property
    def twists(self) -> tuple:
        return tuple(t for t, r in self.summands for _ in range(r))

    def twisted(self, n: int) -> "SplitObject":
        return SplitObject(tuple((t + n, r) for t, r in self.summands))

    def dual(self) -> "SplitObject":
        return SplitObject(tuple((-t, r) for t, r in self.summands))

    def __bool__(self):
        return self.rank > 0

    def __repr__(self):
        inner = " ⊕ ".join(f"R({t})" + (f"^{r}" if r > 1 else "") for t, r in self.summands)
        return inner or "0"


ZERO = SplitObject()


def layout(parts: Sequence[Sequence[int]]) -> tuple[SplitObject, list[list[int]]]:
    """Merge basis lists (given as twist sequences) into one sorted split object.

    Returns the object and, for every part, the new position of each of its
    basis vectors.  The sort is stable, so ties keep the order of the parts.
    """
    tagged = [(t, k, idx) for k, part in enumerate(parts) for idx, t in enumerate(part)]
    order = sorted(range(len(tagged)), key=lambda x: tagged[x][0])
    positions = [[0] * len(p) for p in parts]
    for new, old in enumerate(order):
        _, k, idx = tagged[old]
        positions[k][idx] = new
    return SplitObject.from_twists(t for t, _, _ in tagged), positions


@dataclass(frozen=True)
class GradedMatrix:
    source: SplitObject
    target: SplitObject
    mat: Matrix

    def __post_init__(self):
        if self.mat.shape != (self.target.rank, self.source.rank):
            raise ValueError(f"matrix shape {self.mat.shape} does not match {self.target!r} <- {self.source!r}")
        ts, tt = self.source.twists, self.target.twists
        for i, row in enumerate(self.mat.data):
            for j, c in enumerate(row):
                if c != 0 and tt[i] < ts[j]:
                    raise ValueError(
                        f"entry ({i},{j}) would need β-exponent {tt[i] - ts[j]} < 0")

    @property
    def ring(self) -> BaseRing:
        return self.mat.ring

    @classmethod
    def zero(cls, ring: BaseRing, source: SplitObject, target: SplitObject) -> "GradedMatrix":
        return cls(source, target, Matrix.zeros(ring, target.rank, source.rank))

    @classmethod
    def identity(cls, ring: BaseRing, obj: SplitObject) -> "GradedMatrix":
        return cls(obj, obj, Matrix.identity(ring, obj.rank))

    @classmethod
    def from_entries(cls, ring, source, target, entries) -> "GradedMatrix":
        """``entries``: iterable of ``(row, col, coefficient)``."""
        rows = [[ring.zero] * source.rank for _ in range(target.rank)]
        for i, j, c in entries:
            rows[i][j] = ring.coerce(c)
        return cls(source, target, Matrix.from_rows(ring, rows, source.rank))

    def exponent(self, i: int, j: int) -> int:
        return self.target.twists[i] - self.source.twists[j]

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if other.target != self.source:
            raise ValueError("composition of incompatible morphisms")
        return GradedMatrix(other.source, self.target, self.mat @ other.mat)

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        return GradedMatrix(self.source, self.target, self.mat + other.mat)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return GradedMatrix(self.source, self.target, self.mat - other.mat)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.source, self.target, -self.mat)

    def scale(self, c) -> "GradedMatrix":
        return GradedMatrix(self.source, self.target, self.mat.scale(c))

    def is_zero(self) -> bool:
        return self.mat.is_zero()

    def pi(self) -> Matrix:
        # β ↦ 1
        return self.mat

    def gr(self) -> "GradedMatrix":
        # β ↦ 0: keep exponent-0 coefficients only
        ts, tt = self.source.twists, self.target.twists
        z = self.ring.zero
        rows = [[c if tt[i] == ts[j] else z for j, c in enumerate(r)] for i, r in enumerate(self.mat.data)]
        return GradedMatrix(self.source, self.target, Matrix(self.ring, self.mat.rows, self.mat.cols,
                                                              tuple(tuple(r) for r in rows)))

    def twisted(self, n: int) -> "GradedMatrix":
        return GradedMatrix(self.source.twisted(n), self.target.twisted(n), self.mat)

    def change_ring(self, ring: BaseRing) -> "GradedMatrix":
        return GradedMatrix(self.source, self.target, self.mat.change_ring(ring))


def place(ring: BaseRing, source: SplitObject, target: SplitObject,
          blocks: Iterable[tuple[Sequence[int], Sequence[int], Matrix]]) -> GradedMatrix:
    """Assemble a morphism from blocks placed at given row/column positions."""
    rows = [[ring.zero] * source.rank for _ in range(target.rank)]
    for rpos, cpos, m in blocks:
        for a, i in enumerate(rpos):
            src = m.data[a]
            dst = rows[i]
            for b, j in enumerate(cpos):
                c = src[b]
                if c != 0:
                    dst[j] = ring.reduce(dst[j] + c)
    return GradedMatrix(source, target, Matrix(ring, target.rank, source.rank, tuple(tuple(r) for r in rows)))


@dataclass(frozen=True)
class FiltComplex:
    """Bounded complex of split finite projectives; ``objects[i]`` sits in degree ``lo + i``.

    Zero terms at either end are trimmed, so equality is equality of
    presentations.
    """
    ring: BaseRing
    lo: int
    objects: tuple
    diffs: tuple = field(default=())

    def __post_init__(self):
        objs, diffs, lo = list(self.objects), list(self.diffs), self.lo
        if len(diffs) != max(len(objs) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        while objs and not objs[0]:
            objs.pop(0)
            if diffs:
                diffs.pop(0)
            lo += 1
        while objs and not objs[-1]:
            objs.pop()
            if diffs:
                diffs.pop()
        if not objs:
            lo = 0
        object.__setattr__(self, "objects", tuple(objs))
        object.__setattr__(self, "diffs", tuple(diffs))
        object.__setattr__(self, "lo", lo)
        for i, d in enumerate(self.diffs):
            if d.source != objs[i] or d.target != objs[i + 1] or d.ring != self.ring:
                raise ValueError(f"differential in degree {lo + i} does not match the terms")
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise ValueError(f"d∘d != 0 at degree {lo + i}")

    @classmethod
    def zero(cls, ring: BaseRing) -> "FiltComplex":
        return cls(ring, 0, ())

    @property
    def hi(self) -> int:
        return self.lo + len(self.objects) - 1

    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.objects))

    def obj(self, k: int) -> SplitObject:
        i = k - self.lo
        return self.objects[i] if 0 <= i < len(self.objects) else ZERO

    def diff(self, k: int) -> GradedMatrix:
        i = k - self.lo
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return GradedMatrix.zero(self.ring, self.obj(k), self.obj(k + 1))

    @property
    def total_rank(self) -> int:
        return sum(o.rank for o in self.objects)

    def is_empty(self) -> bool:
        return not self.objects

    def twist_range(self) -> tuple[int, int]:
        ts = [t for o in self.objects for t, _ in o.summands]
        return (min(ts), max(ts)) if ts else (0, 0)

    def change_ring(self, ring: BaseRing) -> "FiltComplex":
        return FiltComplex(ring, self.lo, self.objects, tuple(d.change_ring(ring) for d in self.diffs))

    def __repr__(self):
        parts = [f"{k}:{self.obj(k)!r}" for k in self.degrees()]
        return f"FiltComplex({self.ring.name}; " + ", ".join(parts) + ")"


def complex_from(ring: BaseRing, lo: int, objects: Sequence[SplitObject],
                 diffs: Sequence[GradedMatrix]) -> FiltComplex:
    return FiltComplex(ring, lo, tuple(objects), tuple(diffs))


def free(ring: BaseRing, twist: int = 0, shift: int = 0, rank: int = 1) -> FiltComplex:
    """``R(twist)^rank [shift]``, i.e. the object placed in degree ``-shift``."""
    return FiltComplex(ring, -shift, (SplitObject.of((twist, rank)),))


def unit(ring: BaseRing) -> FiltComplex:
    return free(ring, 0)


@dataclass(frozen=True)
class ChainMap:
    source: FiltComplex
    target: FiltComplex
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        A, B = self.source, self.target
        for k, g in self.maps.items():
            if g.source != A.obj(k) or g.target != B.obj(k):
                raise ValueError(f"component in degree {k} has the wrong source or target")

    def at(self, k: int) -> GradedMatrix:
        g = self.maps.get(k)
        if g is None:
            return GradedMatrix.zero(self.source.ring, self.source.obj(k), self.target.obj(k))
        return g

    def degrees(self) -> list[int]:
        ks = set(self.source.degrees()) & set(self.target.degrees())
        return sorted(ks)

    def is_chain_map(self) -> bool:
        A, B = self.source, self.target
        ks = set(A.degrees()) | set(B.degrees())
        if not ks:
            return True
        for k in range(min(ks) - 1, max(ks) + 1):
            if not (B.diff(k) @ self.at(k) - self.at(k + 1) @ A.diff(k)).is_zero():
                return False
        return True

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise ValueError("composition of incompatible chain maps")
        ks = set(other.source.degrees()) & set(self.target.degrees())
        return ChainMap(other.source, self.target, {k: self.at(k) @ other.at(k) for k in ks})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._check(other)
        return ChainMap(self.source, self.target, {k: self.at(k) + other.at(k) for k in self.degrees()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._check(other)
        return ChainMap(self.source, self.target, {k: self.at(k) - other.at(k) for k in self.degrees()})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: -g for k, g in self.maps.items()})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {k: g.scale(c) for k, g in self.maps.items()})

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.maps.values())

    def _check(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("chain maps have different source or target")

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        return all(self.at(k) == other.at(k) for k in self.degrees())

    __hash__ = None


def chain_map(source: FiltComplex, target: FiltComplex, maps: dict, check: bool = True) -> ChainMap:
    f = ChainMap(source, target, dict(maps))
    if check and not f.is_chain_map():
        raise ValueError("maps do not commute with the differentials")
    return f


@dataclass(frozen=True)
class Homotopy:
    """Components ``h^k: A^k → B^{k-1}`` with ``f - g = d∘h + h∘d``."""
    source: FiltComplex
    target: FiltComplex
    maps: dict = field(default_factory=dict)

    def at(self, k: int) -> GradedMatrix:
        g = self.maps.get(k)
        if g is None:
            return GradedMatrix.zero(self.source.ring, self.source.obj(k), self.target.obj(k - 1))
        return g

    def boundary(self) -> ChainMap:
        A, B = self.source, self.target
        return ChainMap(A, B, {k: B.diff(k - 1) @ self.at(k) + self.at(k + 1) @ A.diff(k)
                               for k in set(A.degrees()) & set(B.degrees())})


def identity(A: FiltComplex) -> ChainMap:
    return ChainMap(A, A, {k: GradedMatrix.identity(A.ring, A.obj(k)) for k in A.degrees()})


def zero_map(A: FiltComplex, B: FiltComplex) -> ChainMap:
    return ChainMap(A, B, {})


def validate(A: FiltComplex) -> FiltComplex:
    """Re-run the structural checks (d∘d = 0, twist constraints)."""
    return FiltComplex(A.ring, A.lo, A.objects, A.diffs)


# --- constructions ---------------------------------------------------------

def shift(A: FiltComplex, k: int) -> FiltComplex:
    sign = -1 if k % 2 else 1
    return FiltComplex(A.ring, A.lo - k, A.objects, tuple(d.scale(sign) for d in A.diffs))


def shift_map(f: ChainMap, k: int) -> ChainMap:
    return ChainMap(shift(f.source, k), shift(f.target, k), {d - k: g for d, g in f.maps.items()})


def twist(A: FiltComplex, n: int) -> FiltComplex:
    return FiltComplex(A.ring, A.lo, tuple(o.twisted(n) for o in A.objects),
                       tuple(d.twisted(n) for d in A.diffs))


def twist_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(twist(f.source, n), twist(f.target, n), {k: g.twisted(n) for k, g in f.maps.items()})


@dataclass(frozen=True)
class SumLayout:
    """A direct sum together with the positions of each summand's basis in each degree."""
    complex: FiltComplex
    positions: tuple  # per summand: dict degree -> list of positions

    def injection(self, i: int, summand: FiltComplex) -> ChainMap:
        S = self.complex
        maps = {}
        for k in summand.degrees():
            obj = summand.obj(k)
            maps[k] = place(S.ring, obj, S.obj(k),
                            [(self.positions[i][k], range(obj.rank), Matrix.identity(S.ring, obj.rank))])
        return ChainMap(summand, S, maps)

    def projection(self, i: int, summand: FiltComplex) -> ChainMap:
        S = self.complex
        maps = {}
        for k in summand.degrees():
            obj = summand.obj(k)
            maps[k] = place(S.ring, S.obj(k), obj,
                            [(range(obj.rank), self.positions[i][k], Matrix.identity(S.ring, obj.rank))])
        return ChainMap(S, summand, maps)


def direct_sum_layout(summands: Sequence[FiltComplex], ring: Optional[BaseRing] = None) -> SumLayout:
    if not summands:
        return SumLayout(FiltComplex.zero(ring), ())
    ring = summands[0].ring
    ks = sorted({k for A in summands for k in A.degrees()})
    if not ks:
        return SumLayout(FiltComplex.zero(ring), tuple({} for _ in summands))
    lo, hi = ks[0], ks[-1]
    objs, pos = {}, [dict() for _ in summands]
    for k in range(lo, hi + 1):
        obj, p = layout([A.obj(k).twists for A in summands])
        objs[k] = obj
        for i in range(len(summands)):
            pos[i][k] = p[i]
    diffs = []
    for k in range(lo, hi):
        diffs.append(place(ring, objs[k], objs[k + 1],
                           [(pos[i][k + 1], pos[i][k], A.diff(k).mat) for i, A in enumerate(summands)]))
    S = FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))
    # trimming may move lo; positions stay keyed by degree
    return SumLayout(S, tuple(pos))


def direct_sum(*summands: FiltComplex) -> FiltComplex:
    return direct_sum_layout(summands).complex


def direct_sum_maps(layout_src: SumLayout, layout_tgt: SumLayout, maps: Sequence[ChainMap]) -> ChainMap:
    """Block diagonal chain map between two direct sums."""
    S, T = layout_src.complex, layout_tgt.complex
    comps = {}
    for k in set(S.degrees()) & set(T.degrees()):
        comps[k] = place(S.ring, S.obj(k), T.obj(k),
                         [(layout_tgt.positions[i].get(k, []), layout_src.positions[i].get(k, []), f.at(k).mat)
                          for i, f in enumerate(maps)])
    return ChainMap(S, T, comps)


@dataclass(frozen=True)
class ConeData:
    complex: FiltComplex
    inclusion: ChainMap   # B → cone(f)
    projection: ChainMap  # cone(f) → A[1]


def cone_data(f: ChainMap) -> ConeData:
    A, B = f.source, f.target
    ring = A.ring
    ks = set(k - 1 for k in A.degrees()) | set(B.degrees())
    if not ks:
        C = FiltComplex.zero(ring)
        return ConeData(C, ChainMap(B, C, {}), ChainMap(C, shift(A, 1), {}))
    lo, hi = min(ks), max(ks)
    objs, pa, pb = {}, {}, {}
    for k in range(lo, hi + 1):
        obj, p = layout([A.obj(k + 1).twists, B.obj(k).twists])
        objs[k], pa[k], pb[k] = obj, p[0], p[1]
    diffs = []
    for k in range(lo, hi):
        diffs.append(place(ring, objs[k], objs[k + 1], [
            (pa[k + 1], pa[k], (-A.diff(k + 1)).mat),
            (pb[k + 1], pa[k], (-f.at(k + 1)).mat),
            (pb[k + 1], pb[k], B.diff(k).mat),
        ]))
    C = FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))
    A1 = shift(A, 1)
    inc = {}
    for k in B.degrees():
        inc[k] = place(ring, B.obj(k), C.obj(k), [(pb[k], range(B.obj(k).rank), Matrix.identity(ring, B.obj(k).rank))])
    proj = {}
    for k in A1.degrees():
        n = A1.obj(k).rank
        proj[k] = place(ring, C.obj(k), A1.obj(k), [(range(n), pa[k], Matrix.identity(ring, n))])
    return ConeData(C, ChainMap(B, C, inc), ChainMap(C, A1, proj))


def cone(f: ChainMap) -> FiltComplex:
    return cone_data(f).complex


def tensor(A: FiltComplex, B: FiltComplex) -> FiltComplex:
    ring = A.ring
    if A.is_empty() or B.is_empty():
        return FiltComplex.zero(ring)
    lo, hi = A.lo + B.lo, A.hi + B.hi
    objs, pos = {}, {}
    for k in range(lo, hi + 1):
        parts, keys = [], []
        for i in A.degrees():
            j = k - i
            if B.lo <= j <= B.hi:
                ta, tb = A.obj(i).twists, B.obj(j).twists
                parts.append([a + b for a in ta for b in tb])
                keys.append(i)
        obj, p = layout(parts)
        objs[k] = obj
        pos[k] = dict(zip(keys, p))
    diffs = []
    for k in range(lo, hi):
        rows = [[ring.zero] * objs[k].rank for _ in range(objs[k + 1].rank)]
        for i, src in pos[k].items():
            j = k - i
            na, nb = A.obj(i).rank, B.obj(j).rank
            if i + 1 in pos[k + 1]:
                dst = pos[k + 1][i + 1]
                da = A.diff(i).mat
                for a2 in range(A.obj(i + 1).rank):
                    for a in range(na):
                        c = da[a2, a]
                        if c:
                            for b in range(nb):
                                rows[dst[a2 * nb + b]][src[a * nb + b]] = c
            if i in pos[k + 1]:
                dst = pos[k + 1][i]
                db = B.diff(j).mat
                nb2 = B.obj(j + 1).rank
                sign = -1 if i % 2 else 1
                for a in range(na):
                    for b2 in range(nb2):
                        for b in range(nb):
                            c = db[b2, b]
                            if c:
                                r_, c_ = dst[a * nb2 + b2], src[a * nb + b]
                                rows[r_][c_] = ring.reduce(rows[r_][c_] + sign * c)
        diffs.append(GradedMatrix(objs[k], objs[k + 1],
                                  Matrix(ring, objs[k + 1].rank, objs[k].rank, tuple(tuple(r) for r in rows))))
    return FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))


def _dual_positions(obj: SplitObject) -> list[int]:
    _, p = layout([[-t for t in obj.twists]])
    return p[0]


def dual(A: FiltComplex) -> FiltComplex:
    """Degreewise dual: ``dual(A)^i = (A^{-i})^∨`` with transposed differentials."""
    ring = A.ring
    if A.is_empty():
        return A
    lo, hi = -A.hi, -A.lo
    objs = {k: A.obj(-k).dual() for k in range(lo, hi + 1)}
    pos = {k: _dual_positions(A.obj(-k)) for k in range(lo, hi + 1)}
    diffs = []
    for k in range(lo, hi):
        t = A.diff(-k - 1).mat.transpose()  # rows: A^{-k-1}, cols: A^{-k}
        diffs.append(place(ring, objs[k], objs[k + 1], [(pos[k + 1], pos[k], t)]))
    return FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))


def evaluation(A: FiltComplex) -> ChainMap:
    """The pairing ``A ⊗ dual(A) → R(0)``; the summand ``A^i ⊗ (A^i)^∨`` carries sign (-1)^{i(i+1)/2}."""
    ring = A.ring
    D = dual(A)
    T = tensor(A, D)
    U = unit(ring)
    if A.is_empty():
        return ChainMap(T, U, {})
    # recompute the degree-0 layout used by tensor()
    parts, keys = [], []
    for i in A.degrees():
        j = -i
        if D.lo <= j <= D.hi:
            parts.append([a + b for a in A.obj(i).twists for b in D.obj(j).twists])
            keys.append(i)
    _, p = layout(parts)
    pos = dict(zip(keys, p))
    entries = []
    for i, src in pos.items():
        n = A.obj(i).rank
        dpos = _dual_positions(A.obj(i))
        sign = -1 if (i * (i + 1) // 2) % 2 else 1
        for a in range(n):
            entries.append((0, src[a * n + dpos[a]], sign))
    g = GradedMatrix.from_entries(ring, T.obj(0), U.obj(0), entries)
    return ChainMap(T, U, {0: g})


def beta_map(A: FiltComplex) -> ChainMap:
    """The natural map ``β: A → A(1)``: identity coefficients with β-exponent 1."""
    B = twist(A, 1)
    return ChainMap(A, B, {k: GradedMatrix(A.obj(k), B.obj(k), Matrix.identity(A.ring, A.obj(k).rank))
                           for k in A.degrees()})


def elementary(ring: BaseRing, source_twist: int, target_twist: int, coef=1, degree: int = 0) -> ChainMap:
    """The morphism ``coef·β^{target-source}: R(source)[−degree] → R(target)[−degree]``."""
    A = free(ring, source_twist, -degree)
    B = free(ring, target_twist, -degree)
    g = GradedMatrix.from_entries(ring, A.obj(degree), B.obj(degree), [(0, 0, coef)])
    return ChainMap(A, B, {degree: g})


def cone_beta(ring: BaseRing, power: int = 1, coef=1, twist_: int = 0) -> FiltComplex:
    """``cone(coef·β^power: R(n) → R(n+power))``."""
    return cone(elementary(ring, twist_, twist_ + power, coef))


def pi_complex(A: FiltComplex) -> FreeComplex:
    return FreeComplex(A.ring, A.lo, tuple(o.rank for o in A.objects), tuple(d.pi() for d in A.diffs))


def gr_total(A: FiltComplex) -> FreeComplex:
    return FreeComplex(A.ring, A.lo, tuple(o.rank for o in A.objects), tuple(d.gr().mat for d in A.diffs))


def gr_complex(A: FiltComplex) -> dict:
    """Associated graded: twist ``n`` ↦ the complex of rank-``n``-parts."""
    out = {}
    twists = sorted({t for o in A.objects for t, _ in o.summands})
    for n in twists:
        idx = {k: [i for i, t in enumerate(A.obj(k).twists) if t == n] for k in A.degrees()}
        diffs = tuple(A.diff(k).mat.submatrix(idx[k + 1], idx[k]) for k in range(A.lo, A.hi))
        out[n] = FreeComplex(A.ring, A.lo, tuple(len(idx[k]) for k in A.degrees()), diffs)
    return out


def embed_degree_zero(C: FreeComplex) -> FiltComplex:
    """σ_0: every term placed in filtration weight 0."""
    objs = tuple(SplitObject.of((0, n)) for n in C.dims)
    diffs = tuple(GradedMatrix(objs[i], objs[i + 1], d) for i, d in enumerate(C.diffs))
    return FiltComplex(C.ring, C.lo, objs, diffs)


def tensor_residue(A: FiltComplex, ring: BaseRing) -> FiltComplex:
    """Base change ``A ⊗_R κ``, e.g. Z → F_p."""
    return A.change_ring(ring)
