"""Hom complexes, nullhomotopies and homotopy equivalences in K^b(fmd(R)).

Each allowed matrix entry of ``Hom(A^i, B^{i+n})`` (target twist ≥ source
twist) is one free coordinate of the hom complex in degree ``n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from fper.exactcore import (
    BaseRing, FreeComplex, HomologySummary, Matrix, columns, homology, nullspace, rank, solve, to_columns,
)
from fper.homotopy.objects import (
    ChainMap, FiltComplex, GradedMatrix, Homotopy, SplitObject, cone_data, free, identity, twist,
)


@dataclass(frozen=True)
class HomComplex:
    source: FiltComplex
    target: FiltComplex
    coords: dict  # degree n -> list of (i, row, col)

    @property
    def ring(self) -> BaseRing:
        return self.source.ring

    def dim(self, n: int) -> int:
        return len(self.coords.get(n, ()))

    def index(self, n: int) -> dict:
        return {c: k for k, c in enumerate(self.coords.get(n, ()))}

    def differential(self, n: int) -> Matrix:
        """``D(φ) = d_B φ − (−1)^n φ d_A`` from degree n to n+1."""
        A, B, ring = self.source, self.target, self.ring
        src, dst = self.coords.get(n, []), self.index(n + 1)
        out = [[ring.zero] * len(src) for _ in range(len(dst))]
        sign = -1 if n % 2 else 1
        for col, (i, r, c) in enumerate(src):
            # d_B^{i+n} ∘ e_{r,c}: row r of B^{i+n} -> rows of B^{i+n+1}
            dB = B.diff(i + n).mat
            for r2 in range(dB.rows):
                x = dB[r2, r]
                if x:
                    k = dst.get((i, r2, c))
                    if k is not None:
                        out[k][col] = ring.reduce(out[k][col] + x)
            # e_{r,c} ∘ d_A^{i-1}: lives in Hom(A^{i-1}, B^{i+n})
            dA = A.diff(i - 1).mat
            for c0 in range(dA.cols):
                x = dA[c, c0]
                if x:
                    k = dst.get((i - 1, r, c0))
                    if k is not None:
                        out[k][col] = ring.reduce(out[k][col] - sign * x)
        return Matrix(ring, len(dst), len(src), tuple(tuple(r) for r in out))

    def vector(self, n: int, comps) -> Matrix:
        """Coordinates of a family ``i ↦ GradedMatrix A^i → B^{i+n}``."""
        ring = self.ring
        vals = []
        for i, r, c in self.coords.get(n, []):
            g = comps(i)
            vals.append([g.mat[r, c] if g is not None and g.mat.rows else ring.zero])
        return Matrix(ring, len(vals), 1, tuple(tuple(v) for v in vals))

    def family(self, n: int, vec) -> dict:
        A, B, ring = self.source, self.target, self.ring
        data = {}
        for (i, r, c), x in zip(self.coords.get(n, []), vec):
            if x != 0:
                data.setdefault(i, []).append((r, c, x))
        out = {}
        for i in A.degrees():
            if B.obj(i + n).rank:
                out[i] = GradedMatrix.from_entries(ring, A.obj(i), B.obj(i + n), data.get(i, []))
        return out

    def as_chain_map(self, vec) -> ChainMap:
        return ChainMap(self.source, self.target, self.family(0, vec))

    def as_homotopy(self, vec) -> Homotopy:
        return Homotopy(self.source, self.target, self.family(-1, vec))

    def free_complex(self, lo: Optional[int] = None, hi: Optional[int] = None) -> FreeComplex:
        ns = sorted(self.coords)
        if not ns:
            return FreeComplex(self.ring, 0, (), ())
        lo = ns[0] if lo is None else lo
        hi = ns[-1] if hi is None else hi
        dims = tuple(self.dim(n) for n in range(lo, hi + 1))
        diffs = tuple(self.differential(n) for n in range(lo, hi))
        return FreeComplex(self.ring, lo, dims, diffs)


def hom_complex(A: FiltComplex, B: FiltComplex, degrees=None) -> HomComplex:
    coords = {}
    if A.is_empty() or B.is_empty():
        return HomComplex(A, B, {})
    ns = range(B.lo - A.hi, B.hi - A.lo + 1) if degrees is None else degrees
    for n in ns:
        cs = []
        for i in A.degrees():
            ta, tb = A.obj(i).twists, B.obj(i + n).twists
            cs.extend((i, r, c) for r in range(len(tb)) for c in range(len(ta)) if tb[r] >= ta[c])
        coords[n] = cs
    return HomComplex(A, B, coords)


def is_nullhomotopic(f: ChainMap) -> Optional[Homotopy]:
    """A homotopy ``h`` with ``f = d∘h + h∘d``, or None (integral over Z)."""
    H = hom_complex(f.source, f.target, degrees=(-1, 0))
    D = H.differential(-1)
    b = H.vector(0, lambda i: f.at(i))
    if b.rows == 0 or b.is_zero():
        return Homotopy(f.source, f.target, {})
    x = solve(D, b)
    if x is None:
        return None
    return H.as_homotopy([r[0] for r in x.data])


def is_homotopic(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    return is_nullhomotopic(f - g)


def is_zero_object(A: FiltComplex) -> bool:
    return A.is_empty() or is_nullhomotopic(identity(A)) is not None


def homotopy_hom(A: FiltComplex, B: FiltComplex) -> HomologySummary:
    """``Hom_{K^b}(A, B)`` as (free rank, torsion) in degree 0."""
    H = hom_complex(A, B, degrees=(-1, 0, 1))
    C = H.free_complex(-1, 1)
    return C.homology()


def homotopy_hom_rank(A: FiltComplex, B: FiltComplex, n: int = 0) -> tuple[int, tuple]:
    """``Hom_{fper}(A, B(n))`` as ``(free rank, torsion factors)``."""
    h = homotopy_hom(A, twist(B, n))
    return h.rank(0), h.torsion(0)


@dataclass(frozen=True)
class CentralRingSlice:
    n: int
    rank: int
    torsion: tuple
    generator: Optional[ChainMap]  # β^n when n ≥ 0


def graded_central_ring(ring: BaseRing, lo: int, hi: int) -> list[CentralRingSlice]:
    if lo > hi:
        raise ValueError("need lo <= hi")
    from fper.homotopy.objects import elementary
    out = []
    R0 = free(ring, 0)
    for n in range(lo, hi + 1):
        r, t = homotopy_hom_rank(R0, R0, n)
        if r > 1:
            raise AssertionError(f"central ring slice {n} has rank {r} > 1")
        gen = elementary(ring, 0, n) if n >= 0 else None
        out.append(CentralRingSlice(n, r, t, gen))
    return out


def cycles_basis(A: FiltComplex, B: FiltComplex) -> tuple[HomComplex, list[list]]:
    """Coordinates of a basis (lattice basis over Z) of chain maps ``A → B``."""
    H = hom_complex(A, B, degrees=(-1, 0, 1))
    if H.dim(0) == 0:
        return H, []
    D0 = H.differential(0)
    return H, columns(nullspace(D0))


def chain_maps_mod_homotopy(A: FiltComplex, B: FiltComplex) -> tuple[HomComplex, list[list]]:
    """Representatives of a basis of ``H^0 Hom(A, B)`` (fields only)."""
    if not A.ring.is_field:
        raise ValueError("needs a field")
    H, Z = cycles_basis(A, B)
    if not Z:
        return H, []
    ring = A.ring
    bnd = columns(H.differential(-1)) if H.dim(-1) else []
    basis = [v for v in bnd if any(v)]
    r0 = rank(to_columns(basis, ring, H.dim(0))) if basis else 0
    reps = []
    cur = list(basis)
    for z in Z:
        trial = cur + [z]
        r = rank(to_columns(trial, ring, H.dim(0)))
        if r > r0:
            cur, r0 = trial, r
            reps.append(z)
    return H, reps


def enumerate_chain_maps(A: FiltComplex, B: FiltComplex, cap: int = 2 ** 12) -> Iterator[ChainMap]:
    """All combinations of an ``H^0`` basis over a finite prime field (at most ``cap``)."""
    ring = A.ring
    if ring.kind != "Fp":
        raise ValueError("enumeration needs a finite prime field")
    H, reps = chain_maps_mod_homotopy(A, B)
    count = 0
    for coeffs in itertools.product(range(ring.p), repeat=len(reps)):
        if count >= cap:
            return
        count += 1
        vec = [ring.zero] * H.dim(0)
        for c, z in zip(coeffs, reps):
            if c:
                vec = [ring.reduce(x + c * y) for x, y in zip(vec, z)]
        yield H.as_chain_map(vec)


@dataclass(frozen=True)
class Equivalence:
    """Chain maps ``forward: A → B`` and ``backward: B → A`` with homotopies to the identities."""
    forward: ChainMap
    backward: ChainMap
    source_homotopy: Optional[Homotopy] = None  # id_A − backward∘forward
    target_homotopy: Optional[Homotopy] = None  # id_B − forward∘backward

    @property
    def source(self) -> FiltComplex:
        return self.forward.source

    @property
    def target(self) -> FiltComplex:
        return self.forward.target

    def certify(self) -> "Equivalence":
        """Solve for both homotopies; raises if either composite is not ≃ id."""
        f, g = self.forward, self.backward
        if not (f.is_chain_map() and g.is_chain_map()):
            raise ValueError("witness maps are not chain maps")
        hA = is_nullhomotopic(identity(self.source) - g @ f)
        hB = is_nullhomotopic(identity(self.target) - f @ g)
        if hA is None or hB is None:
            raise ValueError("witness maps are not mutually inverse up to homotopy")
        return Equivalence(f, g, hA, hB)

    def is_certified(self) -> bool:
        if self.source_homotopy is None or self.target_homotopy is None:
            return False
        A, B = self.source, self.target
        okA = (identity(A) - self.backward @ self.forward) == self.source_homotopy.boundary()
        okB = (identity(B) - self.forward @ self.backward) == self.target_homotopy.boundary()
        return okA and okB

    def then(self, other: "Equivalence") -> "Equivalence":
        return Equivalence(other.forward @ self.forward, self.backward @ other.backward)

    def inverse(self) -> "Equivalence":
        return Equivalence(self.backward, self.forward, self.target_homotopy, self.source_homotopy)


def inverse_from_contraction(u: ChainMap) -> Optional[ChainMap]:
    """If ``cone(u)`` is contractible, read a homotopy inverse of ``u`` off the contraction."""
    cd = cone_data(u)
    C = cd.complex
    if C.is_empty():
        return ChainMap(u.target, u.source, {})
    h = is_nullhomotopic(identity(C))
    if h is None:
        return None
    A, B = u.source, u.target
    # the block of the contraction from the B-part to the A[1]-part is −v
    maps = {}
    for k in set(A.degrees()) & set(B.degrees()):
        comp = cd.projection.at(k - 1) @ h.at(k) @ cd.inclusion.at(k)  # B^k -> A[1]^{k-1} = A^k
        maps[k] = GradedMatrix(B.obj(k), A.obj(k), (-comp).mat)
    return ChainMap(B, A, maps)


def are_homotopy_equivalent(A: FiltComplex, B: FiltComplex, cap: int = 2 ** 12,
                            coefficients=(1, -1, 2, -2)) -> Optional[Equivalence]:
    """Search for a certified homotopy equivalence; None means none was found.

    Over a field both sides are minimized first and isomorphisms between the
    minimal complexes are searched; over Z unit-pivot reductions are followed
    by a bounded search among small integral combinations of chain maps.
    """
    from fper.homotopy.field import reduce_units, invariant_signature
    ring = A.ring
    ra, rb = reduce_units(A), reduce_units(B)
    Ma, Mb = ra.complex, rb.complex
    if ring.is_field:
        if invariant_signature(Ma) != invariant_signature(Mb):
            return None
        iso = _minimal_isomorphism(Ma, Mb, cap)
        if iso is None:
            return None
        mid = Equivalence(iso[0], iso[1])
    else:
        if Ma.is_empty() and Mb.is_empty():
            mid = Equivalence(ChainMap(Ma, Mb, {}), ChainMap(Mb, Ma, {}))
        else:
            mid = _integral_search(Ma, Mb, cap, coefficients)
            if mid is None:
                return None
    eq = Equivalence(ra.forward, ra.backward).then(mid).then(
        Equivalence(rb.backward, rb.forward))
    return eq.certify()


def _minimal_isomorphism(Ma: FiltComplex, Mb: FiltComplex, cap: int):
    from fper.exactcore import inverse
    ring = Ma.ring
    if Ma.is_empty() and Mb.is_empty():
        return ChainMap(Ma, Mb, {}), ChainMap(Mb, Ma, {})
    if ring.kind == "Fp":
        candidates = enumerate_chain_maps(Ma, Mb, cap)
    else:
        candidates = _small_combinations(Ma, Mb, cap, (1, -1, 2))
    for u in candidates:
        if all(u.at(k).gr().mat.rows == u.at(k).gr().mat.cols and
               rank(u.at(k).gr().mat) == u.at(k).mat.rows for k in Ma.degrees()):
            v = {k: GradedMatrix(Mb.obj(k), Ma.obj(k), inverse(u.at(k).mat)) for k in Ma.degrees()}
            return u, ChainMap(Mb, Ma, v)
    return None


def _small_combinations(A, B, cap, coefficients):
    H, Z = cycles_basis(A, B)
    ring = A.ring
    choices = (0,) + tuple(coefficients)
    count = 0
    for coeffs in itertools.product(choices, repeat=len(Z)):
        if count >= cap:
            return
        count += 1
        if not any(coeffs):
            continue
        vec = [ring.zero] * H.dim(0)
        for c, z in zip(coeffs, Z):
            if c:
                vec = [ring.reduce(x + ring.coerce(c) * y) for x, y in zip(vec, z)]
        yield H.as_chain_map(vec)


def _integral_search(A, B, cap, coefficients) -> Optional[Equivalence]:
    from fper.homotopy.field import invariant_signature
    if invariant_signature(A) != invariant_signature(B):
        return None
    for u in _small_combinations(A, B, cap, coefficients):
        v = inverse_from_contraction(u)
        if v is not None:
            return Equivalence(u, v)
    return None


@dataclass(frozen=True)
class LocalizedHom:
    stabilization: int
    rank: int
    bound: int
    ranks: tuple  # rank of Hom(a(−n), b) for n = 0..bound


def localized_hom(a: SplitObject, b: SplitObject, ring: BaseRing) -> LocalizedHom:
    """``colim_n Hom(a(−n), b)``: ranks until stabilization at the twist-spread bound."""
    A = FiltComplex(ring, 0, (a,))
    B = FiltComplex(ring, 0, (b,))
    ta, tb = a.twists, b.twists
    bound = max(0, max(ta) - min(tb)) if ta and tb else 0
    ranks = []
    for n in range(bound + 1):
        r, tors = homotopy_hom_rank(twist(A, -n), B, 0)
        if tors:
            raise AssertionError("hom between split objects has torsion")
        ranks.append(r)
    final = ranks[-1]
    stab = next(n for n, r in enumerate(ranks) if r == final)
    expected = a.rank * b.rank
    if final != expected:
        raise AssertionError(f"localized rank {final} != {expected}")
    return LocalizedHom(stab, final, bound, tuple(ranks))
