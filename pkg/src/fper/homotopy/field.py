"""Gaussian cancellation of unit entries and the field-case decomposition.

Over a field every complex reduces to one whose differentials have no
nonzero exponent-0 entries, and such a minimal complex splits into shifted
twists ``R(n)`` and shifted cones of ``β^e``, ``e ≥ 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from fper.exactcore import Matrix, columns, inverse, nullspace, rank, to_columns
from fper.homotopy.homs import Equivalence
from fper.homotopy.objects import (
    ChainMap, FiltComplex, GradedMatrix, SplitObject, direct_sum_layout, gr_complex, identity, pi_complex,
)


class Reduction(NamedTuple):
    complex: FiltComplex
    forward: ChainMap   # original → reduced
    backward: ChainMap  # reduced → original


def _find_pivot(A: FiltComplex):
    ring = A.ring
    for k in range(A.lo, A.hi):
        d = A.diff(k)
        ts, tt = d.source.twists, d.target.twists
        for i, row in enumerate(d.mat.data):
            for j, c in enumerate(row):
                if c != 0 and tt[i] == ts[j] and ring.is_unit(c):
                    return k, i, j
    return None


def _without(obj: SplitObject, idx: int) -> tuple[SplitObject, list[int]]:
    keep = [i for i in range(obj.rank) if i != idx]
    return SplitObject.from_twists(obj.twists[i] for i in keep), keep


def cancel(A: FiltComplex, k: int, y: int, x: int) -> Reduction:
    """Cancel the unit entry ``d^k[y, x]`` (same twist on both ends)."""
    ring = A.ring
    d = A.diff(k).mat
    phi_inv = ring.inv(d[y, x])
    Ck, keepC = _without(A.obj(k), x)
    Dk, keepD = _without(A.obj(k + 1), y)
    objs = {j: A.obj(j) for j in A.degrees()}
    objs[k], objs[k + 1] = Ck, Dk

    # δ' = δ − γ φ^{-1} β
    delta = d.submatrix(keepD, keepC)
    gamma = d.submatrix(keepD, [x])
    beta = d.submatrix([y], keepC)
    new_delta = delta - (gamma @ beta).scale(phi_inv)

    diffs = {}
    for j in range(A.lo, A.hi):
        if j == k:
            diffs[j] = GradedMatrix(Ck, Dk, new_delta)
        elif j == k - 1:
            m = A.diff(j).mat.submatrix(keepC, range(A.obj(j).rank))
            diffs[j] = GradedMatrix(objs[j], Ck, m)
        elif j == k + 1:
            m = A.diff(j).mat.submatrix(range(A.obj(j + 1).rank), keepD)
            diffs[j] = GradedMatrix(Dk, objs[j + 1], m)
        else:
            diffs[j] = A.diff(j)
    M = FiltComplex(ring, A.lo, tuple(objs[j] for j in A.degrees()),
                    tuple(diffs[j] for j in range(A.lo, A.hi)))

    fwd, bwd = {}, {}
    for j in A.degrees():
        if j == k:
            fwd[j] = GradedMatrix(A.obj(k), Ck, Matrix.identity(ring, A.obj(k).rank).submatrix(keepC, range(A.obj(k).rank)))
            top = beta.scale(-phi_inv)
            rows = []
            ci = 0
            for i in range(A.obj(k).rank):
                if i == x:
                    rows.append(top.data[0])
                else:
                    rows.append(tuple(ring.one if c == ci else ring.zero for c in range(Ck.rank)))
                    ci += 1
            bwd[j] = GradedMatrix(Ck, A.obj(k), Matrix(ring, A.obj(k).rank, Ck.rank, tuple(rows)))
        elif j == k + 1:
            n = A.obj(k + 1).rank
            left = gamma.scale(-phi_inv)
            rows = []
            for r, i in enumerate(keepD):
                rows.append(tuple(left[r, 0] if c == y else (ring.one if c == i else ring.zero) for c in range(n)))
            fwd[j] = GradedMatrix(A.obj(k + 1), Dk, Matrix(ring, Dk.rank, n, tuple(rows)))
            bwd[j] = GradedMatrix(Dk, A.obj(k + 1), Matrix.identity(ring, n).submatrix(range(n), keepD))
        else:
            fwd[j] = bwd[j] = GradedMatrix.identity(ring, A.obj(j))
    fm = {j: g for j, g in fwd.items() if j in M.degrees()}
    bm = {j: g for j, g in bwd.items() if j in M.degrees()}
    return Reduction(M, ChainMap(A, M, fm), ChainMap(M, A, bm))


def reduce_units(A: FiltComplex) -> Reduction:
    """Cancel exponent-0 unit entries until none remain (all nonzero ones over a field)."""
    cur = A
    fwd, bwd = identity(A), identity(A)
    while True:
        piv = _find_pivot(cur)
        if piv is None:
            return Reduction(cur, fwd, bwd)
        step = cancel(cur, *piv)
        fwd = step.forward @ fwd
        bwd = bwd @ step.backward
        cur = step.complex


def is_minimal(A: FiltComplex) -> bool:
    return all(A.diff(k).gr().is_zero() for k in range(A.lo, A.hi))


def minimize(A: FiltComplex) -> Reduction:
    if not A.ring.is_field:
        raise ValueError("minimize needs a field base ring")
    return reduce_units(A)


def invariant_signature(A: FiltComplex) -> tuple:
    """π- and gr-homology, a cheap necessary condition for homotopy equivalence."""
    pi_h = tuple(sorted(pi_complex(A).homology().nonzero().items()))
    gr_h = tuple(sorted((n, tuple(sorted(C.homology().nonzero().items())))
                        for n, C in gr_complex(A).items() if not C.homology().is_zero()))
    return pi_h, gr_h


# --- decomposition ---------------------------------------------------------

def _level(W: Matrix, twists, n: int) -> Matrix:
    """Basis of ``W ∩ F_n`` where ``F_n`` is spanned by coordinates of twist ≥ n."""
    low = [i for i, t in enumerate(twists) if t < n]
    if W.cols == 0:
        return W
    if not low:
        return W
    N = nullspace(W.submatrix(low, range(W.cols)))
    return W @ N


def _extend(ring, dim, current: list, candidates: list) -> list:
    """Candidates that extend ``current`` to a basis of the joint span."""
    new = []
    r = rank(to_columns(current, ring, dim)) if current else 0
    for v in candidates:
        trial = current + new + [v]
        r2 = rank(to_columns(trial, ring, dim))
        if r2 > r:
            new.append(v)
            r = r2
    return new


@dataclass(frozen=True)
class Summand:
    """``R(twist)`` in ``degree``, or the cone piece ``R(twist) → R(target_twist)`` in degrees ``degree, degree+1``."""
    degree: int
    twist: int
    target_twist: Optional[int] = None

    @property
    def is_cone(self) -> bool:
        return self.target_twist is not None

    @property
    def exponent(self) -> int:
        return self.target_twist - self.twist

    def matrix(self, ring) -> GradedMatrix:
        s, t = SplitObject.of((self.twist, 1)), SplitObject.of((self.target_twist, 1))
        return GradedMatrix.from_entries(ring, s, t, [(0, 0, 1)])

    def complex(self, ring) -> FiltComplex:
        if not self.is_cone:
            return FiltComplex(ring, self.degree, (SplitObject.of((self.twist, 1)),))
        g = self.matrix(ring)
        return FiltComplex(ring, self.degree, (g.source, g.target), (g,))

    def determinant_exponent(self) -> int:
        return self.exponent if self.is_cone else 0


class Decomposition(NamedTuple):
    summands: list
    complex: FiltComplex        # direct sum of the summand complexes
    equivalence: Equivalence    # direct sum → A, certified


def _common_adapted(ring, Cb: Matrix, tw_src, D: Matrix, tw_tgt) -> list:
    """Basis of span(Cb) adapted to both the source filtration and the one pulled back along D."""
    n_amb = Cb.rows
    DC = D @ Cb
    ns = sorted(set(tw_src), reverse=True)
    ms = sorted(set(tw_tgt), reverse=True)

    def inter(n, m):
        low_s = [i for i, t in enumerate(tw_src) if t < n]
        low_t = [i for i, t in enumerate(tw_tgt) if t < m]
        cond = Cb.submatrix(low_s, range(Cb.cols)).vstack(DC.submatrix(low_t, range(Cb.cols))) \
            if (low_s or low_t) else Matrix.zeros(ring, 0, Cb.cols)
        N = nullspace(cond) if cond.rows else Matrix.identity(ring, Cb.cols)
        return columns(Cb @ N)

    out = []
    for n in ns:
        for m in ms:
            A = inter(n, m)
            if not A:
                continue
            B = inter(n + 1, m) + inter(n, m + 1)
            new = _extend(ring, n_amb, B, A)
            for v in new:
                out.append((v, n, m))
    if len(out) != Cb.cols:
        raise AssertionError("common adapted basis has the wrong size")
    return out


def decompose_field(A: FiltComplex) -> Decomposition:
    """Split a complex over a field into shifted twists and shifted cones of β-powers."""
    ring = A.ring
    if not ring.is_field:
        raise ValueError("decompose_field needs a field base ring")
    red = minimize(A)
    M = red.complex
    summands = []
    vectors = []   # (summand index, degree, position in summand's term, ambient vector)
    images = []    # vectors of Im^k with weights, from the previous degree
    for k in M.degrees():
        tw = M.obj(k).twists
        n = len(tw)
        D = M.diff(k).mat
        K = nullspace(D) if D.rows else Matrix.identity(ring, n)
        Imv = [v for v, _ in images]
        # H: extend the image to the kernel, level by level
        cur = list(Imv)
        H = []
        levels = sorted(set(tw), reverse=True)
        for lv in levels:
            Kn = columns(_level(K, tw, lv))
            ext = _extend(ring, n, cur, Kn)
            for v in ext:
                H.append((v, lv))
            cur += ext
        # complement of the kernel
        Cvecs = []
        for lv in levels:
            Vn = columns(_level(Matrix.identity(ring, n), tw, lv))
            ext = _extend(ring, n, cur, Vn)
            Cvecs.extend(ext)
            cur += ext
        for v, lv in H:
            summands.append(Summand(k, lv))
            vectors.append((len(summands) - 1, k, 0, v))
        next_images = []
        if Cvecs:
            Cb = to_columns(Cvecs, ring, n)
            pairs = _common_adapted(ring, Cb, tw, D, M.obj(k + 1).twists)
            for v, w_src, w_tgt in pairs:
                if w_tgt <= w_src:
                    raise AssertionError("minimal complex produced a unit cone")
                img = [r[0] for r in (D @ to_columns([v], ring, n)).data]
                summands.append(Summand(k, w_src, w_tgt))
                idx = len(summands) - 1
                vectors.append((idx, k, 0, v))
                vectors.append((idx, k + 1, 0, img))
                next_images.append((img, w_tgt))
        # images of the previous degree were registered with their cone summand
        images = next_images

    pieces = [s.complex(ring) for s in summands]
    lay = direct_sum_layout(pieces, ring)
    S = lay.complex
    cols_by_degree = {k: [None] * S.obj(k).rank for k in S.degrees()}
    for idx, k, p, v in vectors:
        cols_by_degree[k][lay.positions[idx][k][p]] = v
    u = {}
    for k in S.degrees():
        U = to_columns(cols_by_degree[k], ring, M.obj(k).rank)
        u[k] = GradedMatrix(S.obj(k), M.obj(k), U)
    fwd = ChainMap(S, M, u)
    if not fwd.is_chain_map():
        raise AssertionError("decomposition basis change is not a chain map")
    bwd = ChainMap(M, S, {k: GradedMatrix(M.obj(k), S.obj(k), inverse(g.mat)) for k, g in u.items()})
    eq = Equivalence(red.backward @ fwd, bwd @ red.forward).certify()
    return Decomposition(summands, S, eq)
