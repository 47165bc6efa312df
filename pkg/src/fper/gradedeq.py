"""Presheaves on Z as graded R[β]-modules, with β of degree −1.

A sequence ``a`` becomes the module ``⊕ a_n`` on which β acts by the
transitions ``a_n → a_{n-1}``.  Both sides use the same window and the same
stability convention below ``lo``, so the translation is a reindexing and
round trips are exact on presentations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fper.exactcore import BaseRing, Matrix, kron, left_kernel, rank, solve
from fper.filtcat import SeqObject


@dataclass(frozen=True)
class GradedBetaModule:
    ring: BaseRing
    lo: int
    dims: tuple                     # M_n for n in [lo, hi]
    action: tuple = field(default=())  # action[i] = β: M_{lo+i+1} → M_{lo+i}

    def __post_init__(self):
        if len(self.action) != len(self.dims) - 1:
            raise ValueError("need one β-action per pair of adjacent degrees")
        for i, b in enumerate(self.action):
            if b.shape != (self.dims[i], self.dims[i + 1]):
                raise ValueError(f"β on degree {self.lo + i + 1} has the wrong shape")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def component(self, n: int) -> int:
        if n < self.lo:
            return self.dims[0]
        return self.dims[n - self.lo] if n <= self.hi else 0

    def beta(self, n: int) -> Matrix:
        """β: M_n → M_{n-1}; the identity below the window."""
        if n <= self.lo:
            return Matrix.identity(self.ring, self.dims[0])
        if n <= self.hi:
            return self.action[n - self.lo - 1]
        return Matrix.zeros(self.ring, self.component(n - 1), 0)

    def graded_dims(self, lo: int, hi: int) -> dict:
        return {n: self.component(n) for n in range(lo, hi + 1) if self.component(n)}


def seq_to_graded(a: SeqObject) -> GradedBetaModule:
    return GradedBetaModule(a.ring, a.lo, a.dims, a.trans)


def graded_to_seq(m: GradedBetaModule) -> SeqObject:
    return SeqObject(m.ring, m.lo, m.dims, m.action)


def free_graded(ring: BaseRing, degree: int) -> GradedBetaModule:
    """``R[β]·e`` with ``e`` in degree ``d``: ``R`` in every degree ``≤ d``."""
    return GradedBetaModule(ring, degree, (1,))


def _quotient_levels(ring, lo, hi, comp, act_left, act_right, lo_a, hi_a, hi_b):
    """Levels ``n ∈ [lo, hi]`` of ``⊕_{p+q=n} A_p ⊗ B_q`` modulo ``βx⊗y − x⊗βy``.

    ``comp(p, q)`` gives the dimensions of the two factors; ``act_left(p)`` is
    β on A from degree p, ``act_right(q)`` on B from degree q.  Only ``p`` in
    ``[n - hi_b, hi_a]`` contributes.
    """
    out = {}
    for n in range(lo, hi + 1):
        ps = list(range(n - hi_b, hi_a + 1))
        offs, N = {}, 0
        for p in ps:
            da, db = comp(p, n - p)
            offs[p] = N
            N += da * db
        rel_cols = []
        for p in range(n + 1 - hi_b, hi_a + 1):
            q = n + 1 - p
            da, db = comp(p, q)
            if da * db == 0:
                continue
            # x ⊗ y ∈ A_p ⊗ B_q: (βx) ⊗ y lives at (p-1, q), x ⊗ (βy) at (p, q-1)
            L = kron(act_left(p), Matrix.identity(ring, db))
            R = kron(Matrix.identity(ring, da), act_right(q))
            block = Matrix.zeros(ring, N, da * db)
            rows = [list(r) for r in block.data]
            if p - 1 in offs:
                for i in range(L.rows):
                    for j in range(L.cols):
                        rows[offs[p - 1] + i][j] = ring.reduce(rows[offs[p - 1] + i][j] + L[i, j])
            if p in offs:
                for i in range(R.rows):
                    for j in range(R.cols):
                        rows[offs[p] + i][j] = ring.reduce(rows[offs[p] + i][j] - R[i, j])
            rel_cols.append(Matrix.from_rows(ring, rows, da * db))
        rel = None
        for c in rel_cols:
            rel = c if rel is None else rel.hstack(c)
        r = rank(rel) if rel is not None and N else 0
        out[n] = N - r
    return out


def graded_tensor_dims(m: GradedBetaModule, n_: GradedBetaModule) -> dict:
    """Graded dimensions of ``M ⊗_{R[β]} N`` over the combined window."""
    ring = m.ring
    lo, hi = m.lo + n_.lo, m.hi + n_.hi
    dims = _quotient_levels(ring, lo, hi, lambda p, q: (m.component(p), n_.component(q)),
                            m.beta, n_.beta, m.lo, m.hi, n_.hi)
    return {k: v for k, v in dims.items() if v}


def day_convolution(a: SeqObject, b: SeqObject) -> SeqObject:
    """``(a ⊠ b)_n = colim_{p+q ≥ n} a_p ⊗ b_q`` before reflection.

    The colimit over ``p + q ≥ n`` is the coequalizer of the antidiagonal
    ``p + q = n`` by the two ways of moving down from ``p + q = n + 1``.
    """
    ring = a.ring
    lo, hi = a.lo + b.lo, a.hi + b.hi

    def level(n):
        ps = [p for p in range(n - b.hi, a.hi + 1)]
        offs, N = {}, 0
        for p in ps:
            offs[p] = N
            N += a.dim(p) * b.dim(n - p)
        rel = None
        for p in range(n + 1 - b.hi, a.hi + 1):
            q = n + 1 - p
            da, db = a.dim(p), b.dim(q)
            if da * db == 0:
                continue
            col = Matrix.zeros(ring, N, da * db)
            if p - 1 in offs:
                col = col + _place_rows(kron(a.t(p - 1), Matrix.identity(ring, db)), offs[p - 1], N)
            if p in offs:
                col = col - _place_rows(kron(Matrix.identity(ring, da), b.t(q - 1)), offs[p], N)
            rel = col if rel is None else rel.hstack(col)
        P = left_kernel(rel) if rel is not None and N else Matrix.identity(ring, N)
        return offs, N, P

    levels = {n: level(n) for n in range(lo, hi + 1)}
    dims = tuple(levels[n][2].rows for n in range(lo, hi + 1))
    trans = []
    for n in range(lo, hi):
        offs1, N1, P1 = levels[n + 1]
        offs0, N0, P0 = levels[n]
        # a_p ⊗ b_q at level n+1 moves to (p-1, q); p-1 ≥ n - b.hi always
        M = Matrix.zeros(ring, N0, N1)
        for p, o in offs1.items():
            q = n + 1 - p
            da, db = a.dim(p), b.dim(q)
            if da * db == 0:
                continue
            blk = kron(a.t(p - 1), Matrix.identity(ring, db))
            M = M + _place(blk, offs0[p - 1], o, N0, N1)
        S = solve(P1, Matrix.identity(ring, P1.rows)) if P1.rows else Matrix.zeros(ring, N1, 0)
        trans.append(P0 @ M @ S)
    return SeqObject(ring, lo, dims, tuple(trans))


def _place_rows(blk: Matrix, row0: int, N: int) -> Matrix:
    return _place(blk, row0, 0, N, blk.cols)


def _place(blk: Matrix, row0: int, col0: int, R: int, C: int) -> Matrix:
    rows = [[blk.ring.zero] * C for _ in range(R)]
    for i in range(blk.rows):
        for j in range(blk.cols):
            rows[row0 + i][col0 + j] = blk[i, j]
    return Matrix.from_rows(blk.ring, rows, C)
