"""Exact linear algebra over Q, F_p and Z.

Scalars are plain Python numbers: ``Fraction`` over Q, ``int`` over Z and
``int`` residues in ``[0, p)`` over F_p.  Matrices are immutable; the
elimination routines copy into lists and work in place on the copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``|n|`` by trial division."""
    n = abs(n)
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class BaseRing:
    kind: str  # "Q", "Fp" or "Z"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Fp", "Z"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if not is_prime(self.p):
                raise ValueError(f"{self.p} is not prime")
            if self.p >= 2**31:
                raise ValueError("F_p is limited to p < 2^31")
        elif self.p != 0:
            raise ValueError("characteristic only applies to F_p")

    @classmethod
    def rationals(cls) -> "BaseRing":
        return cls("Q")

    @classmethod
    def integers(cls) -> "BaseRing":
        return cls("Z")

    @classmethod
    def prime_field(cls, p: int) -> "BaseRing":
        return cls("Fp", p)

    @classmethod
    def parse(cls, text: str) -> "BaseRing":
        text = text.strip()
        if text == "Q":
            return cls.rationals()
        if text == "Z":
            return cls.integers()
        if text.startswith("Fp:"):
            return cls.prime_field(int(text[3:]))
        if text.startswith("F") and text[1:].isdigit():
            return cls.prime_field(int(text[1:]))
        raise ValueError(f"cannot parse ring {text!r}")

    @property
    def name(self) -> str:
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    def __str__(self):
        return self.name

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def coerce(self, x):
        """Canonical representative of ``x`` (int, Fraction or "a/b" string)."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.kind == "Q":
            return Fraction(x)
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        # cheap canonicalisation after ring arithmetic on canonical values
        return x % self.p if self.kind == "Fp" else x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def fraction_field(self) -> "BaseRing":
        return BaseRing.rationals() if self.kind == "Z" else self

    def residue_field(self, prime: int) -> "BaseRing":
        """Residue field at a prime of the base ring; 0 is the generic point."""
        if self.kind == "Z":
            return BaseRing.rationals() if prime == 0 else BaseRing.prime_field(prime)
        if prime != 0:
            raise ValueError(f"{self} has only the generic prime")
        return self

    def primes(self, up_to: int) -> list[int]:
        """Closed points of Spec of the ring up to a bound (empty for fields)."""
        if self.is_field:
            return []
        return [q for q in range(2, up_to + 1) if is_prime(q)]


QQ = BaseRing.rationals()
ZZ = BaseRing.integers()


def GF(p: int) -> BaseRing:
    return BaseRing.prime_field(p)


@dataclass(frozen=True)
class Matrix:
    ring: BaseRing
    rows: int
    cols: int
    data: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, ring: BaseRing, rows: Sequence[Sequence], cols: Optional[int] = None):
        rows = [tuple(ring.coerce(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, tuple(rows))

    @classmethod
    def _raw(cls, ring, rows, cols, data):
        # data already canonical
        return cls(ring, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def zeros(cls, ring: BaseRing, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: BaseRing, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, ring: BaseRing, values: Sequence, rows=None, cols=None) -> "Matrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[ring.zero] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = ring.coerce(v)
        return cls._raw(ring, rows, cols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[red(a + b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols,
                           [[red(a - b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, [[red(-a) for a in r] for r in self.data])

    def scale(self, c) -> "Matrix":
        c = self.ring.coerce(c)
        red = self.ring.reduce
        return Matrix._raw(self.ring, self.rows, self.cols, [[red(c * a) for a in r] for r in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ring != other.ring:
            raise ValueError("ring mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        red = self.ring.reduce
        zero = self.ring.zero
        cols_t = list(zip(*other.data)) if other.rows else [() for _ in range(other.cols)]
        out = []
        for r in self.data:
            nz = [(k, a) for k, a in enumerate(r) if a != 0]
            row = []
            for c in cols_t:
                s = zero
                for k, a in nz:
                    b = c[k]
                    if b != 0:
                        s += a * b
                row.append(red(s))
            out.append(row)
        return Matrix._raw(self.ring, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        return Matrix._raw(self.ring, self.cols, self.rows, [list(c) for c in zip(*self.data)]
                           if self.rows else [[] for _ in range(self.cols)])

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, len(rows), len(cols), [[self.data[i][j] for j in cols] for i in rows])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return Matrix._raw(self.ring, self.rows, self.cols + other.cols,
                           [list(r) + list(s) for r, s in zip(self.data, other.data)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column count mismatch")
        return Matrix(self.ring, self.rows + other.rows, self.cols, self.data + other.data)

    def change_ring(self, ring: BaseRing) -> "Matrix":
        """Image under the canonical map Z -> Q, Z -> F_p or identity."""
        return Matrix._raw(ring, self.rows, self.cols, [[ring.coerce(a) for a in r] for r in self.data])

    def _check_same(self, other):
        if self.ring != other.ring or self.shape != other.shape:
            raise ValueError("ring or shape mismatch")

    def __repr__(self):
        return f"Matrix({self.ring.name}, {self.tolist()})"


@dataclass(frozen=True)
class SmithForm:
    d: tuple
    U: Matrix
    V: Matrix


@dataclass(frozen=True)
class HomologySummary:
    """Per degree: (free rank, torsion invariant factors)."""
    groups: dict

    def rank(self, degree: int) -> int:
        return self.groups.get(degree, (0, ()))[0]

    def torsion(self, degree: int) -> tuple:
        return self.groups.get(degree, (0, ()))[1]

    def is_zero(self) -> bool:
        return all(r == 0 and not t for r, t in self.groups.values())

    def total_rank(self) -> int:
        return sum(r for r, _ in self.groups.values())

    def torsion_primes(self) -> set[int]:
        return {q for _, t in self.groups.values() for f in t for q in prime_factors(f)}

    def nonzero(self) -> dict:
        return {k: v for k, v in self.groups.items() if v[0] or v[1]}


def _echelon(rows: list[list], ring: BaseRing, ncols: int):
    """Reduced row echelon form in place over a field; returns pivot columns."""
    red = ring.reduce
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inv(rows[r][c])
        rows[r] = [red(x * inv) for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [red(x - f * y) for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    if not m.ring.is_field:
        raise ValueError("rref needs a field")
    rows = m.tolist()
    piv = _echelon(rows, m.ring, m.cols)
    return Matrix._raw(m.ring, m.rows, m.cols, rows), piv


def rank(m: Matrix) -> int:
    """Rank over the fraction field of the base ring."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if not m.ring.is_field:
        m = m.change_ring(QQ)
    return len(_echelon(m.tolist(), m.ring, m.cols))


def nullspace(m: Matrix) -> Matrix:
    """Columns spanning the kernel; a lattice basis over Z."""
    ring = m.ring
    if not ring.is_field:
        sf = smith(m)
        r = len(sf.d)
        return sf.V.submatrix(range(m.cols), range(r, m.cols))
    rows = m.tolist()
    piv = _echelon(rows, ring, m.cols)
    free = [c for c in range(m.cols) if c not in piv]
    basis = []
    for f in free:
        v = [ring.zero] * m.cols
        v[f] = ring.one
        for i, pc in enumerate(piv):
            v[pc] = ring.reduce(-rows[i][f])
        basis.append(v)
    return Matrix._raw(ring, m.cols, len(basis), [list(r) for r in zip(*basis)] if basis
                       else [[] for _ in range(m.cols)])


def column_basis(m: Matrix) -> Matrix:
    """A subset of the columns of ``m`` forming a basis of its column space (fields)."""
    _, piv = rref(m)
    return m.submatrix(range(m.rows), piv)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("not square")
    x = solve(m, Matrix.identity(m.ring, m.rows))
    if x is None or (m.ring.is_field and rank(m) < m.rows):
        raise ZeroDivisionError("matrix is not invertible")
    return x


def smith(m: Matrix) -> SmithForm:
    """Smith normal form ``U m V = diag(d)`` over Z with minimal-pivot reduction."""
    if m.ring.kind != "Z":
        raise ValueError("smith() requires the integers")
    nr, nc = m.rows, m.cols
    A = m.tolist()
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in A:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    t = 0
    d = []
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                x = A[i][j]
                if x != 0 and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            for i in range(t + 1, nr):
                if A[i][t] != 0:
                    add_row(i, t, A[i][t] // p)
            for j in range(t + 1, nc):
                if A[t][j] != 0:
                    add_col(j, t, A[t][j] // p)
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, nr) if A[i][t] != 0]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, nc) if A[t][j] != 0]
            if rest:
                _, i, j = min(rest)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if A[i][j] % p != 0), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        d.append(A[t][t])
        t += 1
    return SmithForm(tuple(d), Matrix._raw(ZZ, nr, nr, U), Matrix._raw(ZZ, nc, nc, V))


def invariant_factors(m: Matrix) -> tuple:
    return smith(m).d


def solve(m: Matrix, b: Matrix) -> Optional[Matrix]:
    """Some ``x`` with ``m @ x == b`` over the base ring, or None."""
    if m.rows != b.rows:
        raise ValueError(f"shape mismatch {m.shape} vs {b.shape}")
    if m.ring != b.ring:
        raise ValueError("ring mismatch")
    ring = m.ring
    if ring.is_field:
        aug = [list(r) + list(s) for r, s in zip(m.data, b.data)]
        piv = _echelon(aug, ring, m.cols + b.cols)
        if any(c >= m.cols for c in piv):
            return None
        x = [[ring.zero] * b.cols for _ in range(m.cols)]
        for i, pc in enumerate(piv):
            x[pc] = aug[i][m.cols:]
        return Matrix._raw(ring, m.cols, b.cols, x)
    sf = smith(m)
    c = (sf.U @ b).tolist()
    r = len(sf.d)
    y = [[0] * b.cols for _ in range(m.cols)]
    for i in range(m.rows):
        for k in range(b.cols):
            if i < r:
                q, rem = divmod(c[i][k], sf.d[i])
                if rem:
                    return None
                y[i][k] = q
            elif c[i][k] != 0:
                return None
    return sf.V @ Matrix._raw(ZZ, m.cols, b.cols, y)


@dataclass(frozen=True)
class FreeComplex:
    """Bounded cochain complex of free modules ``R^dims[i]`` in degrees lo, lo+1, ...

    ``diffs[i]`` is the matrix of d: C^{lo+i} -> C^{lo+i+1}.
    """
    ring: BaseRing
    lo: int
    dims: tuple
    diffs: tuple

    def __post_init__(self):
        if len(self.diffs) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential between consecutive terms")
        for i, d in enumerate(self.diffs):
            if d.shape != (self.dims[i + 1], self.dims[i]) or d.ring != self.ring:
                raise ValueError(f"differential {self.lo + i} has the wrong shape or ring")
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise ValueError(f"d∘d != 0 at degree {self.lo + i}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.lo, self.lo + len(self.dims))

    def dim(self, k: int) -> int:
        i = k - self.lo
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def diff(self, k: int) -> Matrix:
        i = k - self.lo
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return Matrix.zeros(self.ring, self.dim(k + 1), self.dim(k))

    def homology(self) -> HomologySummary:
        return homology(list(self.diffs), dims=list(self.dims), lo=self.lo)

    def is_acyclic(self) -> bool:
        return self.homology().is_zero()

    def change_ring(self, ring: BaseRing) -> "FreeComplex":
        return FreeComplex(ring, self.lo, self.dims, tuple(d.change_ring(ring) for d in self.diffs))

    def tensor(self, other: "FreeComplex") -> "FreeComplex":
        """Tensor product with the Koszul sign on the second factor."""
        if not self.dims or not other.dims:
            return FreeComplex(self.ring, 0, (), ())
        lo = self.lo + other.lo
        hi = self.hi + other.hi
        offsets = {}
        dims = []
        for k in range(lo, hi + 1):
            off, pos = {}, 0
            for i in self.degrees():
                j = k - i
                if other.lo <= j <= other.hi:
                    off[i] = pos
                    pos += self.dim(i) * other.dim(j)
            offsets[k] = off
            dims.append(pos)
        diffs = []
        ring = self.ring
        for k in range(lo, hi):
            out = [[ring.zero] * dims[k - lo] for _ in range(dims[k + 1 - lo])]
            for i, so in offsets[k].items():
                j = k - i
                na, nb = self.dim(i), other.dim(j)
                if i + 1 in offsets[k + 1]:
                    da = self.diff(i)
                    to = offsets[k + 1][i + 1]
                    for a2 in range(self.dim(i + 1)):
                        for a in range(na):
                            c = da[a2, a]
                            if c:
                                for b in range(nb):
                                    out[to + a2 * nb + b][so + a * nb + b] = c
                if i in offsets[k + 1] and other.lo <= j + 1 <= other.hi:
                    db = other.diff(j)
                    to = offsets[k + 1][i]
                    nb2 = other.dim(j + 1)
                    sign = -1 if i % 2 else 1
                    for a in range(na):
                        for b2 in range(nb2):
                            for b in range(nb):
                                c = db[b2, b]
                                if c:
                                    out[to + a * nb2 + b2][so + a * nb + b] = ring.reduce(
                                        out[to + a * nb2 + b2][so + a * nb + b] + sign * c)
            diffs.append(Matrix._raw(ring, dims[k + 1 - lo], dims[k - lo], out))
        return FreeComplex(ring, lo, tuple(dims), tuple(diffs))


def homology(diffs: Sequence[Matrix], dims: Optional[Sequence[int]] = None, lo: int = 0) -> HomologySummary:
    """Free rank and torsion of each cohomology group of a complex of free modules.

    ``diffs[i]`` maps degree ``lo+i`` to ``lo+i+1``.  ``dims`` is only needed
    when there are no differentials to read the ranks from.
    """
    diffs = list(diffs)
    if dims is None:
        if not diffs:
            raise ValueError("dims are required when there are no differentials")
        dims = [diffs[0].cols] + [d.rows for d in diffs]
    dims = list(dims)
    if len(diffs) != max(len(dims) - 1, 0):
        raise ValueError("need one differential between consecutive terms")
    for i in range(len(diffs) - 1):
        if not (diffs[i + 1] @ diffs[i]).is_zero():
            raise ValueError(f"d∘d != 0 at degree {lo + i}")
    over_z = bool(diffs) and not diffs[0].ring.is_field
    ranks = []
    tors = []
    for d in diffs:
        if over_z:
            f = smith(d).d
            ranks.append(len(f))
            tors.append(tuple(x for x in f if x > 1))
        else:
            ranks.append(rank(d))
            tors.append(())
    groups = {}
    for i, n in enumerate(dims):
        out_rank = ranks[i] if i < len(diffs) else 0
        in_rank = ranks[i - 1] if i > 0 else 0
        groups[lo + i] = (n - out_rank - in_rank, tors[i - 1] if i > 0 else ())
    return HomologySummary(groups)


def block_matrix(ring: BaseRing, blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    out = None
    for brow in blocks:
        row = brow[0]
        for b in brow[1:]:
            row = row.hstack(b)
        out = row if out is None else out.vstack(row)
    return out


def to_columns(vectors: Iterable[Sequence], ring: BaseRing, n: int) -> Matrix:
    vectors = [list(v) for v in vectors]
    if not vectors:
        return Matrix.zeros(ring, n, 0)
    return Matrix._raw(ring, n, len(vectors), [list(r) for r in zip(*vectors)])


def columns(m: Matrix) -> list[list]:
    return [list(c) for c in zip(*m.data)] if m.rows else [[] for _ in range(m.cols)]


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; basis ``e_i ⊗ f_j`` ordered with ``j`` fastest."""
    if a.ring != b.ring:
        raise ValueError("ring mismatch")
    red = a.ring.reduce
    rows = [[red(x * y) for x in ra for y in rb] for ra in a.data for rb in b.data]
    return Matrix._raw(a.ring, a.rows * b.rows, a.cols * b.cols, rows)


def left_kernel(m: Matrix) -> Matrix:
    """Rows ``P`` with ``P m = 0`` and ``rank P = rows - rank m``: the cokernel projection."""
    return nullspace(m.transpose()).transpose() if m.rows else Matrix.zeros(m.ring, 0, 0)
