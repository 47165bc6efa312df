"""The plain-text object file format.

::

    # comment
    ring Z
    split P [[0, 1], [1, 1]]
    complex C
      term -1 [[0, 1]]
      term 0 P
      diff -1 [[1, 0, 0, 0, -1]]
    end
    filt F
      window 0 1
      dims 2 1
      trans 0 [[1], [0]]
    end

A differential entry ``[row twist, row, col twist, col, coefficient]``
addresses row ``row`` of the target's ``R(row twist)`` block and column
``col`` of the source's ``R(col twist)`` block; its β-exponent is
``row twist - col twist``.  Rational coefficients are written ``"a/b"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from fper.exactcore import BaseRing, Matrix
from fper.filtcat import FiltObject, SeqObject
from fper.homotopy import ChainMap, FiltComplex, GradedMatrix, SplitObject


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass
class Document:
    ring: BaseRing
    splits: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    seqs: dict = field(default_factory=dict)

    def get_complex(self, name: str) -> FiltComplex:
        if name in self.complexes:
            return self.complexes[name]
        if name in self.splits:
            return FiltComplex(self.ring, 0, (self.splits[name],))
        raise KeyError(f"no complex named {name!r}")


# --- scalars and blocks ------------------------------------------------------

def scalar_out(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return int(x)


def _block_offsets(obj: SplitObject) -> dict:
    offs, n = {}, 0
    for t, r in obj.summands:
        offs[t] = n
        n += r
    return offs


def matrix_entries(g: GradedMatrix) -> list:
    ts, tt = g.source.twists, g.target.twists
    so, to = _block_offsets(g.source), _block_offsets(g.target)
    out = []
    for i, row in enumerate(g.mat.data):
        for j, c in enumerate(row):
            if c != 0:
                out.append([tt[i], i - to[tt[i]], ts[j], j - so[ts[j]], scalar_out(c)])
    return out


def matrix_from_entries(ring: BaseRing, source: SplitObject, target: SplitObject, entries) -> GradedMatrix:
    so, to = _block_offsets(source), _block_offsets(target)
    sr, tr = dict(source.summands), dict(target.summands)
    acc = {}
    for e in entries:
        if not isinstance(e, list) or len(e) != 5:
            raise ValueError(f"entry {e!r} is not [row twist, row, col twist, col, coefficient]")
        rt, r, ct, c, coef = e
        if rt not in tr or not 0 <= r < tr[rt]:
            raise ValueError(f"row {r} of block R({rt}) does not exist in the target {target!r}")
        if ct not in sr or not 0 <= c < sr[ct]:
            raise ValueError(f"column {c} of block R({ct}) does not exist in the source {source!r}")
        if rt < ct:
            raise ValueError(f"entry {e!r} needs negative β-exponent {rt - ct}")
        key = (to[rt] + r, so[ct] + c)
        acc[key] = ring.reduce(acc.get(key, ring.zero) + ring.coerce(coef))
    return GradedMatrix.from_entries(ring, source, target, [(i, j, v) for (i, j), v in acc.items()])


def split_to_list(obj: SplitObject) -> list:
    return [[t, r] for t, r in obj.summands]


def split_from_list(data) -> SplitObject:
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise ValueError("a split object is a list of [twist, rank] pairs")
    for t, r in data:
        if not isinstance(t, int) or not isinstance(r, int) or r < 1:
            raise ValueError("twists are integers and ranks are positive integers")
    return SplitObject(tuple((t, r) for t, r in data))


# --- JSON views (witness traces, reports) ------------------------------------------

def complex_to_dict(A: FiltComplex) -> dict:
    return {
        "ring": A.ring.name,
        "lo": A.lo,
        "terms": [split_to_list(A.obj(k)) for k in A.degrees()],
        "diffs": {str(k): matrix_entries(A.diff(k)) for k in range(A.lo, A.hi) if not A.diff(k).is_zero()},
    }


def complex_from_dict(d: dict) -> FiltComplex:
    ring = BaseRing.parse(d["ring"])
    lo = d["lo"]
    objs = [split_from_list(t) for t in d["terms"]]
    diffs = []
    for i in range(len(objs) - 1):
        diffs.append(matrix_from_entries(ring, objs[i], objs[i + 1], d["diffs"].get(str(lo + i), [])))
    return FiltComplex(ring, lo, tuple(objs), tuple(diffs))


def chain_map_to_dict(f: ChainMap) -> dict:
    return {str(k): matrix_entries(g) for k, g in sorted(f.maps.items()) if not g.is_zero()}


# --- text format ---------------------------------------------------------------

def _json(text: str, line: int):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(line, f"malformed list: {e.msg}") from None


def _int(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(line, f"expected an integer, got {text!r}") from None


def parse(text: str) -> Document:
    doc: Optional[Document] = None
    lines = text.splitlines()
    i = 0

    def need_doc(ln):
        if doc is None:
            raise ParseError(ln, "the file must start with a 'ring' line")
        return doc

    while i < len(lines):
        ln = i + 1
        raw = lines[i].split("#", 1)[0].strip()
        i += 1
        if not raw:
            continue
        head, _, rest = raw.partition(" ")
        rest = rest.strip()
        if head == "ring":
            if doc is not None:
                raise ParseError(ln, "ring declared twice")
            try:
                doc = Document(BaseRing.parse(rest))
            except ValueError as e:
                raise ParseError(ln, str(e)) from None
        elif head == "split":
            d = need_doc(ln)
            name, _, body = rest.partition(" ")
            _check_name(d, name, ln)
            try:
                d.splits[name] = split_from_list(_json(body, ln))
            except ValueError as e:
                if isinstance(e, ParseError):
                    raise
                raise ParseError(ln, str(e)) from None
        elif head in ("complex", "seq", "filt"):
            d = need_doc(ln)
            name = rest
            _check_name(d, name, ln)
            block = []
            while True:
                if i >= len(lines):
                    raise ParseError(ln, f"{head} {name!r} is missing 'end'")
                body = lines[i].split("#", 1)[0].strip()
                i += 1
                if body == "end":
                    end_line = i
                    break
                if body:
                    block.append((i, body))
            if head == "complex":
                d.complexes[name] = _parse_complex(d, name, block, end_line)
            else:
                d.seqs[name] = _parse_seq(d, head, name, block, end_line)
        else:
            raise ParseError(ln, f"unknown keyword {head!r}")
    if doc is None:
        raise ParseError(max(len(lines), 1), "no 'ring' line")
    return doc


def _check_name(doc: Document, name: str, ln: int):
    if not name or not name.replace("_", "a").replace("-", "a").isalnum():
        raise ParseError(ln, f"bad object name {name!r}")
    if name in doc.splits or name in doc.complexes or name in doc.seqs:
        raise ParseError(ln, f"duplicate name {name!r}")


def _parse_complex(doc: Document, name: str, block, end_line: int) -> FiltComplex:
    ring = doc.ring
    terms, diffs = {}, {}
    for ln, body in block:
        kw, _, rest = body.partition(" ")
        deg_s, _, payload = rest.strip().partition(" ")
        deg = _int(deg_s, ln)
        payload = payload.strip()
        if kw == "term":
            if deg in terms:
                raise ParseError(ln, f"term in degree {deg} given twice")
            if payload in doc.splits:
                terms[deg] = (doc.splits[payload], ln)
            else:
                try:
                    terms[deg] = (split_from_list(_json(payload, ln)), ln)
                except ParseError:
                    raise
                except ValueError as e:
                    raise ParseError(ln, str(e)) from None
        elif kw == "diff":
            if deg in diffs:
                raise ParseError(ln, f"differential in degree {deg} given twice")
            diffs[deg] = (_json(payload, ln), ln)
        else:
            raise ParseError(ln, f"unknown complex line {kw!r}")
    if not terms:
        return FiltComplex.zero(ring)
    lo, hi = min(terms), max(terms)
    objs = {k: terms.get(k, (SplitObject(), end_line))[0] for k in range(lo, hi + 1)}
    mats = {}
    for k, (entries, ln) in diffs.items():
        if not lo <= k < hi:
            raise ParseError(ln, f"differential in degree {k} leaves the term window [{lo}, {hi}]")
        try:
            mats[k] = matrix_from_entries(ring, objs[k], objs[k + 1], entries)
        except ValueError as e:
            raise ParseError(ln, str(e)) from None
    for k in range(lo, hi):
        mats.setdefault(k, GradedMatrix.zero(ring, objs[k], objs[k + 1]))
    for k in range(lo, hi - 1):
        if not (mats[k + 1] @ mats[k]).is_zero():
            ln = diffs.get(k + 1, diffs.get(k, (None, end_line)))[1]
            raise ParseError(ln, f"d∘d != 0 at degree {k} in complex {name!r}")
    return FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)),
                       tuple(mats[k] for k in range(lo, hi)))


def _parse_seq(doc: Document, kind: str, name: str, block, end_line: int) -> SeqObject:
    ring = doc.ring
    window = dims = None
    trans = {}
    for ln, body in block:
        kw, _, rest = body.partition(" ")
        parts = rest.split()
        if kw == "window":
            if len(parts) != 2:
                raise ParseError(ln, "window needs two integers")
            window = (_int(parts[0], ln), _int(parts[1], ln))
            if window[0] > window[1]:
                raise ParseError(ln, "window needs lo <= hi")
        elif kw == "dims":
            dims = tuple(_int(p, ln) for p in parts)
            if any(d < 0 for d in dims):
                raise ParseError(ln, "dimensions are nonnegative")
        elif kw == "trans":
            n_s, _, payload = rest.strip().partition(" ")
            trans[_int(n_s, ln)] = (_json(payload, ln), ln)
        else:
            raise ParseError(ln, f"unknown {kind} line {kw!r}")
    if window is None or dims is None:
        raise ParseError(end_line, f"{kind} {name!r} needs 'window' and 'dims'")
    lo, hi = window
    if len(dims) != hi - lo + 1:
        raise ParseError(end_line, f"{kind} {name!r}: {len(dims)} dims for a window of {hi - lo + 1} levels")
    mats = []
    for n in range(lo, hi):
        r, c = dims[n - lo], dims[n - lo + 1]
        if n in trans:
            rows, ln = trans[n]
            try:
                m = Matrix.from_rows(ring, [[ring.coerce(x) for x in row] for row in rows], c) if r else \
                    Matrix.zeros(ring, 0, c)
            except (ValueError, TypeError) as e:
                raise ParseError(ln, f"bad transition matrix: {e}") from None
            if m.shape != (r, c):
                raise ParseError(ln, f"transition at level {n} must be {r}×{c}")
        else:
            m = Matrix.zeros(ring, r, c)
        mats.append(m)
    try:
        obj = SeqObject(ring, lo, dims, tuple(mats))
        return FiltObject.of(obj) if kind == "filt" else obj
    except ValueError as e:
        raise ParseError(end_line, f"{kind} {name!r}: {e}") from None


def serialize(doc: Document) -> str:
    out = [f"ring {doc.ring.name}"]
    for name, obj in doc.splits.items():
        out.append(f"split {name} {json.dumps(split_to_list(obj))}")
    for name, A in doc.complexes.items():
        out.extend(complex_lines(name, A))
    for name, a in doc.seqs.items():
        kind = "filt" if isinstance(a, FiltObject) else "seq"
        out.append(f"{kind} {name}")
        out.append(f"  window {a.lo} {a.hi}")
        out.append("  dims " + " ".join(str(d) for d in a.dims))
        for i, t in enumerate(a.trans):
            if not t.is_zero():
                out.append(f"  trans {a.lo + i} {json.dumps([[scalar_out(x) for x in r] for r in t.data])}")
        out.append("end")
    return "\n".join(out) + "\n"


def complex_lines(name: str, A: FiltComplex) -> list[str]:
    out = [f"complex {name}"]
    for k in A.degrees():
        out.append(f"  term {k} {json.dumps(split_to_list(A.obj(k)))}")
    for k in range(A.lo, A.hi):
        if not A.diff(k).is_zero():
            out.append(f"  diff {k} {json.dumps(matrix_entries(A.diff(k)))}")
    out.append("end")
    return out


def complex_to_text(A: FiltComplex, name: str = "A") -> str:
    return serialize(Document(A.ring, complexes={name: A}))
