from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fper.exactcore import GF, QQ, ZZ
from fper.filtcat import FiltObject, SeqObject
from fper.homotopy import cone_beta, free
from fper.oracle import random_complex, random_filt_object, random_seq_object
from fper.serialize import Document, ParseError, complex_from_dict, complex_to_dict, complex_to_text, parse, serialize

CB2 = """\
ring Z
# cone of 2β
complex C2B
  term -1 [[0, 1]]
  term 0 [[1, 1]]
  diff -1 [[1, 0, 0, 0, -2]]
end
split U [[0, 1], [3, 2]]
"""


def test_parse_example():
    doc = parse(CB2)
    assert doc.ring == ZZ
    assert doc.get_complex("C2B") == cone_beta(ZZ, 1, 2)
    U = doc.get_complex("U")
    assert U.lo == 0 and U.obj(0).twists == (0, 3, 3)
    with pytest.raises(KeyError):
        doc.get_complex("nope")


def test_rational_coefficients():
    text = "ring Q\ncomplex A\n  term -1 [[0, 1]]\n  term 0 [[0, 1]]\n  diff -1 [[0, 0, 0, 0, \"-3/4\"]]\nend\n"
    A = parse(text).get_complex("A")
    assert A.diff(-1).mat[0, 0] == Fraction(-3, 4)
    assert parse(complex_to_text(A)).get_complex("A") == A


def error_line(text):
    with pytest.raises(ParseError) as e:
        parse(text)
    return e.value.line


def test_errors_carry_line_numbers():
    assert error_line("complex A\nend\n") == 1
    assert error_line("ring Z\nring Q\n") == 2
    assert error_line("ring Z\nbogus x\n") == 2
    neg = "ring Fp:2\ncomplex A\n  term 0 [[1, 1]]\n  term 1 [[0, 1]]\n  diff 0 [[0, 0, 1, 0, 1]]\nend\n"
    assert error_line(neg) == 5
    dd = ("ring Fp:3\ncomplex A\n  term 0 [[0, 1]]\n  term 1 [[0, 1]]\n  term 2 [[0, 1]]\n"
          "  diff 0 [[0, 0, 0, 0, 1]]\n  diff 1 [[0, 0, 0, 0, 1]]\nend\n")
    assert error_line(dd) == 7
    assert error_line("ring Z\ncomplex A\n  term 0 [[0, 1]]\n") == 2
    assert error_line("ring Z\nsplit A [[0, 1]]\nsplit A [[1, 1]]\n") == 3
    assert error_line("ring Fp:4\n") == 1


def test_seq_and_filt_blocks():
    text = "ring Fp:5\nseq S\n  window 0 1\n  dims 1 1\nend\nfilt F\n  window 0 1\n  dims 2 1\n  trans 0 [[1], [0]]\nend\n"
    doc = parse(text)
    S, Fo = doc.seqs["S"], doc.seqs["F"]
    assert type(S) is SeqObject and S.trans[0].is_zero()
    assert isinstance(Fo, FiltObject) and Fo.dims == (2, 1)
    assert parse(serialize(doc)).seqs == doc.seqs
    bad = "ring Fp:5\nfilt F\n  window 0 1\n  dims 1 1\nend\n"
    assert error_line(bad) == 5
    assert error_line("ring Fp:5\nseq S\n  window 0 1\n  dims 1\nend\n") == 5


def test_dict_round_trip():
    for R in (GF(2), QQ, ZZ):
        A = random_complex(R, 7)
        assert complex_from_dict(complex_to_dict(A)) == A
    assert complex_from_dict(complex_to_dict(free(ZZ, 2, 1))) == free(ZZ, 2, 1)


seeds = st.integers(0, 10 ** 6)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([GF(2), GF(7), QQ, ZZ]), seeds)
def test_text_round_trip(R, s):
    A = random_complex(R, s)
    text = complex_to_text(A, "X")
    assert parse(text).get_complex("X") == A
    assert complex_to_text(parse(text).get_complex("X"), "X") == text


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([GF(3), QQ]), seeds)
def test_seq_round_trip(R, s):
    import random
    rng = random.Random(s)
    doc = Document(R, seqs={"a": random_seq_object(R, rng), "b": random_filt_object(R, rng)})
    assert parse(serialize(doc)).seqs == doc.seqs
