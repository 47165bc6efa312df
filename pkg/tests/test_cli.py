import json

import pytest

from fper import homotopy as ht
from fper.cli import main
from fper.exactcore import Matrix
from fper.serialize import parse

F2_FILE = """\
ring Fp:2
complex CB
  term -1 [[0, 1]]
  term 0 [[1, 1]]
  diff -1 [[1, 0, 0, 0, 1]]
end
complex CB2
  term -1 [[0, 1]]
  term 0 [[2, 1]]
  diff -1 [[2, 0, 0, 0, 1]]
end
complex BIG
  term -1 [[0, 2]]
  term 0 [[0, 1], [1, 1]]
  diff -1 [[0, 0, 0, 0, 1], [1, 0, 0, 1, 1]]
end
split U [[0, 1]]
"""

Z_FILE = """\
ring Z
complex C2B
  term -1 [[0, 1]]
  term 0 [[1, 1]]
  diff -1 [[1, 0, 0, 0, -2]]
end
complex CB
  term -1 [[0, 1]]
  term 0 [[1, 1]]
  diff -1 [[1, 0, 0, 0, -1]]
end
complex C2
  term -1 [[0, 1]]
  term 0 [[0, 1]]
  diff -1 [[0, 0, 0, 0, -2]]
end
"""


@pytest.fixture
def files(tmp_path):
    f2, z = tmp_path / "f2.fper", tmp_path / "z.fper"
    f2.write_text(F2_FILE)
    z.write_text(Z_FILE)
    return str(f2), str(z)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_central_ring_table(capsys):
    code, out, _ = run(capsys, "central-ring", "--ring", "Z", "--from", "-2", "--to", "3")
    assert code == 0
    rows = [line.split() for line in out.splitlines()[1:]]
    assert [int(r[1]) for r in rows] == [0, 0, 1, 1, 1, 1]
    assert rows[3][3] == "β^1"
    code, out, _ = run(capsys, "central-ring", "--ring", "Fp:7", "--from", "0", "--to", "1", "--json")
    assert json.loads(out)[1] == {"n": 1, "rank": 1, "torsion": [], "generator": "β^1"}


def test_analyze(files, capsys):
    code, out, _ = run(capsys, "analyze", files[1], "C2B")
    d = json.loads(out)
    assert code == 0 and d["supp_pi"] == [2] and d["supp_gr"] == "All"


def test_member(files, capsys):
    code, out, _ = run(capsys, "member", files[0], "CB2", "CB")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "member"
    assert d["witness"]["cone_steps"] == 1 and d["witness"]["certified"]
    code, out, _ = run(capsys, "member", files[0], "U", "CB", "--oracle")
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "non-member" and d["separating_prime"] == "pi:0"
    assert d["oracle"]["ok"]
    code, out, _ = run(capsys, "member", files[1], "C2B", "CB", "C2")
    d = json.loads(out)
    assert d["verdict"] == "member" and d["witness"]["certified"]
    code, out, _ = run(capsys, "member", files[1], "C2B", "CB")
    assert json.loads(out)["separating_prime"] == "pi:2"


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--ring", "Z", "--primes-up-to", "5")
    d = json.loads(out)
    assert code == 0 and len(d["points"]) == 8 and ["pi:0", "gr:0"] in d["specializations"]
    code, out, _ = run(capsys, "spectrum", "--ring", "Q", "--dot")
    assert out.startswith("digraph") and out.count("->") == 1


def test_minimize_and_decompose(files, capsys):
    code, out, _ = run(capsys, "minimize", files[0], "BIG", "--name", "M")
    assert code == 0 and "certified: true" in out
    M = parse(out).get_complex("M")
    assert M.total_rank == 2
    code, out, _ = run(capsys, "decompose", files[0], "BIG")
    assert code == 0 and "certified: true" in out
    doc = parse(out)
    assert set(doc.complexes) == {"S0"} and "cone(β^1)" in out
    assert doc.complexes["S0"].total_rank == 2


def test_exit_codes(files, tmp_path, capsys):
    assert run(capsys, "analyze", str(tmp_path / "missing.fper"), "A")[0] == 2
    assert run(capsys, "analyze", files[0], "NOPE")[0] == 2
    assert run(capsys, "minimize", files[1], "C2B")[0] == 2
    assert run(capsys, "central-ring", "--ring", "Fp:6", "--from", "0", "--to", "1")[0] == 2
    assert run(capsys, "central-ring", "--ring", "Z", "--from", "3", "--to", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    bad = tmp_path / "bad.fper"
    bad.write_text("ring Z\ncomplex A\n  term 0 [[0, 1]]\n  term 1 [[1, 1]]\n  diff 0 [[0, 0, 1, 0, 1]]\nend\n")
    code, _, err = run(capsys, "analyze", str(bad), "A")
    assert code == 2 and "line 5" in err


def test_verify_passes(capsys):
    code, out, err = run(capsys, "verify", "--suite", "all", "--seed", "3", "--cases", "8")
    d = json.loads(out)
    assert code == 0 and d["passed"] and len(d["suites"]) == 4
    assert err.count("PASS") == 4


def mutant_cone(sign_da, sign_f):
    def cone(f):
        A, B = f.source, f.target
        ring = A.ring
        ks = {k - 1 for k in A.degrees()} | set(B.degrees())
        lo, hi = min(ks), max(ks)
        objs, pa, pb = {}, {}, {}
        for k in range(lo, hi + 1):
            objs[k], (pa[k], pb[k]) = ht.layout([A.obj(k + 1).twists, B.obj(k).twists])
        diffs = []
        for k in range(lo, hi):
            rows = [[ring.zero] * objs[k].rank for _ in range(objs[k + 1].rank)]
            for r_pos, c_pos, m, s in ((pa[k + 1], pa[k], A.diff(k + 1).mat, sign_da),
                                       (pb[k + 1], pa[k], f.at(k + 1).mat, sign_f),
                                       (pb[k + 1], pb[k], B.diff(k).mat, 1)):
                for a, i in enumerate(r_pos):
                    for b, j in enumerate(c_pos):
                        rows[i][j] = ring.reduce(rows[i][j] + s * m[a, b])
            diffs.append(ht.GradedMatrix(objs[k], objs[k + 1], Matrix.from_rows(ring, rows, objs[k].rank)))
        return ht.FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))
    return cone


@pytest.mark.parametrize("signs,checks", [((-1, 1), {"cone convention"}),
                                          ((1, -1), {"cone d∘d = 0", "case generation"})],
                         ids=["f-sign", "dA-sign"])
def test_verify_catches_sign_mutations(monkeypatch, capsys, signs, checks):
    monkeypatch.setattr(ht, "cone", mutant_cone(*signs))
    code, out, err = run(capsys, "verify", "--suite", "homotopy", "--seed", "0", "--cases", "12")
    d = json.loads(out)
    assert code == 1 and not d["passed"] and "FAIL" in err
    failures = d["suites"][0]["failures"]
    assert any(f["check"] in checks for f in failures)
    assert all(f["counterexample"] for f in failures)
