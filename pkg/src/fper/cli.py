"""Command-line entry point ``fper``.

Exit codes: 0 success, 1 mathematical failure (a conflict or a
counterexample), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from fper import homotopy as ht
from fper import oracle
from fper import spectrum as sp
from fper.exactcore import BaseRing
from fper.serialize import Document, ParseError, complex_lines, parse

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load(path: str) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return parse(text)
    except ParseError as e:
        raise InputError(f"{path}: {e}") from None


def _complex(doc: Document, name: str) -> ht.FiltComplex:
    try:
        return doc.get_complex(name)
    except KeyError:
        raise InputError(f"no complex or split object named {name!r}") from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))


def cmd_analyze(args) -> int:
    doc = _load(args.file)
    _emit(sp.support_report(_complex(doc, args.object)).to_dict())
    return EXIT_OK


def cmd_member(args) -> int:
    doc = _load(args.file)
    target = _complex(doc, args.target)
    gens = tuple(_complex(doc, g) for g in args.generators)
    decision = sp.in_ideal(target, gens)
    out = {"target": args.target, "generators": list(args.generators),
           "verdict": "member" if decision else "non-member",
           "signature": {"target": repr(sp.signature(target)), "ideal": repr(sp.ideal_signature(gens))}}
    code = EXIT_OK
    if decision:
        w = oracle.find_witness(target, gens)
        out["witness"] = None if w is None else {"cone_steps": w.cone_steps, "certified": w.verify(),
                                                 "trace": w.to_dict()["steps"]}
        out["separating_prime"] = None
    else:
        P = sp.separate(target, gens)
        out["separating_prime"] = P.name
        out["witness"] = None
    if args.oracle:
        res = oracle.check_query(oracle.Query(args.target, target, gens, "random"))
        out["oracle"] = {"conflicts": res.conflicts, "ok": res.ok}
        if not res.ok:
            code = EXIT_FAIL
    if out.get("witness") and not out["witness"]["certified"]:
        code = EXIT_FAIL
    _emit(out)
    return code


def cmd_central_ring(args) -> int:
    ring = _ring(args.ring)
    if args.lo > args.hi:
        raise InputError("--from must not exceed --to")
    slices = ht.graded_central_ring(ring, args.lo, args.hi)
    if args.json:
        _emit([{"n": s.n, "rank": s.rank, "torsion": list(s.torsion),
                "generator": f"β^{s.n}" if s.rank else None} for s in slices])
        return EXIT_OK
    print(f"{'n':>4}  rank  torsion  generator")
    for s in slices:
        gen = f"β^{s.n}" if s.rank else "-"
        tors = ",".join(map(str, s.torsion)) or "-"
        print(f"{s.n:>4}  {s.rank:>4}  {tors:>7}  {gen}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    ring = _ring(args.ring)
    if args.dot:
        sys.stdout.write(sp.emit_spectrum(ring, args.primes_up_to))
        return EXIT_OK
    pts = sp.spectrum_points(ring, args.primes_up_to)
    _emit({"ring": ring.name, "points": [p.name for p in pts],
           "specializations": [[p.name, q.name] for p, q in sp.spectrum_edges(pts)]})
    return EXIT_OK


def _field_complex(args) -> ht.FiltComplex:
    doc = _load(args.file)
    A = _complex(doc, args.object)
    if not A.ring.is_field:
        raise InputError(f"{args.command} needs a field, got {A.ring.name}")
    return A


def cmd_minimize(args) -> int:
    A = _field_complex(args)
    red = ht.minimize(A)
    eq = ht.Equivalence(red.forward, red.backward).certify()
    lines = [f"ring {A.ring.name}", f"# minimal model of {args.object}; certified: {str(eq.is_certified()).lower()}"]
    lines += complex_lines(args.name or args.object, red.complex)
    print("\n".join(lines))
    return EXIT_OK if eq.is_certified() else EXIT_FAIL


def cmd_decompose(args) -> int:
    A = _field_complex(args)
    dec = ht.decompose_field(A)
    ok = dec.equivalence.is_certified()
    count = f"{len(dec.summands)} summand{'' if len(dec.summands) == 1 else 's'}"
    lines = [f"ring {A.ring.name}", f"# {count} of {args.object}; certified: {str(ok).lower()}"]
    for i, s in enumerate(dec.summands):
        if s.is_cone:
            lines.append(f"# S{i}: cone(β^{s.exponent}) from R({s.twist}), degree {s.degree}")
        else:
            lines.append(f"# S{i}: R({s.twist}) in degree {s.degree}")
        lines += complex_lines(f"S{i}", s.complex(A.ring))
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    from fper.verify import run_suites
    if args.cases < 0:
        raise InputError("--cases must be nonnegative")
    reports = run_suites(args.suite, args.seed, args.cases)
    _emit({"seed": args.seed, "cases": args.cases, "passed": all(r.passed for r in reports),
           "suites": [r.to_dict() for r in reports]})
    for r in reports:
        print(f"{r.suite}: {'PASS' if r.passed else 'FAIL'} ({r.checks} checks, {len(r.failures)} failures)",
              file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _ring(text: str) -> BaseRing:
    try:
        return BaseRing.parse(text)
    except ValueError as e:
        raise InputError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fper", description="Perfect filtered complexes over Q, F_p and Z.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="supports of an object as JSON")
    a.add_argument("file")
    a.add_argument("object")
    a.set_defaults(func=cmd_analyze)

    m = sub.add_parser("member", help="decide membership in the ideal generated by some objects")
    m.add_argument("file")
    m.add_argument("target")
    m.add_argument("generators", nargs="+")
    m.add_argument("--oracle", action="store_true", help="cross-check the decision with the oracles")
    m.set_defaults(func=cmd_member)

    c = sub.add_parser("central-ring", help="Hom(R(0), R(n)) for a range of n")
    c.add_argument("--ring", required=True)
    c.add_argument("--from", dest="lo", type=int, required=True)
    c.add_argument("--to", dest="hi", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_central_ring)

    s = sub.add_parser("spectrum", help="points and specializations of the spectrum")
    s.add_argument("--ring", required=True)
    s.add_argument("--primes-up-to", type=int, default=0)
    s.add_argument("--dot", action="store_true", help="emit a DOT digraph")
    s.set_defaults(func=cmd_spectrum)

    for name, fn, doc in (("minimize", cmd_minimize, "Gaussian cancellation to a minimal model"),
                          ("decompose", cmd_decompose, "split into shifted twists and cones")):
        q = sub.add_parser(name, help=doc)
        q.add_argument("file")
        q.add_argument("object")
        if name == "minimize":
            q.add_argument("--name", help="name of the output complex")
        q.set_defaults(func=fn)

    v = sub.add_parser("verify", help="run seeded verification suites")
    v.add_argument("--suite", default="all", choices=("filtcat", "homotopy", "spectrum", "oracle", "all"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--cases", type=int, default=20)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as e:
        print(f"fper: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
