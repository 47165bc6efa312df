"""Seeded verification suites behind ``fper verify``.

Every suite draws its cases from a ``random.Random`` seeded by the suite
name, the seed and the case index, so reports are reproducible.  A failure
records the check name and a serialized counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from fper import filtcat as fc
from fper import homotopy as ht
from fper import oracle
from fper import spectrum as sp
from fper.exactcore import GF, QQ, ZZ, BaseRing, Matrix
from fper.serialize import complex_to_text

SUITES = ("filtcat", "homotopy", "spectrum", "oracle")


@dataclass
class Failure:
    suite: str
    case: int
    check: str
    detail: str
    counterexample: str = ""

    def to_dict(self) -> dict:
        return {"suite": self.suite, "case": self.case, "check": self.check, "detail": self.detail,
                "counterexample": self.counterexample}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: int
    checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "cases": self.cases, "checks": self.checks,
                "passed": self.passed, "failures": [f.to_dict() for f in self.failures]}


class _Runner:
    def __init__(self, report: SuiteReport):
        self.report = report
        self.case = 0
        self.objects: dict = {}

    def check(self, name: str, fn: Callable[[], object]) -> None:
        self.report.checks += 1
        try:
            ok, detail = fn(), ""
            if isinstance(ok, tuple):
                ok, detail = ok
        except Exception as e:  # a crashing construction is a failed check
            ok, detail = False, f"{type(e).__name__}: {e}"
        if not ok:
            self.report.failures.append(Failure(self.report.suite, self.case, name, detail or "check failed",
                                                self._dump()))

    def generate(self, label: str, fn: Callable[[], object]):
        """Draw a case's inputs; a crash here fails the case and skips its checks."""
        self.objects = {"case": label}
        try:
            return fn()
        except Exception as e:
            self.report.checks += 1
            self.report.failures.append(Failure(self.report.suite, self.case, "case generation",
                                                f"{type(e).__name__}: {e}", self._dump()))
            return None

    def _dump(self) -> str:
        out = []
        for name, obj in self.objects.items():
            if isinstance(obj, ht.FiltComplex):
                out.append(complex_to_text(obj, name))
            else:
                out.append(f"# {name}: {obj!r}")
        return "\n".join(out)


def _case_rng(suite: str, seed: int, case: int) -> random.Random:
    return random.Random(f"{suite}/{seed}/{case}")


# --- homotopy ----------------------------------------------------------------

def reference_cone(f: ht.ChainMap) -> ht.FiltComplex:
    """``A[1] ⊕ B`` with differential ``[[-d_A, 0], [-f, d_B]]``, assembled block by block."""
    A, B = f.source, f.target
    ring = A.ring
    ks = {k - 1 for k in A.degrees()} | set(B.degrees())
    if not ks:
        return ht.FiltComplex.zero(ring)
    lo, hi = min(ks), max(ks)
    objs, pa, pb = {}, {}, {}
    for k in range(lo, hi + 1):
        objs[k], (pa[k], pb[k]) = ht.layout([A.obj(k + 1).twists, B.obj(k).twists])
    diffs = []
    for k in range(lo, hi):
        rows = [[ring.zero] * objs[k].rank for _ in range(objs[k + 1].rank)]
        for (r_pos, c_pos, m, sign) in ((pa[k + 1], pa[k], A.diff(k + 1).mat, -1),
                                        (pb[k + 1], pa[k], f.at(k + 1).mat, -1),
                                        (pb[k + 1], pb[k], B.diff(k).mat, 1)):
            for a, i in enumerate(r_pos):
                for b, j in enumerate(c_pos):
                    rows[i][j] = ring.reduce(rows[i][j] + sign * m[a, b])
        diffs.append(ht.GradedMatrix(objs[k], objs[k + 1], Matrix.from_rows(ring, rows, objs[k].rank)))
    return ht.FiltComplex(ring, lo, tuple(objs[k] for k in range(lo, hi + 1)), tuple(diffs))


def _rings_for(case: int) -> BaseRing:
    return (GF(2), GF(3), QQ, ZZ)[case % 4]


def suite_homotopy(seed: int, cases: int) -> SuiteReport:
    rep = SuiteReport("homotopy", seed, cases)
    run = _Runner(rep)
    for i in range(cases):
        run.case = i
        ring = _rings_for(i)
        rng = _case_rng("homotopy", seed, i)
        drawn = run.generate(f"{ring.name} {seed}/{i}", lambda: (
            oracle.random_complex(ring, f"{seed}/{i}/A", max_rank=4),
            oracle.random_complex(ring, f"{seed}/{i}/B", max_rank=4)))
        if drawn is None:
            continue
        A, B = drawn
        f = oracle.random_chain_map(A, B, rng)
        run.objects = {"A": A, "B": B, "f": f}
        C = None

        def build():
            nonlocal C
            C = ht.cone(f)
            ht.validate(C)
            return True

        run.check("cone d∘d = 0", build)
        run.check("cone convention", lambda: C == reference_cone(f))

        def triangle():
            cd = ht.cone_data(f)
            if cd.complex != C:
                return False, "cone_data disagrees with cone"
            i_, p_ = cd.inclusion, cd.projection
            if not (i_.is_chain_map() and p_.is_chain_map()):
                return False, "inclusion or projection is not a chain map"
            if not (p_ @ i_).is_zero():
                return False, "projection ∘ inclusion != 0"
            if ht.is_nullhomotopic(i_ @ f) is None:
                return False, "inclusion ∘ f not nullhomotopic"
            if ht.is_nullhomotopic(ht.shift_map(f, 1) @ p_) is None:
                return False, "f[1] ∘ projection not nullhomotopic"
            return True

        run.check("triangle", triangle)
        run.check("cone(id) ≃ 0", lambda: ht.is_zero_object(ht.cone(ht.identity(A))))
        run.check("unit law", lambda: ht.tensor(A, ht.unit(ring)) == A)

        def monoidal():
            T = ht.tensor(A, B)
            for xi in (ht.pi_complex, ht.gr_total):
                if xi(T).homology().nonzero() != xi(A).tensor(xi(B)).homology().nonzero():
                    return False, f"{xi.__name__} is not monoidal here"
            return True

        run.check("π, gr monoidal", monoidal)
        run.check("d∘d after dual", lambda: ht.validate(ht.dual(A)) is not None)
        run.check("gr conservative", lambda: (sp.xi_complex(A, "gr").homology().is_zero()) == ht.is_zero_object(A))
        if ring.is_field:
            def minimization():
                red = ht.minimize(A)
                M = red.complex
                if ht.minimize(M).complex != M:
                    return False, "minimize is not idempotent"
                if ht.invariant_signature(M) != ht.invariant_signature(A):
                    return False, "minimize changed homology"
                return ht.Equivalence(red.forward, red.backward).certify().is_certified()

            run.check("minimize", minimization)
    return rep


# --- filtcat -------------------------------------------------------------------

def suite_filtcat(seed: int, cases: int) -> SuiteReport:
    rep = SuiteReport("filtcat", seed, cases)
    run = _Runner(rep)
    for i in range(cases):
        run.case = i
        ring = (GF(3), GF(2), GF(5))[i % 3]
        rng = _case_rng("filtcat", seed, i)
        a = oracle.random_filt_object(ring, rng)
        b = oracle.random_filt_object(ring, rng)
        f = oracle.random_filt_morphism(a, b, rng)
        s = oracle.random_seq_object(ring, rng)
        run.objects = {"a": a, "b": b, "f": f, "s": s}

        def factorization():
            e, em, m = fc.factorize(f)
            if not (fc.is_strict(e) and fc.is_epi(e)):
                return False, "first factor is not a strict epi"
            if not (fc.is_strict(m) and fc.is_mono(m)):
                return False, "last factor is not a strict mono"
            if not (fc.is_epi(em) and fc.is_mono(em)):
                return False, "middle factor is not an epimono"
            return fc.compose(m, em, e).pi() == f.pi()

        run.check("factorization", factorization)
        run.check("κ idempotent", lambda: fc.isomorphic(fc.kappa(fc.kappa(s)), fc.kappa(s)))

        def reflector():
            k, eta = fc.kappa_unit(s)
            h = oracle.random_filt_morphism(k, b, rng)
            g = fc.compose(h, eta)
            h2, nullity = fc.factor_through_kappa(g)
            return nullity == 0 and h2.pi() == h.pi()

        run.check("reflector law", reflector)

        def day():
            ab, ba = fc.day_tensor(a, b), fc.day_tensor(b, a)
            if not fc.isomorphic(ab, ba):
                return False, "not commutative"
            if fc.gr_dims(ab) != fc.convolve(fc.gr_dims(a), fc.gr_dims(b)):
                return False, "gr is not monoidal"
            return fc.gr_dims(fc.day_tensor(a, fc.unit_object(ring))) == fc.gr_dims(a)

        run.check("day tensor", day)

        def exactness():
            C = oracle.random_filt_complex(ring, f"{seed}/{i}")
            got = {fc.strictly_exact(C), fc.strict_and_pi_exact(C), fc.gr_exact(C)}
            return len(got) == 1

        run.check("exactness notions agree", exactness)
        run.check("split = gr", lambda: dict(fc.split_decompose(a)[0]) == fc.gr_dims(a))
    return rep


# --- spectrum ------------------------------------------------------------------

def suite_spectrum(seed: int, cases: int) -> SuiteReport:
    rep = SuiteReport("spectrum", seed, cases)
    run = _Runner(rep)
    cb = {R.name: ht.cone_beta(R) for R in (GF(3), ZZ)}
    for i in range(cases):
        run.case = i
        ring = (GF(3), ZZ)[i % 2]
        rng = _case_rng("spectrum", seed, i)
        drawn = run.generate(f"{ring.name} {seed}/{i}", lambda: (
            oracle.random_complex(ring, f"{seed}/{i}/A"),
            oracle.random_complex(ring, f"{seed}/{i}/B", max_rank=4)))
        if drawn is None:
            continue
        A, B = drawn
        run.objects = {"A": A, "B": B}

        def containment():
            r = sp.support_report(A)
            return r.supp_pi <= r.supp_gr

        run.check("supp_π ⊆ supp_gr", containment)

        def tensor_law():
            T = ht.tensor(A, B)
            for xi in sp.LAYERS:
                if sp.support(T, xi) != sp.support(A, xi) & sp.support(B, xi):
                    return False, f"{xi}: support of tensor is not the intersection"
            return True

        run.check("tensor intersection", tensor_law)

        def cone_law():
            f = oracle.random_chain_map(A, B, rng)
            C = ht.cone(f)
            return all(sp.support(C, xi) <= sp.support(A, xi) | sp.support(B, xi) for xi in sp.LAYERS)

        run.check("cone union", cone_law)

        def kernel_pi():
            acyclic = ht.pi_complex(A).homology().is_zero()
            empty = sp.support(A, "pi").is_empty
            member = sp.in_ideal(A, [cb[ring.name]])
            return acyclic == empty == member

        run.check("ker π = ⟨cone(β)⟩", kernel_pi)

        def conservative():
            ps = [0, *sp.candidate_primes(A)]
            all_in = all(sp.prime_test(A, sp.HomPrime(L, p)) for L in sp.LAYERS for p in ps)
            return all_in == ht.is_zero_object(A)

        run.check("primes jointly conservative", conservative)

        def round_trip():
            pair = sp.signature(A)
            return sp.subset_to_pair(sp.pair_to_subset(pair)) == pair

        run.check("pair round trip", round_trip)
    return rep


# --- oracle ---------------------------------------------------------------------

def suite_oracle(seed: int, cases: int) -> SuiteReport:
    rep = SuiteReport("oracle", seed, cases)
    run = _Runner(rep)
    F2 = GF(2)
    for i in range(cases):
        run.case = i
        ring = (F2, ZZ, QQ)[i % 3]
        drawn = run.generate(f"{ring.name} {seed}/{i}", lambda: (
            oracle.random_complex(ring, f"{seed}/{i}/t", max_rank=4),
            tuple(oracle.random_complex(ring, f"{seed}/{i}/g{j}", max_rank=4) for j in range(1 + i % 2))))
        if drawn is None:
            continue
        tgt, gens = drawn
        run.objects = {"target": tgt, **{f"gen{j}": g for j, g in enumerate(gens)}}
        q = oracle.Query(f"case {i}", tgt, gens, "random")

        def agreement():
            out = oracle.check_query(q, search_random=(i % 6 == 0))
            return out.ok, "; ".join(out.conflicts)

        run.check("decision/oracle agreement", agreement)
        run.check("generator is a member", lambda: sp.in_ideal(gens[0], gens) and sp.separate(gens[0], gens) is None)
    for n in range(1, 4):
        run.case = cases + n
        run.objects = {}
        run.check(f"cone(β^{n}) witness", lambda n=n: oracle.witness_cone_beta_power(n, F2).verify())
    return rep


RUNNERS = {"filtcat": suite_filtcat, "homotopy": suite_homotopy, "spectrum": suite_spectrum,
           "oracle": suite_oracle}


def run_suites(suite: str = "all", seed: int = 0, cases: int = 20) -> list[SuiteReport]:
    names = SUITES if suite == "all" else (suite,)
    for n in names:
        if n not in RUNNERS:
            raise ValueError(f"unknown suite {n!r}")
    return [RUNNERS[n](seed, cases) for n in names]
