"""Points of Spec^h(R[β]), supports, Thomason pairs and ideal membership.

The homogeneous spectrum is two copies of Spec(R): the π-layer (primes
``𝔭[β]``) and the gr-layer (primes ``𝔭 + ⟨β⟩``).  A point is a
``HomPrime(layer, p)`` where ``p = 0`` stands for the generic point.
Specialization runs ``L:0 → L:p`` inside a layer and ``pi:p → gr:p``
across layers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from fper.exactcore import BaseRing, FreeComplex
from fper.homotopy import FiltComplex, gr_total, pi_complex

LAYERS = ("pi", "gr")


@dataclass(frozen=True, order=True)
class HomPrime:
    layer: str
    prime: int = 0

    def __post_init__(self):
        if self.layer not in LAYERS:
            raise ValueError(f"unknown layer {self.layer!r}")
        if self.prime < 0:
            raise ValueError("prime must be 0 (generic) or a positive prime")

    @property
    def is_generic(self) -> bool:
        return self.prime == 0

    @property
    def name(self) -> str:
        return f"{self.layer}:{self.prime}"

    @classmethod
    def parse(cls, text: str) -> "HomPrime":
        layer, _, p = text.partition(":")
        return cls(layer, int(p or 0))

    def specializes_to(self, other: "HomPrime") -> bool:
        """True when ``other`` lies in the closure of ``self`` (reflexive)."""
        if self.layer == "gr" and other.layer == "pi":
            return False
        return self.prime == 0 or self.prime == other.prime

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ThomasonSubset:
    """Empty, All, or a nonempty finite set of closed primes of Spec(R)."""
    kind: str
    primes: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("empty", "all", "finite"):
            raise ValueError(f"bad kind {self.kind!r}")
        if self.kind == "finite" and (not self.primes or 0 in self.primes):
            raise ValueError("finite Thomason subsets are nonempty sets of closed primes")
        if self.kind != "finite" and self.primes:
            raise ValueError("only finite subsets carry primes")

    @classmethod
    def finite(cls, primes: Iterable[int]) -> "ThomasonSubset":
        ps = frozenset(primes)
        return cls("finite", ps) if ps else EMPTY

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def is_all(self) -> bool:
        return self.kind == "all"

    def __contains__(self, p: int) -> bool:
        if self.kind == "all":
            return True
        return self.kind == "finite" and p in self.primes

    def __le__(self, other: "ThomasonSubset") -> bool:
        if self.kind == "empty" or other.kind == "all":
            return True
        if other.kind == "empty" or self.kind == "all":
            return False
        return self.primes <= other.primes

    def __or__(self, other: "ThomasonSubset") -> "ThomasonSubset":
        if self.is_all or other.is_all:
            return ALL
        return ThomasonSubset.finite(self.primes | other.primes)

    def __and__(self, other: "ThomasonSubset") -> "ThomasonSubset":
        if self.is_all:
            return other
        if other.is_all:
            return self
        return ThomasonSubset.finite(self.primes & other.primes)

    def to_json(self):
        if self.kind == "empty":
            return "Empty"
        if self.kind == "all":
            return "All"
        return sorted(self.primes)

    @classmethod
    def from_json(cls, obj) -> "ThomasonSubset":
        if obj == "Empty":
            return EMPTY
        if obj == "All":
            return ALL
        return cls.finite(int(p) for p in obj)

    def __repr__(self):
        j = self.to_json()
        return j if isinstance(j, str) else "{" + ",".join(map(str, j)) + "}"


EMPTY = ThomasonSubset("empty")
ALL = ThomasonSubset("all")


@dataclass(frozen=True)
class ThomasonPair:
    pi: ThomasonSubset
    gr: ThomasonSubset

    def __post_init__(self):
        if not self.pi <= self.gr:
            raise ValueError(f"need Π ⊆ Γ, got {self.pi!r} ⊄ {self.gr!r}")

    def __le__(self, other: "ThomasonPair") -> bool:
        return self.pi <= other.pi and self.gr <= other.gr

    def __or__(self, other: "ThomasonPair") -> "ThomasonPair":
        return ThomasonPair(self.pi | other.pi, self.gr | other.gr)

    def __repr__(self):
        return f"({self.pi!r}, {self.gr!r})"


@dataclass(frozen=True)
class SpectralSubset:
    """A specialization-closed subset of the two-layer space, stored by its minimal generators.

    ``pi:0`` generates everything and ``gr:0`` the whole gr-layer.
    """
    generators: frozenset

    def __post_init__(self):
        gens = set(self.generators)
        minimal = {g for g in gens if not any(h != g and h.specializes_to(g) for h in gens)}
        object.__setattr__(self, "generators", frozenset(minimal))

    def __contains__(self, P: HomPrime) -> bool:
        return any(g.specializes_to(P) for g in self.generators)

    def __le__(self, other: "SpectralSubset") -> bool:
        return all(g in other for g in self.generators)

    def points(self, primes: Sequence[int]) -> list[HomPrime]:
        """The points of this subset among the layers over ``{0} ∪ primes``."""
        cand = [HomPrime(L, p) for L in LAYERS for p in [0, *primes]]
        return [P for P in cand if P in self]

    def names(self) -> list[str]:
        return sorted(g.name for g in self.generators)


# --- supports ---------------------------------------------------------------

def xi_complex(A: FiltComplex, xi: str) -> FreeComplex:
    if xi == "pi":
        return pi_complex(A)
    if xi == "gr":
        return gr_total(A)
    raise ValueError(f"unknown functor {xi!r}")


def support(A: FiltComplex, xi: str) -> ThomasonSubset:
    h = xi_complex(A, xi).homology()
    if h.total_rank() > 0:
        return ALL
    if A.ring.is_field:
        return EMPTY
    return ThomasonSubset.finite(h.torsion_primes())


@dataclass(frozen=True)
class SupportReport:
    ring: BaseRing
    supp_pi: ThomasonSubset
    supp_gr: ThomasonSubset
    evidence: tuple = field(default=())  # (layer, residue prime, total homology rank over κ(p))

    @property
    def pair(self) -> ThomasonPair:
        return ThomasonPair(self.supp_pi, self.supp_gr)

    @property
    def total(self) -> SpectralSubset:
        return pair_to_subset(self.pair)

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.name,
            "supp_pi": self.supp_pi.to_json(),
            "supp_gr": self.supp_gr.to_json(),
            "support_total": self.total.names(),
            "evidence": [{"layer": L, "prime": p, "rank": r} for L, p, r in self.evidence],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def candidate_primes(A: FiltComplex) -> list[int]:
    """Closed primes at which some ξ(A) could change behaviour: divisors of the torsion."""
    if A.ring.is_field:
        return []
    ps = set()
    for xi in LAYERS:
        ps |= xi_complex(A, xi).homology().torsion_primes()
    return sorted(ps)


def residue_rank(A: FiltComplex, xi: str, p: int) -> int:
    k = A.ring.residue_field(p)
    return xi_complex(A, xi).change_ring(k).homology().total_rank()


def support_report(A: FiltComplex) -> SupportReport:
    sp, sg = support(A, "pi"), support(A, "gr")
    if not sp <= sg:
        raise AssertionError(f"supp_pi {sp!r} not inside supp_gr {sg!r}")
    ev = []
    for xi in LAYERS:
        for p in [0, *candidate_primes(A)]:
            ev.append((xi, p, residue_rank(A, xi, p)))
    return SupportReport(A.ring, sp, sg, tuple(ev))


def support_total(A: FiltComplex) -> SpectralSubset:
    return pair_to_subset(ThomasonPair(support(A, "pi"), support(A, "gr")))


def ideal_signature(generators: Sequence[FiltComplex]) -> ThomasonPair:
    out = ThomasonPair(EMPTY, EMPTY)
    for g in generators:
        out = out | ThomasonPair(support(g, "pi"), support(g, "gr"))
    return out


def signature(A: FiltComplex) -> ThomasonPair:
    return ideal_signature([A])


def in_ideal(a: FiltComplex, generators: Sequence[FiltComplex]) -> bool:
    return signature(a) <= ideal_signature(generators)


def prime_test(a: FiltComplex, P: HomPrime) -> bool:
    """Whether ``a`` lies in the prime ``P``: ξ(a) ⊗ κ(p) is acyclic."""
    if a.ring.is_field and P.prime != 0:
        raise ValueError(f"{a.ring.name} has only the generic prime")
    return residue_rank(a, P.layer, P.prime) == 0


def separate(a: FiltComplex, generators: Sequence[FiltComplex]) -> Optional[HomPrime]:
    """A prime containing every generator but not ``a``; None when ``a`` is a member."""
    if in_ideal(a, generators):
        return None
    for layer in LAYERS:
        for p in [0, *candidate_primes(a)]:
            P = HomPrime(layer, p)
            if not prime_test(a, P) and all(prime_test(g, P) for g in generators):
                return P
    raise AssertionError("non-member without a separating prime")


# --- the classification bijection --------------------------------------------

def pair_to_subset(pair: ThomasonPair) -> SpectralSubset:
    if pair.pi.is_all:
        return SpectralSubset(frozenset({HomPrime("pi", 0)}))
    gens = {HomPrime("pi", p) for p in pair.pi.primes}
    if pair.gr.is_all:
        gens.add(HomPrime("gr", 0))
    else:
        gens |= {HomPrime("gr", p) for p in pair.gr.primes}
    return SpectralSubset(frozenset(gens))


def subset_to_pair(Y: SpectralSubset) -> ThomasonPair:
    def layer(L: str) -> ThomasonSubset:
        if HomPrime(L, 0) in Y:
            return ALL
        return ThomasonSubset.finite(g.prime for g in Y.generators if HomPrime(L, g.prime) in Y)
    return ThomasonPair(layer("pi"), layer("gr"))


# --- diagram -------------------------------------------------------------------

def spectrum_points(ring: BaseRing, primes_up_to: int = 0) -> list[HomPrime]:
    ps = [0, *ring.primes(primes_up_to)] if not ring.is_field else [0]
    return [HomPrime(L, p) for L in LAYERS for p in ps]


def spectrum_edges(points: Sequence[HomPrime]) -> list[tuple[HomPrime, HomPrime]]:
    return [(P, Q) for P in points for Q in points if P != Q and P.specializes_to(Q)]


def emit_spectrum(ring: BaseRing, primes_up_to: int = 0) -> str:
    pts = spectrum_points(ring, primes_up_to)
    lines = [f'digraph "Spec_h({ring.name}[beta])" {{', "  rankdir=LR;"]
    for P in pts:
        lines.append(f'  "{P.name}";')
    for P, Q in spectrum_edges(pts):
        lines.append(f'  "{P.name}" -> "{Q.name}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
