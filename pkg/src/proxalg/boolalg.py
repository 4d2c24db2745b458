"""Boolean carriers, proximity relations on them, and de Vries checking.

Two carriers are supported: the powerset algebra of ``n`` atoms, with
elements encoded as bitmasks, and the regular open algebra of [0,1].
On a finite algebra the only de Vries proximity is the order itself, so the
finite path mostly serves the morphism calculus; nontrivial proximities live
on the regular open carrier.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Optional

from . import core
from .core import RegOpen
from .verdict import Failure, InputError, Verdict


@dataclass(frozen=True)
class FinBA:
    atoms: int

    def __post_init__(self):
        if not (0 <= self.atoms <= 16):
            raise InputError("atom count must lie in 0..16")

    zero = 0
    finite = True

    @property
    def name(self) -> str:
        return f"finba:{self.atoms}"

    @property
    def one(self) -> int:
        return (1 << self.atoms) - 1

    @property
    def size(self) -> int:
        return 1 << self.atoms

    def elements(self) -> range:
        return range(self.size)

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def comp(self, a: int) -> int:
        return self.one ^ a

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def atom_list(self) -> list[int]:
        return [1 << i for i in range(self.atoms)]

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.size)

    def encode(self, a: int) -> int:
        return a

    def decode(self, x: Any) -> int:
        if isinstance(x, bool) or not isinstance(x, (int, str)):
            raise InputError(f"bad mask {x!r}")
        try:
            a = int(x)
        except ValueError as exc:
            raise InputError(f"bad mask {x!r}") from exc
        if not 0 <= a < self.size:
            raise InputError(f"mask {a} outside {self.name}")
        return a


@dataclass(frozen=True)
class RegOpenAlgebra:
    """The complete Boolean algebra of regular open subsets of [0,1]."""

    denom: int = 16
    finite = False
    name = "regopen"
    zero = core.EMPTY
    one = core.FULL

    def meet(self, a: RegOpen, b: RegOpen) -> RegOpen:
        return core.meet(a, b)

    def join(self, a: RegOpen, b: RegOpen) -> RegOpen:
        return core.join(a, b)

    def comp(self, a: RegOpen) -> RegOpen:
        return core.complement(a)

    def leq(self, a: RegOpen, b: RegOpen) -> bool:
        return core.leq(a, b)

    def random(self, rng: random.Random) -> RegOpen:
        return core.random_regopen(rng, self.denom)

    def encode(self, a: RegOpen) -> dict:
        return a.to_json()

    def decode(self, x: Any) -> RegOpen:
        if not isinstance(x, dict):
            raise InputError(f"bad regular open {x!r}")
        try:
            return RegOpen.from_json(x)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(str(exc)) from exc


def carrier_from_name(name: str):
    if name == "regopen":
        return RegOpenAlgebra()
    if isinstance(name, str) and name.startswith("finba:"):
        try:
            return FinBA(int(name.split(":", 1)[1]))
        except ValueError as exc:
            raise InputError(f"bad carrier {name!r}") from exc
    raise InputError(f"unknown carrier {name!r}")


@dataclass(frozen=True)
class ProximityRel:
    """A binary relation on a Boolean carrier.

    ``interp`` and ``inner`` are optional witness hooks: ``interp(a, b)``
    returns some c with a < c < b, and ``inner`` is a monotone map with
    inner(a) related to a.  They make randomized checks witness-backed.
    """

    carrier: Any
    decide: Callable[[Any, Any], bool]
    name: str = "custom"
    table: Optional[frozenset] = None
    interp: Optional[Callable] = field(default=None, compare=False)
    inner: Optional[Callable] = field(default=None, compare=False)

    def __call__(self, a, b) -> bool:
        return self.decide(a, b)

    def interpolant(self, a, b):
        if self.interp is not None:
            c = self.interp(a, b)
            if c is not None and self(a, c) and self(c, b):
                return c
        for c in (a, b):
            if self(a, c) and self(c, b):
                return c
        if self.carrier.finite:
            for c in sorted(self.carrier.elements(), key=lambda x: (bin(x).count("1"), x)):
                if self(a, c) and self(c, b):
                    return c
        return None

    def nonzero_below(self, a):
        """Some b != 0 related to a, or None."""
        zero = self.carrier.zero
        if self.inner is not None:
            b = self.inner(a)
            if b != zero and self(b, a):
                return b
        if self.carrier.finite:
            for b in self.carrier.elements():
                if b != zero and self(b, a):
                    return b
        elif isinstance(a, RegOpen):
            b = core.shrink(a)
            if b != zero and self(b, a):
                return b
        return None

    def to_json(self) -> Any:
        if self.table is not None:
            return {"atoms": self.carrier.atoms,
                    "relation": [list(p) for p in sorted(self.table)]}
        return {"carrier": self.carrier.name, "relation": self.name}


def order_rel(carrier) -> ProximityRel:
    table = None
    if carrier.finite:
        table = frozenset((a, b) for a in carrier.elements() for b in carrier.elements()
                          if carrier.leq(a, b))
    return ProximityRel(carrier, carrier.leq, "order", table,
                        interp=lambda a, b: a, inner=lambda a: a)


_EROSION = Fraction(1, 256)


def closure_rel(carrier: Optional[RegOpenAlgebra] = None) -> ProximityRel:
    carrier = carrier or RegOpenAlgebra()
    return ProximityRel(carrier, core.closure_contained, "closure",
                        interp=core.interpolate,
                        inner=lambda a: core.erode(a, _EROSION))


def table_rel(ba: FinBA, pairs: Iterable) -> ProximityRel:
    table = set()
    for p in pairs:
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise InputError(f"relation entry {p!r} is not a pair")
        table.add((ba.decode(p[0]), ba.decode(p[1])))
    table = frozenset(table)
    return ProximityRel(ba, lambda a, b: (a, b) in table, "table", table)


def full_rel(carrier) -> ProximityRel:
    table = None
    if carrier.finite:
        table = frozenset(itertools.product(carrier.elements(), repeat=2))
    return ProximityRel(carrier, lambda a, b: True, "full", table)


def equality_rel(carrier) -> ProximityRel:
    table = None
    if carrier.finite:
        table = frozenset((a, a) for a in carrier.elements())
    return ProximityRel(carrier, lambda a, b: a == b, "equality", table,
                        interp=lambda a, b: a, inner=lambda a: a)


def rel_from_name(carrier, name: str) -> ProximityRel:
    makers = {"order": order_rel, "full": full_rel, "equality": equality_rel}
    if name == "closure":
        if carrier.finite:
            raise InputError("closure proximity needs the regopen carrier")
        return closure_rel(carrier)
    if name not in makers:
        raise InputError(f"unknown relation {name!r}")
    return makers[name](carrier)


# ---------------------------------------------------------------- de Vries axioms

AXIOMS_DV = ("DV1", "DV2", "DV3", "DV4", "DV5", "DV6", "DV7")


def _submasks(m: int) -> Iterator[int]:
    s = m
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & m


def _supermasks(m: int, one: int) -> Iterator[int]:
    free = one ^ m
    for s in _submasks(free):
        yield m | s


def relation_matrix(rel: ProximityRel) -> list[list[bool]]:
    ba = rel.carrier
    elems = list(ba.elements())
    mat = []
    for a in elems:
        row = []
        for b in elems:
            v = rel(a, b)
            if not isinstance(v, bool):
                raise InputError(f"relation undefined or non-boolean at ({a}, {b})")
            row.append(v)
        mat.append(row)
    return mat


def _finite_dv_axioms(ba: FinBA, R: list[list[bool]]):
    """Yield (axiom, checker) pairs; each checker raises Failure on violation."""
    one, elems = ba.one, range(ba.size)

    def dv1():
        if not R[one][one]:
            raise Failure("DV1", {"a": one, "b": one})

    def dv2():
        for a in elems:
            for b in elems:
                if R[a][b] and a & ~b:
                    raise Failure("DV2", {"a": a, "b": b})

    def dv3():
        for b in elems:
            for c in elems:
                if not R[b][c]:
                    continue
                for a in _submasks(b):
                    for d in _supermasks(c, one):
                        if not R[a][d]:
                            raise Failure("DV3", {"a": a, "b": b, "c": c, "d": d})

    def dv4():
        for a in elems:
            ups = [b for b in elems if R[a][b]]
            for b in ups:
                for c in ups:
                    if not R[a][b & c]:
                        raise Failure("DV4", {"a": a, "b": b, "c": c})

    def dv5():
        for a in elems:
            for b in elems:
                if R[a][b] and not R[one ^ b][one ^ a]:
                    raise Failure("DV5", {"a": a, "b": b})

    def dv6():
        for a in elems:
            for b in elems:
                if R[a][b] and not any(R[a][c] and R[c][b] for c in elems):
                    raise Failure("DV6", {"a": a, "b": b})

    def dv7():
        for a in elems:
            if a and not any(b and R[b][a] for b in elems):
                raise Failure("DV7", {"a": a})

    return list(zip(AXIOMS_DV, (dv1, dv2, dv3, dv4, dv5, dv6, dv7)))


def _run_axioms(axioms, seed: int, collect_all: bool, stats: dict) -> Verdict:
    failures = []
    for name, check in axioms:
        try:
            check()
        except Failure as f:
            cx = dict(f.counterexample)
            cx["axiom"] = f.axiom
            failures.append(cx)
            if not collect_all:
                break
    if not failures:
        return Verdict("pass", seed=seed, stats=stats)
    if collect_all:
        stats = dict(stats, failed=[f["axiom"] for f in failures])
    return Verdict("fail", failures[0]["axiom"], failures[0], seed, stats)


def check_de_vries_matrix(ba: FinBA, R: list[list[bool]], collect_all: bool = False) -> Verdict:
    return _run_axioms(_finite_dv_axioms(ba, R), 0, collect_all,
                       {"mode": "exhaustive", "elements": ba.size})


def check_de_vries(rel: ProximityRel, seed: int = 0, samples: int = 200,
                   collect_all: bool = False) -> Verdict:
    """Check (DV1)-(DV7): exhaustively on a finite carrier, else by seeded sampling.

    On the regular open carrier the existential axioms are settled by
    constructive witnesses (interpolation and shrinking), not by search.
    """
    ba = rel.carrier
    if ba.finite:
        return check_de_vries_matrix(ba, relation_matrix(rel), collect_all)
    return _sampled_de_vries(rel, seed, samples, collect_all)


def _sampled_de_vries(rel: ProximityRel, seed: int, samples: int, collect_all: bool) -> Verdict:
    B = rel.carrier
    rng = random.Random(seed)
    enc = B.encode
    stats = {"mode": "sampled", "samples": samples, "nontrivial": 0}

    def related_pair():
        # a well below b whenever the relation offers a monotone inner map
        b = B.random(rng)
        if rel.inner is not None and rng.random() < 0.8:
            a = B.meet(B.random(rng) if rng.random() < 0.5 else B.one, rel.inner(b))
        else:
            a = B.random(rng)
        return a, b

    pairs = [related_pair() for _ in range(samples)]

    def note():
        stats["nontrivial"] += 1

    def dv1():
        if not rel(B.one, B.one):
            raise Failure("DV1", {"a": enc(B.one), "b": enc(B.one)})

    def dv2():
        for a, b in pairs:
            if rel(a, b):
                note()
                if not B.leq(a, b):
                    raise Failure("DV2", {"a": enc(a), "b": enc(b)})

    def dv3():
        for b, c in pairs:
            if not rel(b, c):
                continue
            note()
            a = B.meet(b, B.random(rng))
            d = B.join(c, B.random(rng))
            if not rel(a, d):
                raise Failure("DV3", {"a": enc(a), "b": enc(b), "c": enc(c), "d": enc(d)})

    def dv4():
        for a, b in pairs:
            if not rel(a, b):
                continue
            w = rel.interpolant(a, b)
            c = B.join(w if w is not None else b, B.random(rng))
            if not rel(a, c):
                continue
            note()
            if not rel(a, B.meet(b, c)):
                raise Failure("DV4", {"a": enc(a), "b": enc(b), "c": enc(c)})

    def dv5():
        for a, b in pairs:
            if rel(a, b):
                note()
                if not rel(B.comp(b), B.comp(a)):
                    raise Failure("DV5", {"a": enc(a), "b": enc(b)})

    def dv6():
        for a, b in pairs:
            if rel(a, b):
                note()
                if rel.interpolant(a, b) is None:
                    raise Failure("DV6", {"a": enc(a), "b": enc(b)})

    def dv7():
        for _, b in pairs:
            if b != B.zero:
                note()
                if rel.nonzero_below(b) is None:
                    raise Failure("DV7", {"a": enc(b)})

    axioms = list(zip(AXIOMS_DV, (dv1, dv2, dv3, dv4, dv5, dv6, dv7)))
    return _run_axioms(axioms, seed, collect_all, stats)


def relation_from_bits(ba: FinBA, bits: int) -> list[list[bool]]:
    n = ba.size
    return [[bool(bits >> (a * n + b) & 1) for b in range(n)] for a in range(n)]


def de_vries_relations(ba: FinBA) -> list[frozenset]:
    """Every binary relation on a small finite algebra passing (DV1)-(DV7)."""
    n = ba.size
    if n * n > 16:
        raise InputError("exhaustive relation scan is limited to 2 atoms")
    found = []
    for bits in range(1 << (n * n)):
        R = relation_from_bits(ba, bits)
        if check_de_vries_matrix(ba, R).ok:
            found.append(frozenset((a, b) for a in range(n) for b in range(n) if R[a][b]))
    return found


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class MorphismTable:
    source: FinBA
    target: FinBA
    image: tuple[int, ...]

    def __post_init__(self):
        if len(self.image) != self.source.size:
            raise InputError("morphism table is not total")
        for v in self.image:
            if not 0 <= v < self.target.size:
                raise InputError(f"image {v} outside {self.target.name}")

    def __call__(self, a: int) -> int:
        return self.image[a]

    @classmethod
    def identity(cls, ba: FinBA) -> "MorphismTable":
        return cls(ba, ba, tuple(ba.elements()))

    @classmethod
    def from_function(cls, source: FinBA, target: FinBA, fn: Callable[[int], int]) -> "MorphismTable":
        return cls(source, target, tuple(fn(a) for a in source.elements()))

    def then(self, other: "MorphismTable") -> "MorphismTable":
        """Plain composite: first self, then other."""
        if self.target != other.source:
            raise InputError("tables are not composable")
        return MorphismTable(self.source, other.target, tuple(other(v) for v in self.image))

    def to_json(self) -> dict:
        return {"source": self.source.atoms, "target": self.target.atoms,
                "map": {str(a): str(v) for a, v in enumerate(self.image)}}

    @classmethod
    def from_json(cls, obj: dict) -> "MorphismTable":
        try:
            src, tgt = FinBA(int(obj["source"])), FinBA(int(obj["target"]))
            mp = obj["map"]
            image = tuple(tgt.decode(mp[str(a)]) for a in src.elements())
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad morphism table: {exc}") from exc
        return cls(src, tgt, image)


AXIOMS_M = ("M1", "M2", "M3", "M4")


def check_de_vries_morphism(sigma: MorphismTable, rel_src: ProximityRel,
                            rel_tgt: ProximityRel, collect_all: bool = False) -> Verdict:
    A, B = sigma.source, sigma.target
    if rel_src.carrier != A or rel_tgt.carrier != B:
        raise InputError("relations do not live on the table's algebras")
    R1, R2 = relation_matrix(rel_src), relation_matrix(rel_tgt)
    s = sigma.image
    elems = list(A.elements())

    def m1():
        if s[0] != 0:
            raise Failure("M1", {"a": 0, "image": s[0]})

    def m2():
        for a in elems:
            for b in elems:
                if s[a & b] != s[a] & s[b]:
                    raise Failure("M2", {"a": a, "b": b})

    def m3():
        for a in elems:
            for b in elems:
                if R1[a][b] and not R2[B.comp(s[A.comp(a)])][s[b]]:
                    raise Failure("M3", {"a": a, "b": b})

    def m4():
        for a in elems:
            j = 0
            for b in elems:
                if R1[b][a]:
                    j |= s[b]
            if j != s[a]:
                raise Failure("M4", {"a": a, "join": j, "image": s[a]})

    return _run_axioms(list(zip(AXIOMS_M, (m1, m2, m3, m4))), 0, collect_all,
                       {"mode": "exhaustive", "elements": A.size})


def star_compose(sigma2: MorphismTable, sigma1: MorphismTable, rel1: ProximityRel) -> MorphismTable:
    """(s2 * s1)(a) = join of s2(s1(b)) over b related to a."""
    if sigma1.target != sigma2.source or rel1.carrier != sigma1.source:
        raise InputError("carrier mismatch in star composition")
    A = sigma1.source
    R = relation_matrix(rel1)
    out = []
    for a in A.elements():
        j = 0
        for b in A.elements():
            if R[b][a]:
                j |= sigma2(sigma1(b))
        out.append(j)
    return MorphismTable(A, sigma2.target, tuple(out))


def boolean_hom(source: FinBA, target: FinBA, point_map: tuple[int, ...]) -> MorphismTable:
    """The homomorphism dual to a map from atoms of target to atoms of source."""
    if len(point_map) != target.atoms:
        raise InputError("point map has the wrong length")

    def fn(a: int) -> int:
        return sum(1 << j for j, i in enumerate(point_map) if a >> i & 1)

    return MorphismTable.from_function(source, target, fn)


def boolean_homs(source: FinBA, target: FinBA) -> list[MorphismTable]:
    if source.atoms == 0:
        return [MorphismTable(source, target, (0,))] if target.atoms == 0 else []
    return [boolean_hom(source, target, pm)
            for pm in itertools.product(range(source.atoms), repeat=target.atoms)]


def enumerate_morphisms(rel_src: ProximityRel, rel_tgt: ProximityRel) -> list[MorphismTable]:
    """All tables passing (M1)-(M4), by backtracking on (M1)/(M2) then a full check."""
    A, B = rel_src.carrier, rel_tgt.carrier
    n = A.size
    image = [0] * n
    found = []

    def extend(x: int):
        if x == n:
            t = MorphismTable(A, B, tuple(image))
            if check_de_vries_morphism(t, rel_src, rel_tgt).ok:
                found.append(t)
            return
        for v in B.elements():
            image[x] = v
            if all(image[x & y] == v & image[y] for y in range(x)):
                extend(x + 1)

    extend(1)
    return found


def random_morphism(rng: random.Random, source: FinBA, target: FinBA) -> MorphismTable:
    return boolean_hom(source, target,
                       tuple(rng.randrange(source.atoms) for _ in range(target.atoms)))


def check_join_inequality(sigma: MorphismTable, rel_src: ProximityRel) -> Verdict:
    """For f related to g: sigma(e v f) <= sigma(e) v sigma(g), exhaustively."""
    A = sigma.source
    R = relation_matrix(rel_src)
    count = 0
    for f in A.elements():
        for g in A.elements():
            if not R[f][g]:
                continue
            for e in A.elements():
                count += 1
                lhs, rhs = sigma(e | f), sigma(e) | sigma(g)
                if lhs & ~rhs:
                    cx = {"axiom": "JOIN", "e": e, "f": f, "g": g}
                    return Verdict("fail", "JOIN", cx, 0, {"instances": count})
    return Verdict("pass", stats={"instances": count})


def well_inside_ideals(e, f, model: str = "stepfn") -> bool:
    """Is Ann(eD) + fD the whole reflexive algebra?  See :mod:`proxalg.ideals`."""
    from .ideals import well_inside_ideals as impl

    return impl(e, f, model)
