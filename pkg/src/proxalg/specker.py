"""The flat algebra R[B]: decreasing step functions from Q into a Boolean carrier.

An element is stored as its step list ``((r0, e0), ..., (rn, en))`` with
``r0 < ... < rn`` and ``1 = e0 > e1 > ... > en > 0``; it takes the value 1 at
r <= r0, ei on (r(i-1), ri] and 0 beyond rn.  Reading ei as the set of
points where the element is at least ri, this is the function
r0 + sum (ri - r(i-1)) ei.  All operations go through the threshold-join
formulas, evaluated at the finitely many candidate thresholds where their
value can change.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional, Sequence

from .boolalg import ProximityRel, carrier_from_name, order_rel
from .core import fmt_q, q
from .verdict import Failure, InputError, Verdict

Steps = tuple  # tuple[tuple[Fraction, element], ...]


@dataclass(frozen=True)
class FlatElem:
    carrier: Any
    steps: Steps

    @cached_property
    def thresholds(self) -> list[Fraction]:
        return [r for r, _ in self.steps]

    @property
    def chain(self) -> list:
        return [e for _, e in self.steps]

    def __call__(self, r: Fraction):
        return evaluate(self, r)

    def __add__(self, other):
        return add(self, _lift(self.carrier, other))

    def __radd__(self, other):
        return add(_lift(self.carrier, other), self)

    def __sub__(self, other):
        return add(self, neg(_lift(self.carrier, other)))

    def __rsub__(self, other):
        return add(_lift(self.carrier, other), neg(self))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        if isinstance(other, FlatElem):
            return mul(self, other)
        return scale(q(other), self)

    __rmul__ = __mul__

    def __and__(self, other):
        return meet(self, _lift(self.carrier, other))

    def __or__(self, other):
        return join(self, _lift(self.carrier, other))

    def __le__(self, other):
        return leq(self, _lift(self.carrier, other))

    def __ge__(self, other):
        return leq(_lift(self.carrier, other), self)

    def to_json(self) -> dict:
        return {"carrier": self.carrier.name,
                "steps": [[fmt_q(r), self.carrier.encode(e)] for r, e in self.steps]}

    @classmethod
    def from_json(cls, obj: dict) -> "FlatElem":
        if not isinstance(obj, dict) or "steps" not in obj:
            raise InputError("flat element needs a steps list")
        B = carrier_from_name(obj.get("carrier", ""))
        try:
            steps = [(q(r), B.decode(e)) for r, e in obj["steps"]]
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad step list: {exc}") from exc
        return make(B, steps)


def _lift(B, x) -> FlatElem:
    return x if isinstance(x, FlatElem) else const(B, q(x))


def make(B, steps: Iterable[tuple]) -> FlatElem:
    """Validated constructor for externally supplied step lists."""
    steps = tuple((q(r), e) for r, e in steps)
    if not steps:
        if B.one != B.zero:
            raise InputError("empty step list is reserved for the zero algebra")
        return FlatElem(B, ())
    if steps[0][1] != B.one:
        raise InputError("the first chain element must be 1")
    for (r1, e1), (r2, e2) in zip(steps, steps[1:]):
        if not r1 < r2:
            raise InputError("thresholds must increase strictly")
        if e1 == e2 or not B.leq(e2, e1):
            raise InputError("chain must decrease strictly")
    if steps[-1][1] == B.zero:
        raise InputError("zero may not appear in the chain")
    return FlatElem(B, steps)


def const(B, c) -> FlatElem:
    if B.one == B.zero:
        return FlatElem(B, ())
    return FlatElem(B, ((q(c), B.one),))


def zero(B) -> FlatElem:
    return const(B, 0)


def one(B) -> FlatElem:
    return const(B, 1)


def idem(B, e) -> FlatElem:
    """The idempotent of the flat algebra attached to a carrier element e."""
    if e == B.zero:
        return zero(B)
    if e == B.one:
        return one(B)
    return FlatElem(B, ((Fraction(0), B.one), (Fraction(1), e)))


def evaluate(a: FlatElem, r: Fraction):
    B = a.carrier
    ts = a.thresholds
    k = bisect.bisect_left(ts, r)
    if k == len(ts):
        return B.zero
    return a.steps[k][1]


def _from_samples(B, ts: Sequence[Fraction], value: Callable) -> FlatElem:
    """Canonical element whose value on (t(k-1), tk] is value(tk) and 1 below t0."""
    return _canonical(B, ts, [value(t) for t in ts])


def _canonical(B, ts: Sequence[Fraction], vals: Sequence) -> FlatElem:
    steps = []
    for k, (t, v) in enumerate(zip(ts, vals)):
        if v == B.zero:
            continue
        if k + 1 < len(vals) and vals[k + 1] == v:
            continue
        steps.append((t, v))
    return FlatElem(B, tuple(steps))


def _same_carrier(a: FlatElem, b: FlatElem):
    if a.carrier != b.carrier:
        raise InputError("flat elements live over different carriers")
    return a.carrier


def add(a: FlatElem, b: FlatElem) -> FlatElem:
    # (a+b)(t) = join over i of ei ^ b(t - ri)
    B = _same_carrier(a, b)
    ts = sorted({r + s for r, _ in a.steps for s, _ in b.steps})

    def value(t):
        acc = B.zero
        for r, e in a.steps:
            acc = B.join(acc, B.meet(e, evaluate(b, t - r)))
        return acc

    return _from_samples(B, ts, value)


def neg(a: FlatElem) -> FlatElem:
    # -a is at least -ri exactly off the next chain element
    B = a.carrier
    if not a.steps:
        return a
    chain = a.chain + [B.zero]
    steps = [(-a.steps[i][0], B.comp(chain[i + 1])) for i in range(len(a.steps) - 1, -1, -1)]
    return FlatElem(B, tuple(steps))


def scale(s: Fraction, a: FlatElem) -> FlatElem:
    s = q(s)
    if s == 0:
        return zero(a.carrier)
    if s < 0:
        return neg(scale(-s, a))
    return FlatElem(a.carrier, tuple((s * r, e) for r, e in a.steps))


def is_nonneg(a: FlatElem) -> bool:
    return not a.steps or a.steps[0][0] >= 0


def _mul_nonneg(a: FlatElem, b: FlatElem) -> FlatElem:
    # (ab)(t) = join of a(r1) ^ b(r2) over r1, r2 >= 0 with r1 r2 >= t
    B = _same_carrier(a, b)
    if not a.steps or not b.steps:
        return FlatElem(B, ())
    pos_a = [(r, e) for r, e in a.steps if r > 0]
    ts = sorted({Fraction(0)} | {r * s for r, _ in pos_a for s, _ in b.steps if s > 0})

    def value(t):
        if t <= 0:
            return B.one
        acc = B.zero
        for r, e in pos_a:
            acc = B.join(acc, B.meet(e, evaluate(b, t / r)))
        return acc

    return _from_samples(B, ts, value)


def mul(a: FlatElem, b: FlatElem) -> FlatElem:
    """Product; mixed signs go through a+b+ - a+b- - a-b+ + a-b-."""
    if is_nonneg(a) and is_nonneg(b):
        return _mul_nonneg(a, b)
    ap, am = positive(a), negative(a)
    bp, bm = positive(b), negative(b)
    out = _mul_nonneg(ap, bp)
    out = add(out, neg(_mul_nonneg(ap, bm)))
    out = add(out, neg(_mul_nonneg(am, bp)))
    return add(out, _mul_nonneg(am, bm))


def _pointwise(a: FlatElem, b: FlatElem, op: Callable) -> FlatElem:
    B = _same_carrier(a, b)
    ts = sorted(set(a.thresholds) | set(b.thresholds))
    return _from_samples(B, ts, lambda t: op(evaluate(a, t), evaluate(b, t)))


def meet(a: FlatElem, b: FlatElem) -> FlatElem:
    return _pointwise(a, b, a.carrier.meet)


def join(a: FlatElem, b: FlatElem) -> FlatElem:
    return _pointwise(a, b, a.carrier.join)


def flat_binop(tag: str, a: FlatElem, b) -> FlatElem:
    if tag == "scalar":
        return scale(q(b), a)
    ops = {"add": add, "mul": mul, "meet": meet, "join": join}
    if tag not in ops:
        raise InputError(f"unknown flat op {tag!r}")
    return ops[tag](a, b)


def leq(a: FlatElem, b: FlatElem) -> bool:
    B = _same_carrier(a, b)
    ts = set(a.thresholds) | set(b.thresholds)
    return all(B.leq(evaluate(a, t), evaluate(b, t)) for t in ts)


def positive(a: FlatElem) -> FlatElem:
    return join(a, zero(a.carrier))


def negative(a: FlatElem) -> FlatElem:
    return join(neg(a), zero(a.carrier))


def absolute(a: FlatElem) -> FlatElem:
    return join(a, neg(a))


def norm(a: FlatElem) -> Fraction:
    m = absolute(a)
    return m.steps[-1][0] if m.steps else Fraction(0)


def lattice_parts(a: FlatElem):
    return positive(a), negative(a), absolute(a), norm(a)


def support(a: FlatElem):
    """Smallest carrier element s with a = a s, i.e. where a is nonzero."""
    B = a.carrier
    m = absolute(a)
    if not m.steps:
        return B.zero
    if m.steps[0][0] > 0:
        return B.one
    return m.steps[1][1] if len(m.steps) > 1 else B.zero


def idempotent_part(a: FlatElem):
    """The carrier element e with a = e-flat, or None when a is not idempotent."""
    B = a.carrier
    if a == zero(B):
        return B.zero
    if a == one(B):
        return B.one
    if len(a.steps) == 2 and a.steps[0][0] == 0 and a.steps[1][0] == 1:
        return a.steps[1][1]
    return None


# ---------------------------------------------------------------- decompositions

@dataclass(frozen=True)
class OrthDecomp:
    carrier: Any
    terms: tuple  # ((r, e), ...) with pairwise disjoint e
    full: bool = False

    def to_json(self) -> dict:
        return {"carrier": self.carrier.name, "full": self.full,
                "terms": [[fmt_q(r), self.carrier.encode(e)] for r, e in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> "OrthDecomp":
        if not isinstance(obj, dict) or "terms" not in obj:
            raise InputError("decomposition needs a terms list")
        B = carrier_from_name(obj.get("carrier", ""))
        try:
            terms = tuple((q(r), B.decode(e)) for r, e in obj["terms"])
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad terms: {exc}") from exc
        return cls(B, terms, bool(obj.get("full", False)))


def to_orthogonal(a: FlatElem, full: bool = True) -> OrthDecomp:
    """Terms ri (ei ^ e(i+1)*), listed from the top of the chain down."""
    B = a.carrier
    chain = a.chain + [B.zero]
    terms = []
    for i in range(len(a.steps) - 1, -1, -1):
        r = a.steps[i][0]
        cell = B.meet(chain[i], B.comp(chain[i + 1]))
        if r == 0 and not full:
            continue
        terms.append((r, cell))
    return OrthDecomp(B, tuple(terms), full)


def to_decreasing(d: OrthDecomp) -> FlatElem:
    B = d.carrier
    terms = [(q(r), e) for r, e in d.terms if e != B.zero]
    for i, (_, e) in enumerate(terms):
        for _, f in terms[i + 1:]:
            if B.meet(e, f) != B.zero:
                raise InputError("decomposition terms overlap")
    cover = B.zero
    for _, e in terms:
        cover = B.join(cover, e)
    if cover != B.one:
        terms.append((Fraction(0), B.comp(cover)))
    by_value: dict = {}
    for r, e in terms:
        by_value[r] = B.join(by_value.get(r, B.zero), e)
    rs = sorted(by_value)
    steps = []
    above = B.zero
    tails = []
    for r in reversed(rs):
        above = B.join(above, by_value[r])
        tails.append((r, above))
    steps = list(reversed(tails))
    return FlatElem(B, tuple(steps)) if B.one != B.zero else FlatElem(B, ())


def decreasing_form(a: FlatElem) -> tuple[Fraction, list]:
    """(r0, [(coefficient, ei), ...]) with a = r0 + sum coefficient * ei and positive coefficients."""
    if not a.steps:
        return Fraction(0), []
    r0 = a.steps[0][0]
    terms = [(a.steps[i][0] - a.steps[i - 1][0], a.steps[i][1]) for i in range(1, len(a.steps))]
    return r0, terms


def compatible_forms(a: FlatElem, b: FlatElem):
    """Common thresholds r0 < ... < rn and the chains ei = a(ri), fi = b(ri)."""
    _same_carrier(a, b)
    ts = sorted(set(a.thresholds) | set(b.thresholds))
    return ts, [evaluate(a, t) for t in ts], [evaluate(b, t) for t in ts]


def from_decreasing(B, r0: Fraction, terms: Iterable[tuple]) -> FlatElem:
    """r0 + sum c e-flat, assembled with the algebra operations."""
    out = const(B, r0)
    for c, e in terms:
        out = add(out, scale(c, idem(B, e)))
    return out


class IdentityViolation(AssertionError):
    pass


def truncation_identity(a: FlatElem, i: int) -> FlatElem:
    """[(a - p(i-1)) ^ ri] v 0 computed with flat operations; checked against ri ei."""
    B = a.carrier
    if not 1 <= i < len(a.steps):
        raise IndexError(f"term index {i} out of range")
    p_prev = a.steps[i - 1][0]
    r_i = a.steps[i][0] - p_prev
    lhs = join(meet(add(a, const(B, -p_prev)), const(B, r_i)), zero(B))
    rhs = scale(r_i, idem(B, a.steps[i][1]))
    if lhs != rhs:
        raise IdentityViolation(f"truncation identity fails at index {i}")
    return lhs


def truncation_terms(a: FlatElem) -> list[FlatElem]:
    return [truncation_identity(a, i) for i in range(1, len(a.steps))]


def band_identity(a: FlatElem, r: Fraction, p: Fraction) -> bool:
    """(a ^ p) - (a ^ r) == [(a - r) ^ (p - r)] v 0 for r < p."""
    B = a.carrier
    r, p = q(r), q(p)
    if not r < p:
        raise ValueError("need r < p")
    lhs = add(meet(a, const(B, p)), neg(meet(a, const(B, r))))
    rhs = join(meet(add(a, const(B, -r)), const(B, p - r)), zero(B))
    return lhs == rhs


class NotInvertible(ArithmeticError):
    pass


def invert(a: FlatElem) -> FlatElem:
    """Inverse via reciprocal coefficients of the full orthogonal form."""
    d = to_orthogonal(a, full=True)
    if any(r == 0 for r, _ in d.terms):
        raise NotInvertible("element vanishes on a nonzero idempotent")
    return to_decreasing(OrthDecomp(d.carrier, tuple((1 / r, e) for r, e in d.terms), True))


def is_invertible(a: FlatElem) -> bool:
    return all(r != 0 for r, _ in to_orthogonal(a, full=True).terms)


def annihilator(gens: Sequence[FlatElem], B=None) -> FlatElem:
    """Idempotent generating {x : x g = 0 for every generator g}."""
    if B is None:
        if not gens:
            raise InputError("carrier needed for an empty generator list")
        B = gens[0].carrier
    s = B.zero
    for g in gens:
        if g.carrier != B:
            raise InputError("generators live over different carriers")
        s = B.join(s, support(g))
    return idem(B, B.comp(s))


# ---------------------------------------------------------------- proximity

def lift_proximity(rel: ProximityRel) -> Callable[[FlatElem, FlatElem], bool]:
    """a < b in the flat algebra iff a(r) < b(r) for every r."""
    B = rel.carrier

    def decide(a: FlatElem, b: FlatElem) -> bool:
        ts = sorted(set(a.thresholds) | set(b.thresholds))
        if not ts:
            return rel(B.one, B.one)
        probes = [ts[0] - 1] + ts + [(x + y) / 2 for x, y in zip(ts, ts[1:])] + [ts[-1] + 1]
        return all(rel(evaluate(a, t), evaluate(b, t)) for t in probes)

    return decide


def random_chain(B, rng: random.Random, length: int) -> list:
    chain = [B.one]
    for _ in range(length):
        nxt = B.meet(chain[-1], B.random(rng))
        if nxt == B.zero or nxt == chain[-1]:
            break
        chain.append(nxt)
    return chain


def random_thresholds(rng: random.Random, k: int, lo: int = -3, hi: int = 3,
                      denoms: Sequence[int] = (1, 2, 3, 4)) -> list[Fraction]:
    pool = set()
    while len(pool) < k:
        d = rng.choice(denoms)
        pool.add(Fraction(rng.randint(lo * d, hi * d), d))
    return sorted(pool)


def random_flat(B, rng: random.Random, max_steps: int = 4, **kw) -> FlatElem:
    if B.one == B.zero:
        return FlatElem(B, ())
    chain = random_chain(B, rng, rng.randint(0, max_steps - 1))
    ts = random_thresholds(rng, len(chain), **kw)
    return FlatElem(B, tuple(zip(ts, chain)))


class FlatAlgebra:
    """A flat algebra together with the proximity lifted from its carrier."""

    kind = "flat"

    def __init__(self, B, rel: Optional[ProximityRel] = None):
        self.carrier = B
        self.base = rel or order_rel(B)
        self.rel = lift_proximity(self.base)

    @property
    def name(self) -> str:
        return f"flat-over-{self.carrier.name.split(':')[0]}"

    def const(self, c) -> FlatElem:
        return const(self.carrier, c)

    add = staticmethod(add)
    neg = staticmethod(neg)
    mul = staticmethod(mul)
    meet = staticmethod(meet)
    join = staticmethod(join)
    leq = staticmethod(leq)

    def scale(self, s, a):
        return scale(s, a)

    def encode(self, a: FlatElem):
        return a.to_json()

    def decode(self, obj) -> FlatElem:
        a = FlatElem.from_json(obj)
        if a.carrier != self.carrier:
            raise InputError("element carrier does not match the algebra")
        return a

    def random(self, rng: random.Random) -> FlatElem:
        return random_flat(self.carrier, rng)

    def related_pair(self, rng: random.Random):
        """A pair likely to be related: b random, a built threshold-wise below b."""
        B, base = self.carrier, self.base
        b = self.random(rng)
        if base.inner is None:
            return self.random(rng), b
        ts = sorted(set(b.thresholds) | set(random_thresholds(rng, rng.randint(1, 3))))
        if rng.random() < 0.5:
            shift = Fraction(rng.randint(0, 4), 4)
            ts = sorted({t - shift for t in ts})
        chain = random_chain(B, rng, len(ts) + 1) + [B.zero] * len(ts)

        def value(t):
            k = bisect.bisect_left(ts, t)
            return B.meet(base.inner(evaluate(b, t)), chain[k])

        return _from_samples(B, ts, value), b

    def interpolant(self, a: FlatElem, b: FlatElem) -> Optional[FlatElem]:
        """Threshold-wise interpolation; the carrier interpolant must be monotone."""
        B, base = self.carrier, self.base
        ts = sorted(set(a.thresholds) | set(b.thresholds))
        if not ts:
            return a
        vals = [base.interpolant(evaluate(a, t), evaluate(b, t)) for t in ts]
        if any(v is None for v in vals) or vals[0] != B.one:
            return None
        if any(not B.leq(y, x) for x, y in zip(vals, vals[1:])):
            return None
        return _from_samples(B, ts, dict(zip(ts, vals)).__getitem__)

    def positive_below(self, a: FlatElem) -> Optional[FlatElem]:
        """Some 0 < b related to a, shrinking the top support of a."""
        B = self.carrier
        if not a.steps or a.steps[-1][0] <= 0:
            return None
        r, e = a.steps[-1]
        w = self.base.nonzero_below(e)
        if w is None:
            return None
        return scale(r, idem(B, w))


# ---------------------------------------------------------------- proximity axioms

AXIOMS_P = ("P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "P10")


def _is_pos(alg, a) -> bool:
    z = alg.const(0)
    return alg.leq(z, a) and a != z


def check_proximity(alg, rel: Optional[Callable] = None, seed: int = 0, samples: int = 100,
                    collect_all: bool = False, replay: Optional[dict] = None) -> Verdict:
    """Seeded check of (P1)-(P10) for a relation on an algebra handle.

    The existential axioms use the algebra's witness constructions
    (``interpolant`` and ``positive_below``); a missing witness counts as a
    failure of the axiom.
    """
    rel = rel or alg.rel
    if replay is not None:
        return _replay_proximity(alg, rel, replay, seed)
    rng = random.Random(seed)
    enc = alg.encode
    stats = {"mode": "sampled", "samples": samples, "nontrivial": 0}

    def related():
        return alg.related_pair(rng) if rng.random() < 0.75 else (alg.random(rng), alg.random(rng))

    def draw(n):
        return [related() for _ in range(n)]

    pairs = draw(samples)
    z, u = alg.const(0), alg.const(1)

    def hit():
        stats["nontrivial"] += 1

    def p1():
        if not rel(z, z):
            raise Failure("P1", {"a": enc(z), "b": enc(z)})
        if not rel(u, u):
            raise Failure("P1", {"a": enc(u), "b": enc(u)})

    def p2():
        for a, b in pairs:
            if rel(a, b):
                hit()
                if not alg.leq(a, b):
                    raise Failure("P2", {"a": enc(a), "b": enc(b)})

    def p3():
        for b, c in pairs:
            if not rel(b, c):
                continue
            hit()
            a = alg.meet(b, alg.random(rng))
            d = alg.join(c, alg.random(rng))
            if not rel(a, d):
                raise Failure("P3", {"a": enc(a), "b": enc(b), "c": enc(c), "d": enc(d)})

    def p4():
        for (a, b), (a2, c) in zip(pairs, draw(len(pairs))):
            x = alg.meet(a, a2)
            if rel(x, b) and rel(x, c):
                hit()
                if not rel(x, alg.meet(b, c)):
                    raise Failure("P4", {"a": enc(x), "b": enc(b), "c": enc(c)})

    def p5():
        for a, b in pairs:
            if rel(a, b):
                hit()
                if not rel(alg.neg(b), alg.neg(a)):
                    raise Failure("P5", {"a": enc(a), "b": enc(b)})

    def p6():
        for (a, b), (c, d) in zip(pairs, draw(len(pairs))):
            if rel(a, b) and rel(c, d):
                hit()
                if not rel(alg.add(a, c), alg.add(b, d)):
                    raise Failure("P6", {"a": enc(a), "b": enc(b), "c": enc(c), "d": enc(d)})

    def p7():
        for a, b in pairs:
            if rel(a, b):
                hit()
                s = Fraction(rng.randint(1, 12), rng.randint(1, 4))
                if not rel(alg.scale(s, a), alg.scale(s, b)):
                    raise Failure("P7", {"a": enc(a), "b": enc(b), "r": fmt_q(s)})

    def lift_nonneg(a, b):
        # shift a related pair so both members are nonnegative
        lo = min(_min_value(alg, a), _min_value(alg, b))
        if lo >= 0:
            return a, b
        return alg.add(a, alg.const(-lo)), alg.add(b, alg.const(-lo))

    def p8():
        for (a, b), (c, d) in zip(pairs, draw(len(pairs))):
            a, b = lift_nonneg(a, b)
            c, d = lift_nonneg(c, d)
            if rel(a, b) and rel(c, d):
                hit()
                if not rel(alg.mul(a, c), alg.mul(b, d)):
                    raise Failure("P8", {"a": enc(a), "b": enc(b), "c": enc(c), "d": enc(d)})

    def p9():
        for a, b in pairs:
            if rel(a, b):
                hit()
                c = alg.interpolant(a, b)
                if c is None or not (rel(a, c) and rel(c, b)):
                    raise Failure("P9", {"a": enc(a), "b": enc(b)})

    def p10():
        for _, b in pairs:
            b = alg.join(b, z)
            if _is_pos(alg, b):
                hit()
                if _positive_witness(alg, rel, b) is None:
                    raise Failure("P10", {"a": enc(b)})

    axioms = zip(AXIOMS_P, (p1, p2, p3, p4, p5, p6, p7, p8, p9, p10))
    failures = []
    for _, check in axioms:
        try:
            check()
        except Failure as f:
            cx = dict(f.counterexample, axiom=f.axiom)
            failures.append(cx)
            if not collect_all:
                break
    if not failures:
        return Verdict("pass", seed=seed, stats=stats)
    if collect_all:
        stats["failed"] = [f["axiom"] for f in failures]
    return Verdict("fail", failures[0]["axiom"], failures[0], seed, stats)


def _positive_witness(alg, rel, a):
    # the shrunken support first, then a itself
    for w in (alg.positive_below(a), a):
        if w is not None and _is_pos(alg, w) and rel(w, a):
            return w
    return None


def _min_value(alg, a) -> Fraction:
    if isinstance(a, FlatElem):
        return a.steps[0][0] if a.steps else Fraction(0)
    return a.min_value()


def _replay_proximity(alg, rel, cx: dict, seed: int) -> Verdict:
    """Re-decide a single recorded axiom instance."""
    axiom = cx.get("axiom")
    get = {k: alg.decode(v) for k, v in cx.items() if k in "abcd"}
    a, b, c, d = (get.get(k) for k in "abcd")
    z, u = alg.const(0), alg.const(1)
    if axiom == "P1":
        bad = not (rel(z, z) and rel(u, u))
    elif axiom == "P2":
        bad = rel(a, b) and not alg.leq(a, b)
    elif axiom == "P3":
        bad = alg.leq(a, b) and rel(b, c) and alg.leq(c, d) and not rel(a, d)
    elif axiom == "P4":
        bad = rel(a, b) and rel(a, c) and not rel(a, alg.meet(b, c))
    elif axiom == "P5":
        bad = rel(a, b) and not rel(alg.neg(b), alg.neg(a))
    elif axiom == "P6":
        bad = rel(a, b) and rel(c, d) and not rel(alg.add(a, c), alg.add(b, d))
    elif axiom == "P7":
        s = q(cx["r"])
        bad = rel(a, b) and not rel(alg.scale(s, a), alg.scale(s, b))
    elif axiom == "P8":
        bad = rel(a, b) and rel(c, d) and not rel(alg.mul(a, c), alg.mul(b, d))
    elif axiom == "P9":
        w = alg.interpolant(a, b) if rel(a, b) else None
        bad = rel(a, b) and (w is None or not (rel(a, w) and rel(w, b)))
    elif axiom == "P10":
        bad = _is_pos(alg, a) and _positive_witness(alg, rel, a) is None
    else:
        raise InputError(f"cannot replay axiom {axiom!r}")
    if bad:
        return Verdict("fail", axiom, cx, seed, {"mode": "replay"})
    return Verdict("pass", seed=seed, stats={"mode": "replay"})
