"""Idempotent restriction, the flat functor, lifted morphisms and their checks.

A weak proximity morphism between flat algebras is generated by a map on
idempotents: a = r0 + sum ci ei goes to r0 + sum ci sigma(ei).  The checkers
here test the weak axioms, the full axioms and the inequalities that link
them, on seeded probes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from . import core, normal, specker
from .boolalg import (FinBA, MorphismTable, ProximityRel, RegOpenAlgebra, check_de_vries,
                      check_de_vries_morphism, check_join_inequality, closure_rel, order_rel)
from .core import fmt_q
from .specker import FlatAlgebra, FlatElem
from .verdict import Failure, InputError, UndecidableAtDeskScale, Verdict


@dataclass
class ProxAlgebra:
    kind: str
    algebra: Any
    verdict: Optional[Verdict] = None

    @property
    def rel(self):
        return self.algebra.rel


def flat_algebra(B, rel: Optional[ProximityRel] = None) -> ProxAlgebra:
    alg = FlatAlgebra(B, rel)
    kind = "flat-over-regopen" if isinstance(B, RegOpenAlgebra) else "flat-over-finba"
    return ProxAlgebra(kind, alg)


def stepfn_algebra() -> ProxAlgebra:
    return ProxAlgebra("stepfn", normal.StepAlgebra())


def functor_id(A: ProxAlgebra):
    """The idempotents of A with the restricted proximity."""
    alg = A.algebra
    if A.kind == "stepfn":
        base = closure_rel()

        def decide(u, v):
            return normal.kt_proximity(normal.chi(u), normal.chi(v))

        return base.carrier, ProximityRel(base.carrier, decide, "restricted",
                                          interp=base.interp, inner=base.inner)
    B = alg.carrier

    def decide(e, f):
        return alg.rel(specker.idem(B, e), specker.idem(B, f))

    base = alg.base
    table = None
    if B.finite:
        table = frozenset((e, f) for e in B.elements() for f in B.elements() if decide(e, f))
    return B, ProximityRel(B, decide, "restricted", table, interp=base.interp, inner=base.inner)


def functor_sp(B, rel: ProximityRel, check: bool = False, seed: int = 0) -> ProxAlgebra:
    A = flat_algebra(B, rel)
    if check:
        A.verdict = check_de_vries(rel, seed=seed)
    return A


def flat_stepfn_iso(direction: str, x):
    """Flat elements over the regular opens of [0,1] versus normal step functions."""
    if direction == "to-stepfn":
        if not isinstance(x, FlatElem) or not isinstance(x.carrier, RegOpenAlgebra):
            raise InputError("expected a flat element over regopen")
        return normal.from_flat(x)
    if direction == "to-flat":
        return normal.to_flat(x)
    raise InputError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------- morphisms

class MorphismAxiomError(ValueError):
    def __init__(self, verdict: Verdict):
        super().__init__(f"not a de Vries morphism: {verdict.axiom_id}")
        self.verdict = verdict
        self.axiom_id = verdict.axiom_id


@dataclass
class WeakProxMorphism:
    source: FlatAlgebra
    target: FlatAlgebra
    sigma: Callable
    table: Optional[MorphismTable] = None
    name: str = "lifted"
    _cache: dict = field(default_factory=dict, repr=False)

    def on_idempotent(self, e):
        if e not in self._cache:
            self._cache[e] = self.sigma(e)
        return self._cache[e]

    def __call__(self, a: FlatElem) -> FlatElem:
        """r0 + sum ci ei  ->  r0 + sum ci sigma(ei)."""
        r0, terms = specker.decreasing_form(a)
        B = self.target.carrier
        images = [self.on_idempotent(e) for _, e in terms]
        if all(B.leq(y, x) for x, y in zip([B.one] + images, images)):
            # a decreasing image chain lands directly in canonical form
            ps, p = [r0], r0
            for c, _ in terms:
                p += c
                ps.append(p)
            return specker._canonical(B, ps, [B.one] + images)
        return specker.from_decreasing(B, r0, [(c, y) for (c, _), y in zip(terms, images)])

    def threshold_wise(self, a: FlatElem) -> FlatElem:
        """sigma applied to every value of a; agrees with the call for de Vries sigma."""
        B = self.target.carrier
        values = dict((r, self.on_idempotent(e)) for r, e in a.steps)
        return specker._from_samples(B, a.thresholds, values.__getitem__)


def lift_morphism(sigma: MorphismTable, rel_src: Optional[ProximityRel] = None,
                  rel_tgt: Optional[ProximityRel] = None) -> WeakProxMorphism:
    rel_src = rel_src or order_rel(sigma.source)
    rel_tgt = rel_tgt or order_rel(sigma.target)
    v = check_de_vries_morphism(sigma, rel_src, rel_tgt)
    if not v.ok:
        raise MorphismAxiomError(v)
    return WeakProxMorphism(FlatAlgebra(sigma.source, rel_src), FlatAlgebra(sigma.target, rel_tgt),
                            sigma, sigma)


def unchecked_morphism(sigma: MorphismTable, rel_src: Optional[ProximityRel] = None,
                       rel_tgt: Optional[ProximityRel] = None) -> WeakProxMorphism:
    """Extension of an arbitrary table, for counterexample hunting only."""
    return WeakProxMorphism(FlatAlgebra(sigma.source, rel_src), FlatAlgebra(sigma.target, rel_tgt),
                            sigma, sigma, name="unchecked")


def identity_morphism(alg: FlatAlgebra) -> WeakProxMorphism:
    table = MorphismTable.identity(alg.carrier) if alg.carrier.finite else None
    return WeakProxMorphism(alg, alg, lambda e: e, table, name="identity")


def point_evaluation(p: Fraction) -> WeakProxMorphism:
    """The morphism RO[0,1] -> 2 sending U to 1 iff p lies in U."""
    p = Fraction(p)
    src = FlatAlgebra(RegOpenAlgebra(), closure_rel())
    two = FinBA(1)
    return WeakProxMorphism(src, FlatAlgebra(two), lambda u: 1 if p in u else 0,
                            name=f"eval@{fmt_q(p)}")


def reflexive(alg, a) -> bool:
    return alg.rel(a, a)


def _approximants(alg: FlatAlgebra, s: FlatElem, depth: int = 16):
    """Elements well below s: s itself when reflexive, else threshold-wise erosions."""
    if reflexive(alg, s):
        yield s
        return
    B = alg.carrier
    if not isinstance(B, RegOpenAlgebra):
        return
    for k in range(1, depth + 1):
        delta = Fraction(1, 2 ** k)
        t = specker._from_samples(B, s.thresholds,
                                  lambda r: core.erode(specker.evaluate(s, r), delta))
        if t.steps and t.steps[0][1] == B.one and alg.rel(t, s):
            yield t


def star_join(alpha2: WeakProxMorphism, alpha1: WeakProxMorphism, s: FlatElem) -> FlatElem:
    """Join of alpha2(alpha1(t)) over t well below s, when some t attains the upper bound."""
    bound = alpha2(alpha1(s))
    for t in _approximants(alpha1.source, s):
        if alpha2(alpha1(t)) == bound:
            return bound
    raise UndecidableAtDeskScale("the defining join is not attained by any tested approximant")


def star_compose_weak(alpha2: WeakProxMorphism, alpha1: WeakProxMorphism) -> WeakProxMorphism:
    if alpha1.target.carrier != alpha2.source.carrier:
        raise InputError("morphisms are not composable")
    src, tgt = alpha1.source, alpha2.target
    B = src.carrier

    def sigma(e):
        image = star_join(alpha2, alpha1, specker.idem(B, e))
        part = specker.idempotent_part(image)
        if part is None:
            raise AssertionError("composite sent an idempotent to a non-idempotent")
        return part

    table = None
    if B.finite:
        table = MorphismTable.from_function(B, tgt.carrier, sigma)
    return WeakProxMorphism(src, tgt, table if table is not None else sigma, table, name="star")


def restrict(alpha: WeakProxMorphism) -> MorphismTable:
    """The idempotent table of a morphism between finite flat algebras."""
    B = alpha.source.carrier

    def fn(e):
        part = specker.idempotent_part(alpha(specker.idem(B, e)))
        if part is None:
            raise AssertionError("idempotent mapped to a non-idempotent")
        return part

    return MorphismTable.from_function(B, alpha.target.carrier, fn)


# ---------------------------------------------------------------- axiom suites

WEAK_AXIOMS = ("PM1", "PM2", "PM3", "PM4", "PM5", "PM6'", "PM7'")
FULL_AXIOMS = ("PM6", "PM7", "PM8", "SUBADD", "SUBMUL", "JOIN", "INVERSE", "JOINBOUND",
               "SUMBOUND", "MULBOUND")


def _nonneg(a: FlatElem) -> FlatElem:
    lo = a.steps[0][0] if a.steps else Fraction(0)
    return a if lo >= 0 else specker.add(a, specker.const(a.carrier, -lo))


def _probes(src: FlatAlgebra, rng: random.Random, n: int):
    for _ in range(n):
        a, b = src.random(rng), src.random(rng)
        lo, hi = src.related_pair(rng)
        yield a, b, lo, hi


class _Suite:
    def __init__(self, alpha: WeakProxMorphism, seed: int):
        self.alpha = alpha
        self.seed = seed
        self.stats = {"probes": 0, "instances": 0, "open_joins": 0}

    def enc(self, a) -> Any:
        return a.to_json() if isinstance(a, FlatElem) else a

    def expect(self, cond: bool, axiom: str, **elems):
        self.stats["instances"] += 1
        if not cond:
            raise Failure(axiom, {k: self.enc(v) for k, v in elems.items()})


def _weak_checks(s: _Suite, a, b, lo, hi):
    alpha = s.alpha
    src, tgt = alpha.source, alpha.target
    A, B = src.carrier, tgt.carrier
    c = specker.const
    s.expect(alpha(c(A, 0)) == c(B, 0) and alpha(c(A, 1)) == c(B, 1), "PM1")
    s.expect(alpha(specker.meet(a, b)) == specker.meet(alpha(a), alpha(b)), "PM2", a=a, b=b)
    if src.rel(lo, hi):
        s.expect(tgt.rel(specker.neg(alpha(specker.neg(lo))), alpha(hi)), "PM3", a=lo, b=hi)
        # alpha(hi) bounds the join from above
        s.expect(specker.leq(alpha(lo), alpha(hi)), "PM4", a=lo, b=hi)
    # the join is attained when some t well below b already has alpha(t) = alpha(b)
    target = alpha(b)
    if not any(alpha(t) == target for t in _approximants(src, b)):
        s.stats["open_joins"] += 1
    r = Fraction(1 + s.stats["probes"] % 5, 1 + s.stats["probes"] % 3)
    s.expect(alpha(specker.scale(r, a)) == specker.scale(r, alpha(a)), "PM5", a=a, r=fmt_q(r))
    k = c(A, r - 1)
    s.expect(alpha(specker.join(a, k)) == specker.join(alpha(a), c(B, r - 1)), "PM6'",
             a=a, r=fmt_q(r - 1))
    s.expect(alpha(specker.add(a, k)) == specker.add(alpha(a), c(B, r - 1)), "PM7'",
             a=a, r=fmt_q(r - 1))


def _full_checks(s: _Suite, a, b, lo, hi):
    alpha = s.alpha
    src = alpha.source
    A, B = src.carrier, alpha.target.carrier
    sp = specker
    if reflexive(src, b):
        s.expect(alpha(sp.join(a, b)) == sp.join(alpha(a), alpha(b)), "PM6", a=a, c=b)
        s.expect(alpha(sp.add(a, b)) == sp.add(alpha(a), alpha(b)), "PM7", a=a, c=b)
        cb = _nonneg(b)
        s.expect(alpha(sp.mul(cb, a)) == sp.mul(alpha(cb), alpha(a)), "PM8", a=a, c=cb)
    s.expect(sp.leq(sp.add(alpha(a), alpha(b)), alpha(sp.add(a, b))), "SUBADD", a=a, b=b)
    pa, pb = _nonneg(a), _nonneg(b)
    s.expect(sp.leq(sp.mul(alpha(pa), alpha(pb)), alpha(sp.mul(pa, pb))), "SUBMUL", a=pa, b=pb)
    if src.rel(lo, hi):
        s.expect(sp.leq(alpha(sp.join(a, lo)), sp.join(alpha(a), alpha(hi))), "JOINBOUND",
                 a=a, b=lo, c=hi)
        s.expect(sp.leq(alpha(sp.add(a, lo)), sp.add(alpha(a), alpha(hi))), "SUMBOUND",
                 a=a, b=lo, c=hi)
    shift = max(Fraction(0), -min(_lowest(lo), _lowest(hi)))
    plo = sp.add(lo, sp.const(A, shift))
    phi = sp.add(hi, sp.const(A, shift))
    if src.rel(plo, phi):
        s.expect(sp.leq(alpha(sp.mul(pa, plo)), sp.mul(alpha(pa), alpha(phi))), "MULBOUND",
                 a=pa, b=plo, c=phi)
        binv = sp.add(plo, sp.const(A, Fraction(1, 2)))
        cinv = sp.add(phi, sp.const(A, Fraction(1, 2)))
        if src.rel(binv, cinv):
            v = inverse_monotone(alpha, binv, cinv)
            s.expect(v.ok, "INVERSE", b=binv, c=cinv)


def _lowest(a: FlatElem) -> Fraction:
    return a.steps[0][0] if a.steps else Fraction(0)


def _run(alpha, seed, probes, checks, extra=None) -> Verdict:
    s = _Suite(alpha, seed)
    rng = random.Random(seed)
    try:
        if extra is not None:
            extra(s)
        for a, b, lo, hi in _probes(alpha.source, rng, probes):
            s.stats["probes"] += 1
            for check in checks:
                check(s, a, b, lo, hi)
    except Failure as f:
        return Verdict("fail", f.axiom, dict(f.counterexample, axiom=f.axiom), seed, s.stats)
    if s.stats["open_joins"] and not alpha.source.carrier.finite:
        return Verdict("undecidable", "PM4", None, seed, s.stats)
    return Verdict("pass", seed=seed, stats=s.stats)


def check_weak_morphism(alpha: WeakProxMorphism, probes: int = 200, seed: int = 0) -> Verdict:
    """(PM1)-(PM5), (PM6') and (PM7') on seeded probes."""
    return _run(alpha, seed, probes, [_weak_checks])


def verify_full_morphism(alpha: WeakProxMorphism, probes: int = 200, seed: int = 0) -> Verdict:
    """Weak axioms, then (PM6)-(PM8) and the inequalities tying a morphism to its proximity."""

    def join_ineq(s: _Suite):
        if alpha.table is not None:
            v = check_join_inequality(alpha.table, alpha.source.base)
            s.stats["instances"] += v.stats.get("instances", 0)
            if not v.ok:
                raise Failure("JOIN", v.counterexample)

    weak = check_weak_morphism(alpha, probes, seed)
    if weak.status == "fail":
        return weak
    # same seed, so the second pass sees the probes the weak pass accepted
    full = _run(alpha, seed, probes, [_full_checks], join_ineq)
    if full.status == "fail":
        return full
    stats = {k: weak.stats.get(k, 0) + full.stats.get(k, 0) for k in weak.stats}
    stats["probes"] = probes
    return Verdict(weak.status, weak.axiom_id, None, seed, stats)


def inverse_monotone(alpha: WeakProxMorphism, b: FlatElem, c: FlatElem) -> Verdict:
    """For 0 <= b << c with b invertible: alpha(c) is invertible, alpha(c)^-1 <= alpha(b^-1)."""
    src = alpha.source
    if not (specker.is_nonneg(b) and src.rel(b, c) and specker.is_invertible(b)):
        raise InputError("need 0 <= b well below c with b invertible")
    ac = alpha(c)
    cx = {"b": b.to_json(), "c": c.to_json(), "axiom": "INVERSE"}
    if not specker.is_invertible(ac):
        return Verdict("fail", "INVERSE", cx)
    if not specker.leq(specker.invert(ac), alpha(specker.invert(b))):
        return Verdict("fail", "INVERSE", cx)
    return Verdict("pass")


# ---------------------------------------------------------------- round trips

def roundtrip_id_sp(B, rel: ProximityRel, seed: int = 0, samples: int = 200) -> Verdict:
    """e < f iff e-flat < f-flat, and e -> e-flat hits exactly the idempotents."""
    A = functor_sp(B, rel)
    _, restricted = functor_id(A)
    if B.finite:
        pairs = [(e, f) for e in B.elements() for f in B.elements()]
    else:
        rng = random.Random(seed)
        pairs = []
        for _ in range(samples):
            f = B.random(rng)
            e = B.meet(rel.inner(f), B.random(rng)) if rng.random() < 0.5 else B.random(rng)
            pairs.append((e, f))
    for e, f in pairs:
        if rel(e, f) != restricted(e, f):
            cx = {"axiom": "ROUNDTRIP", "e": B.encode(e), "f": B.encode(f)}
            return Verdict("fail", "ROUNDTRIP", cx, seed)
        x = specker.idem(B, e)
        if specker.mul(x, x) != x or specker.idempotent_part(x) != e:
            cx = {"axiom": "IDEMPOTENT", "e": B.encode(e)}
            return Verdict("fail", "IDEMPOTENT", cx, seed)
    return Verdict("pass", seed=seed, stats={"pairs": len(pairs)})


def roundtrip_fn(seed: int = 0, samples: int = 200) -> Verdict:
    """Flat algebra over RO[0,1] versus normal step functions: bijective, homomorphic,
    proximity preserving and reflecting."""
    rng = random.Random(seed)
    FA = FlatAlgebra(RegOpenAlgebra(), closure_rel())
    to_s, to_f = normal.from_flat, normal.to_flat
    for i in range(samples):
        f, g = normal.random_stepfn(rng), normal.random_stepfn(rng)
        if rng.random() < 0.5:
            g = normal.dilate(f, rng)
        a, b = to_f(f), to_f(g)
        r = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        checks = {
            "BIJECTIVE": to_s(a) == f and to_f(to_s(a)) == a,
            "ADD": to_s(specker.add(a, b)) == normal.add(f, g),
            "MEET": to_s(specker.meet(a, b)) == normal.meet(f, g),
            "JOIN": to_s(specker.join(a, b)) == normal.join(f, g),
            "SCALAR": to_s(specker.scale(r, a)) == normal.scale(r, f),
            "PROXIMITY": FA.rel(a, b) == normal.threshold_proximity(f, g),
        }
        pa, pb = _nonneg(a), _nonneg(b)
        checks["MUL"] = to_s(specker.mul(pa, pb)) == normal.mul(to_s(pa), to_s(pb))
        for name, ok in checks.items():
            if not ok:
                cx = {"axiom": name, "f": f.to_json(), "g": g.to_json(), "r": fmt_q(r)}
                return Verdict("fail", name, cx, seed, {"probes": i + 1})
    return Verdict("pass", seed=seed, stats={"probes": samples})
