"""Annihilator ideals and the well-inside relation between principal ideals.

For idempotents e, f the ideal Ann(eD) + fD is everything exactly when some
reflexive a satisfies e <= a <= f.  Each decision below produces either
such an a or a point (or atom) that rules every candidate out.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from . import core, normal, specker
from .boolalg import FinBA, RegOpenAlgebra
from .normal import PL, StepFn
from .specker import FlatElem
from .verdict import InputError

MODELS = ("stepfn", "flat-regopen", "flat-finba")


def _step_region(e) -> core.RegOpen:
    if not normal.is_idempotent(e):
        raise InputError("argument is not an idempotent")
    return normal.region(e)


def _flat_part(e: FlatElem):
    part = specker.idempotent_part(e)
    if part is None:
        raise InputError("argument is not an idempotent")
    return part


def ideal_witness(e, f, model: str = "stepfn"):
    """(True, a) with a reflexive and e <= a <= f, or (False, obstruction)."""
    if model == "flat-finba":
        u, v = _flat_part(e), _flat_part(f)
        B = e.carrier
        if not isinstance(B, FinBA):
            raise InputError("flat-finba model needs a finite carrier")
        if B.leq(u, v):
            return True, e
        return False, (u & ~v) & -(u & ~v)
    if model == "flat-regopen":
        if not isinstance(e.carrier, RegOpenAlgebra):
            raise InputError("flat-regopen model needs the regopen carrier")
        u, v = _flat_part(e), _flat_part(f)
    elif model == "stepfn":
        u, v = _step_region(e), _step_region(f)
    else:
        raise InputError(f"unknown model {model!r}")
    bad = core.escape_point(u, v)
    if bad is None:
        return True, normal.urysohn(u, v)
    return False, bad


def well_inside_ideals(e, f, model: str = "stepfn") -> bool:
    ok, w = ideal_witness(e, f, model)
    if model == "flat-finba":
        B = e.carrier
        if ok:
            # a = e works: e f = e, and 1 - e lies in Ann(eD) automatically
            assert specker.mul(e, f) == e
        else:
            assert B.leq(w, _flat_part(e)) and not B.leq(w, _flat_part(f))
        return ok
    if model == "flat-regopen":
        e, f = normal.chi(_flat_part(e)), normal.chi(_flat_part(f))
    if ok:
        co = normal.chi(core.complement(normal.region(e)))
        one_minus = PL(w.xs, tuple(1 - y for y in w.ys))
        assert all(0 <= y <= 1 for y in w.ys)
        assert normal.pl_vanishes_off(w, f), "witness must lie in fD"
        assert normal.pl_vanishes_off(one_minus, co), "1 - witness must annihilate e"
        return True
    # the point is in cl(supp e) (so any continuous a >= e is 1 there) and f is 0 there
    assert normal.value_at(normal.upper(e), w) == 1 and normal.value_at(f, w) == 0
    return False


# ---------------------------------------------------------------- cutoff and cover witnesses

def cutoff_witness(alg, a, f, eps: Fraction):
    """b = (a - eps)^- / eps: b (a - eps)^+ = 0 and 1 - b lies in the ideal f D."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    shifted = alg.add(a, alg.const(-eps))
    z = alg.const(0)
    pos = alg.join(shifted, z)
    negp = alg.join(alg.neg(shifted), z)
    b = alg.scale(1 / eps, negp)
    one_minus = alg.add(alg.const(1), alg.neg(b))
    ok = alg.mul(b, pos) == z and alg.mul(f, one_minus) == one_minus
    return ok, b


def cover_idempotent_flat(alg, a: FlatElem, f: FlatElem, eps: Fraction):
    """e = generator of Ann(Ann((a - eps)^+)); expect e < f and a <= e + eps."""
    B = a.carrier
    x = specker.join(specker.add(a, specker.const(B, -eps)), specker.zero(B))
    e = specker.annihilator([specker.annihilator([x])])
    ok = alg.rel(e, f) and specker.leq(a, specker.add(e, specker.const(B, eps)))
    return ok, e


def cover_idempotent_pl(a: PL, f: StepFn, eps: Fraction):
    """The same construction for a continuous a below an idempotent step function."""
    eps = Fraction(eps)
    x = a.map(lambda y: max(y - eps, Fraction(0)), eps)
    ann = core.complement(normal.pl_support(x))
    region = core.complement(ann)
    e = normal.chi(region)
    bound = normal.add(e, normal.const(eps))
    ok = normal.kt_proximity(e, f) and normal.pl_le_step(a, bound)
    return ok, e


def random_pl_below(f: StepFn, rng: random.Random) -> PL:
    """A continuous 0 <= a <= f for an idempotent f."""
    v = normal.region(f)
    w = core.erode(core.meet(v, core.random_regopen(rng)), Fraction(1, 64))
    h = normal.urysohn(w, v)
    t = Fraction(rng.randint(1, 8), 8)
    return PL(h.xs, tuple(t * y for y in h.ys))


def is_between(a: PL, f: StepFn) -> bool:
    return normal.step_le_pl(normal.const(0), a) and normal.pl_le_step(a, f)
