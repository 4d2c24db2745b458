import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given

from proxalg import boolalg, core, functors, normal, specker
from proxalg.boolalg import FinBA, MorphismTable, RegOpenAlgebra, order_rel
from proxalg.verdict import UndecidableAtDeskScale

from conftest import seeds

B1, B2 = FinBA(1), FinBA(2)
RO = RegOpenAlgebra()


def collapse():
    return boolalg.boolean_hom(B2, B1, (0,))


def tables(m, n):
    return boolalg.enumerate_morphisms(order_rel(FinBA(m)), order_rel(FinBA(n)))


def test_functor_id_on_flat_finba():
    B, rel = functors.functor_id(functors.flat_algebra(B2))
    assert B == B2 and rel.table == order_rel(B2).table
    assert boolalg.check_de_vries(rel).ok


def test_functor_id_on_stepfn():
    B, rel = functors.functor_id(functors.stepfn_algebra())
    assert isinstance(B, RegOpenAlgebra)
    assert boolalg.check_de_vries(rel, seed=1, samples=80).ok


def test_functor_id_of_trivial_algebra():
    B, rel = functors.functor_id(functors.flat_algebra(FinBA(0)))
    assert B.size == 1 and rel(0, 0)


def test_functor_sp():
    A = functors.functor_sp(B2, order_rel(B2), check=True)
    assert A.kind == "flat-over-finba" and A.verdict.ok
    Z = functors.functor_sp(FinBA(0), order_rel(FinBA(0)))
    assert Z.algebra.const(5) == specker.zero(FinBA(0))
    bad = functors.functor_sp(B2, boolalg.full_rel(B2), check=True)
    assert bad.verdict.axiom_id == "DV2"


def test_iso_examples():
    half = core.from_spans([(0, F(1, 2))])
    assert functors.flat_stepfn_iso("to-stepfn", specker.idem(RO, half)) == normal.chi(half)
    assert functors.flat_stepfn_iso("to-flat", normal.const(3)) == specker.const(RO, 3)
    with pytest.raises(functors.InputError):
        functors.flat_stepfn_iso("to-stepfn", specker.one(B2))


def test_lift_collapse_example():
    alpha = functors.lift_morphism(collapse())
    a = specker.make(B2, [(1, 3), (3, 1)])          # 1 + 2p
    assert alpha(a) == specker.const(B1, 3)
    assert alpha(a) == alpha.threshold_wise(a)


def test_lift_rejects_non_morphism():
    with pytest.raises(functors.MorphismAxiomError) as info:
        functors.lift_morphism(MorphismTable(B2, B2, (3, 3, 3, 3)))
    assert info.value.axiom_id == "M1"


def test_identity_lifts_to_identity():
    alpha = functors.lift_morphism(MorphismTable.identity(B2))
    rng = random.Random(0)
    for _ in range(50):
        a = specker.random_flat(B2, rng)
        assert alpha(a) == a


@given(seeds)
def test_decreasing_rule_matches_threshold_rule(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    sigma = boolalg.random_morphism(rng, FinBA(m), FinBA(n))
    alpha = functors.lift_morphism(sigma)
    a = specker.random_flat(FinBA(m), rng)
    r0, terms = specker.decreasing_form(a)
    expected = specker.from_decreasing(FinBA(n), r0, [(c, sigma(e)) for c, e in terms])
    assert alpha(a) == expected == alpha.threshold_wise(a)


def test_weak_axioms_on_small_tables():
    for m, n in itertools.product((1, 2), repeat=2):
        for i, s in enumerate(tables(m, n)):
            assert functors.check_weak_morphism(functors.lift_morphism(s), probes=60, seed=i).ok


def test_full_axioms_on_identity_and_collapse():
    for s in (MorphismTable.identity(B2), collapse()):
        v = functors.verify_full_morphism(functors.lift_morphism(s), probes=80)
        assert v.ok, v.dumps()


def test_non_morphism_gives_pm3_counterexample():
    s = MorphismTable(B2, B2, (0, 0, 0, 3))
    assert boolalg.check_de_vries_morphism(s, order_rel(B2), order_rel(B2)).axiom_id == "M3"
    v = functors.verify_full_morphism(functors.unchecked_morphism(s))
    assert v.status == "fail" and v.axiom_id == "PM3"
    a = specker.FlatElem.from_json(v.counterexample["a"])
    b = specker.FlatElem.from_json(v.counterexample["b"])
    alpha = functors.unchecked_morphism(s)
    assert not alpha.target.rel(specker.neg(alpha(specker.neg(a))), alpha(b))


def test_inverse_monotone_examples():
    alpha = functors.lift_morphism(collapse())
    one = specker.one(B2)
    assert functors.inverse_monotone(alpha, one, one).ok
    a = specker.make(B2, [(1, 3), (3, 1)])
    assert functors.inverse_monotone(alpha, a, a).ok
    with pytest.raises(functors.InputError):
        functors.inverse_monotone(alpha, specker.zero(B2), one)


@given(seeds)
def test_inverse_monotone_random(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 3), rng.randint(1, 3)
    alpha = functors.lift_morphism(boolalg.random_morphism(rng, FinBA(m), FinBA(n)))
    b = specker.random_flat(FinBA(m), rng, lo=1, hi=4)
    c = specker.join(b, specker.random_flat(FinBA(m), rng, lo=1, hi=4))
    assert functors.inverse_monotone(alpha, b, c).ok


def test_star_weak_agrees_with_tables():
    for i, j, k in itertools.product((1, 2), repeat=3):
        for s1 in tables(i, j):
            for s2 in tables(j, k):
                w = functors.star_compose_weak(functors.lift_morphism(s2), functors.lift_morphism(s1))
                assert w.table == boolalg.star_compose(s2, s1, order_rel(FinBA(i)))
                assert w.table == functors.restrict(w)


def test_star_identity_law_for_lifts():
    for s in tables(2, 1):
        alpha = functors.lift_morphism(s)
        ident = functors.lift_morphism(MorphismTable.identity(B2))
        assert functors.star_compose_weak(alpha, ident).table == s


def test_star_over_regopen():
    ident = functors.identity_morphism(specker.FlatAlgebra(RO, boolalg.closure_rel()))
    ev = functors.point_evaluation(F(1, 3))
    half = core.from_spans([(0, F(1, 2))])
    comp = functors.star_compose_weak(ev, ident)
    assert comp.on_idempotent(half) == 1
    assert comp.on_idempotent(core.from_spans([(F(1, 3), F(1, 2))])) == 0
    # the join reached through an interpolant chain matches
    w = core.interpolate(core.erode(half, F(1, 16)), half)
    assert ev.on_idempotent(w) == comp.on_idempotent(half)
    with pytest.raises(UndecidableAtDeskScale):
        functors.star_compose_weak(ident, ident).on_idempotent(half)


def test_point_evaluation_is_weak_morphism():
    v = functors.check_weak_morphism(functors.point_evaluation(F(1, 3)), probes=60)
    assert v.ok and v.stats["open_joins"] == 0


def test_identity_on_regopen_is_outside_decidable_fragment():
    ident = functors.identity_morphism(specker.FlatAlgebra(RO, boolalg.closure_rel()))
    assert functors.check_weak_morphism(ident, probes=30).status == "undecidable"


def test_roundtrips():
    for n in (1, 2, 3):
        assert functors.roundtrip_id_sp(FinBA(n), order_rel(FinBA(n))).ok
    assert functors.roundtrip_id_sp(RO, boolalg.closure_rel(), samples=200).ok
    assert functors.roundtrip_fn(seed=3, samples=150).ok
