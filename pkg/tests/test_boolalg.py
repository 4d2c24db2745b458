import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from proxalg import boolalg, core, normal
from proxalg.boolalg import FinBA, MorphismTable, order_rel

from conftest import regopens, seeds


def naive_de_vries(n_atoms, R):
    """The seven axioms read off literally, with plain set quantifiers."""
    one = (1 << n_atoms) - 1
    els = range(one + 1)
    rel = lambda a, b: (a, b) in R
    leq = lambda a, b: a & ~b == 0
    if not rel(one, one):
        return "DV1"
    if any(rel(a, b) and not leq(a, b) for a in els for b in els):
        return "DV2"
    for a, b, c, d in itertools.product(els, repeat=4):
        if leq(a, b) and rel(b, c) and leq(c, d) and not rel(a, d):
            return "DV3"
    for a, b, c in itertools.product(els, repeat=3):
        if rel(a, b) and rel(a, c) and not rel(a, b & c):
            return "DV4"
    if any(rel(a, b) and not rel(one ^ b, one ^ a) for a in els for b in els):
        return "DV5"
    for a, b in itertools.product(els, repeat=2):
        if rel(a, b) and not any(rel(a, c) and rel(c, b) for c in els):
            return "DV6"
    for a in els:
        if a and not any(b and rel(b, a) for b in els):
            return "DV7"
    return None


def test_order_is_de_vries_and_others_are_not():
    for n in (1, 2, 3):
        B = FinBA(n)
        assert boolalg.check_de_vries(order_rel(B)).ok
        assert boolalg.check_de_vries(boolalg.full_rel(B)).axiom_id == "DV2"


def test_top_only_relation_fails_dv3_first():
    B = FinBA(2)
    v = boolalg.check_de_vries(boolalg.table_rel(B, [[3, 3]]), collect_all=True)
    assert v.axiom_id == "DV3"
    assert v.stats["failed"] == ["DV3", "DV5", "DV7"]


def test_relation_scan_on_one_atom_matches_naive_oracle():
    B = FinBA(1)
    for bits in range(1 << 4):
        R = boolalg.relation_from_bits(B, bits)
        pairs = {(a, b) for a in range(2) for b in range(2) if R[a][b]}
        v = boolalg.check_de_vries_matrix(B, R)
        assert (v.axiom_id if not v.ok else None) == naive_de_vries(1, pairs)


@given(st.integers(0, (1 << 16) - 1))
def test_relation_scan_on_two_atoms_matches_naive_oracle(bits):
    B = FinBA(2)
    R = boolalg.relation_from_bits(B, bits)
    pairs = {(a, b) for a in range(4) for b in range(4) if R[a][b]}
    v = boolalg.check_de_vries_matrix(B, R)
    assert (v.axiom_id if not v.ok else None) == naive_de_vries(2, pairs)


def test_regopen_closure_passes_sampled_suite():
    v = boolalg.check_de_vries(boolalg.closure_rel(), seed=3, samples=150)
    assert v.ok and v.stats["nontrivial"] > 0


def test_regopen_equality_fails():
    v = boolalg.check_de_vries(boolalg.equality_rel(boolalg.RegOpenAlgebra()), seed=0)
    assert not v.ok


@given(seeds)
def test_finba_lattice_laws(seed):
    rng = random.Random(seed)
    B = FinBA(rng.randint(1, 5))
    a, b, c = (B.random(rng) for _ in range(3))
    assert B.meet(a, B.join(b, c)) == B.join(B.meet(a, b), B.meet(a, c))
    assert B.comp(B.meet(a, b)) == B.join(B.comp(a), B.comp(b))
    assert B.join(a, B.comp(a)) == B.one and B.meet(a, B.comp(a)) == B.zero
    assert B.decode(B.encode(a)) == a


def test_morphism_examples():
    B2, B1 = FinBA(2), FinBA(1)
    ident = MorphismTable.identity(B2)
    assert boolalg.check_de_vries_morphism(ident, order_rel(B2), order_rel(B2)).ok
    const1 = MorphismTable(B2, B2, (3, 3, 3, 3))
    assert boolalg.check_de_vries_morphism(const1, order_rel(B2), order_rel(B2)).axiom_id == "M1"
    collapse = boolalg.boolean_hom(B2, B1, (0,))
    assert collapse.image == (0, 1, 0, 1)
    assert boolalg.check_de_vries_morphism(collapse, order_rel(B2), order_rel(B1)).ok


def test_morphisms_are_boolean_homs():
    for m, n in itertools.product((1, 2, 3), repeat=2):
        A, B = FinBA(m), FinBA(n)
        found = set(s.image for s in boolalg.enumerate_morphisms(order_rel(A), order_rel(B)))
        homs = set(s.image for s in boolalg.boolean_homs(A, B))
        assert found == homs and len(found) == m ** n


def all_tables(A, B):
    return [MorphismTable(A, B, img) for img in itertools.product(range(B.size), repeat=A.size)]


def test_morphism_check_matches_exhaustive_table_scan():
    # brute force over every map FinBA(2) -> FinBA(1) and FinBA(1) -> FinBA(2)
    for A, B in ((FinBA(2), FinBA(1)), (FinBA(1), FinBA(2))):
        passing = {s.image for s in all_tables(A, B)
                   if boolalg.check_de_vries_morphism(s, order_rel(A), order_rel(B)).ok}
        assert passing == {s.image for s in boolalg.boolean_homs(A, B)}


def test_star_identity_and_associativity():
    algs = [FinBA(n) for n in (1, 2, 3)]
    mors = {(i, j): boolalg.enumerate_morphisms(order_rel(algs[i]), order_rel(algs[j]))
            for i in range(3) for j in range(3)}
    for (i, j), tables in mors.items():
        for s in tables:
            A, B = algs[i], algs[j]
            assert boolalg.star_compose(s, MorphismTable.identity(A), order_rel(A)) == s
            assert boolalg.star_compose(MorphismTable.identity(B), s, order_rel(A)) == s
    rng = random.Random(7)
    for _ in range(200):
        i, j, k, l = (rng.randrange(3) for _ in range(4))
        s1, s2, s3 = rng.choice(mors[i, j]), rng.choice(mors[j, k]), rng.choice(mors[k, l])
        r1, r2 = order_rel(algs[i]), order_rel(algs[j])
        left = boolalg.star_compose(boolalg.star_compose(s3, s2, r2), s1, r1)
        right = boolalg.star_compose(s3, boolalg.star_compose(s2, s1, r1), r1)
        assert left == right == s1.then(s2).then(s3)
        assert boolalg.check_de_vries_morphism(left, r1, order_rel(algs[l])).ok


def test_star_rejects_mismatch():
    B1, B2 = FinBA(1), FinBA(2)
    with pytest.raises(boolalg.InputError):
        boolalg.star_compose(MorphismTable.identity(B1), MorphismTable.identity(B2), order_rel(B2))


def test_join_inequality_exhaustive():
    for m, n in itertools.product((1, 2, 3), repeat=2):
        A, B = FinBA(m), FinBA(n)
        for s in boolalg.enumerate_morphisms(order_rel(A), order_rel(B)):
            assert boolalg.check_join_inequality(s, order_rel(A)).ok


def test_table_json_roundtrip():
    s = boolalg.boolean_hom(FinBA(2), FinBA(1), (0,))
    assert s.to_json()["map"] == {"0": "0", "1": "1", "2": "0", "3": "1"}
    assert MorphismTable.from_json(s.to_json()) == s
    with pytest.raises(boolalg.InputError):
        MorphismTable.from_json({"source": 2, "target": 1, "map": {"0": "0"}})


def test_well_inside_ideal_examples():
    e = normal.chi(core.from_spans([(F(1, 4), F(1, 2))]))
    f = normal.chi(core.from_spans([(F(1, 8), F(3, 4))]))
    assert boolalg.well_inside_ideals(e, f)
    assert not boolalg.well_inside_ideals(e, e)
    zero = normal.const(0)
    assert boolalg.well_inside_ideals(zero, zero)
    with pytest.raises(boolalg.InputError):
        boolalg.well_inside_ideals(normal.const(2), f)


@given(regopens(), regopens())
def test_well_inside_ideals_agrees_with_closure(u, v):
    e, f = normal.chi(u), normal.chi(v)
    assert boolalg.well_inside_ideals(e, f) == core.closure_contained(u, v)
