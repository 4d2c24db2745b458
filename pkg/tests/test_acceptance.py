"""Acceptance criteria 1-8.  Each test records one PASS/FAIL line, printed in the
terminal summary (and directly when this file is run as a script)."""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction as F

from proxalg import boolalg, core, functors, ideals, normal, specker
from proxalg.boolalg import FinBA, MorphismTable, RegOpenAlgebra, order_rel

RESULTS: list = []
RO = RegOpenAlgebra()


@contextmanager
def criterion(n: int, title: str, limit: float = None):
    start = time.perf_counter()
    info: dict = {}
    try:
        yield info
        elapsed = time.perf_counter() - start
        if limit is not None:
            assert elapsed < limit, f"took {elapsed:.1f}s, limit {limit}s"
    except BaseException as exc:
        RESULTS.append(f"criterion {n} FAIL  {title}: {exc}")
        raise
    detail = ", ".join(f"{k}={v}" for k, v in info.items())
    RESULTS.append(f"criterion {n} PASS  {title} ({detail}; {elapsed:.1f}s)")


def test_1_finite_de_vries_collapse():
    with criterion(1, "only <= survives DV1-DV7 among all 2^16 relations", limit=5) as info:
        B = FinBA(2)
        found = boolalg.de_vries_relations(B)
        info.update(relations=1 << 16, passing=len(found))
        assert found == [order_rel(B).table]


def test_2_claim_three_way_equivalence():
    with criterion(2, "kt, threshold and componentwise proximities agree", limit=10) as info:
        rng = random.Random(2)
        disagree = related = 0
        n = 1000
        for _ in range(n):
            f = normal.random_stepfn(rng, max_cells=7)
            g = normal.dilate(f, rng) if rng.random() < 0.5 else normal.random_stepfn(rng, max_cells=7)
            assert len(f.xs) <= 8
            rep = normal.claim_equivalence(f, g)
            disagree += not rep.agree
            related += rep.kt
        info.update(pairs=n, related=related, disagreements=disagree)
        assert disagree == 0 and 0 < related < n


def test_3_flat_regopen_is_step_functions():
    with criterion(3, "flat algebra over RO[0,1] is isomorphic to normal step functions") as info:
        v = functors.roundtrip_fn(seed=3, samples=1000)
        info.update(probes=v.stats.get("probes"), status=v.status)
        assert v.ok, v.dumps()


def test_4_weak_implies_full_morphism():
    with criterion(4, "every lifted de Vries table is a full proximity morphism", limit=60) as info:
        count = 0
        instances = 0
        for m, n in itertools.product(range(4), repeat=2):
            A, B = FinBA(m), FinBA(n)
            for sigma in boolalg.enumerate_morphisms(order_rel(A), order_rel(B)):
                v = functors.verify_full_morphism(functors.lift_morphism(sigma), probes=200, seed=count)
                assert v.ok, v.dumps()
                count += 1
                instances += v.stats["instances"]
        info.update(tables=count, probes_each=200, instances=instances)


def test_5_decomposition_identities():
    with criterion(5, "orthogonal/decreasing round trip and truncation identities") as info:
        rng = random.Random(5)
        n = 10000
        for _ in range(n):
            B = FinBA(rng.randint(1, 4)) if rng.random() < 0.8 else RO
            a = specker.random_flat(B, rng)
            assert specker.to_decreasing(specker.to_orthogonal(a, full=True)) == a
            assert specker.to_decreasing(specker.to_orthogonal(a, full=False)) == a
            specker.truncation_terms(a)
            r, p = sorted(rng.sample(range(-12, 13), 2))
            assert specker.band_identity(a, F(r, 3), F(p, 3))
        info.update(elements=n)


def test_6_baire_and_l_algebra_laws():
    with criterion(6, "Baire operators, normalization and l-algebra laws") as info:
        rng = random.Random(6)
        n = 10000
        fixed = 0
        for _ in range(n):
            f = normal.random_stepfn(rng, normal=False)
            up, lo = normal.upper(f), normal.lower(f)
            assert normal.leq(lo, f) and normal.leq(f, up)
            assert normal.upper(up) == up and normal.lower(lo) == lo
            nf = normal.normalize(f)
            assert normal.normalize(nf) == nf and normal.is_normal(nf)
            assert normal.is_normal(f) == (nf == f)
            fixed += nf == f
        m = 1000
        add, mul, join, meet, neg = normal.add, normal.mul, normal.join, normal.meet, normal.neg
        zero, one = normal.const(0), normal.const(1)
        for _ in range(m):
            f, g, h = (normal.random_stepfn(rng) for _ in range(3))
            assert add(f, add(g, h)) == add(add(f, g), h) and add(f, g) == add(g, f)
            assert add(f, zero) == f and add(f, neg(f)) == zero
            assert mul(f, mul(g, h)) == mul(mul(f, g), h) and mul(f, g) == mul(g, f)
            assert mul(f, one) == f and mul(f, add(g, h)) == add(mul(f, g), mul(f, h))
            assert join(f, meet(f, g)) == f and meet(f, join(f, g)) == f
            assert join(f, meet(g, h)) == meet(join(f, g), join(f, h))
            assert add(join(f, g), h) == join(add(f, h), add(g, h))
            fp, gp = normal.positive(f), normal.positive(g)
            assert normal.leq(zero, mul(fp, gp))
            assert mul(meet(f, g), normal.positive(h)) == meet(mul(f, normal.positive(h)),
                                                                mul(g, normal.positive(h)))
        info.update(stepfns=n, normal_inputs=fixed, triples=m)


def _idempotent_pair(rng):
    f = core.random_regopen(rng)
    if rng.random() < 0.5:
        return core.erode(core.meet(f, core.random_regopen(rng)), F(1, 32)), f
    return core.random_regopen(rng), f


def test_7_annihilator_correspondence():
    with criterion(7, "idempotent proximity equals ideal well-inside; cutoff and cover witnesses") as info:
        rng = random.Random(7)
        flat = specker.FlatAlgebra(RO, boolalg.closure_rel())
        steps = normal.StepAlgebra()
        n = 1000
        related = 0
        for i in range(n):
            u, v = _idempotent_pair(rng)
            e, f = normal.chi(u), normal.chi(v)
            ok = ideals.well_inside_ideals(e, f, "stepfn")
            assert ok == normal.kt_proximity(e, f)
            ea, fa = specker.idem(RO, u), specker.idem(RO, v)
            assert ideals.well_inside_ideals(ea, fa, "flat-regopen") == flat.rel(ea, fa) == ok
            related += ok
            eps = F(1, rng.choice([2, 4, 8, 16]))
            # first part, in both models
            a = normal.mul(normal.positive(normal.random_stepfn(rng)), f)
            assert ideals.cutoff_witness(steps, a, f, eps)[0]
            af = specker.mul(specker.positive(specker.random_flat(RO, rng)), fa)
            assert ideals.cutoff_witness(flat, af, fa, eps)[0]
            # second part, for a continuous 0 <= a <= f
            c = ideals.random_pl_below(f, rng)
            assert ideals.is_between(c, f)
            assert ideals.cover_idempotent_pl(c, f, eps)[0]
        info.update(pairs=n, related=related)
        assert 0 < related < n


def test_8_star_calculus():
    with criterion(8, "star associativity, identities and Id-functoriality") as info:
        algs = [FinBA(k) for k in range(3)]
        lifts = {}
        for i, j in itertools.product(range(3), repeat=2):
            lifts[i, j] = [functors.lift_morphism(s)
                           for s in boolalg.enumerate_morphisms(order_rel(algs[i]), order_rel(algs[j]))]
        ident = {i: functors.lift_morphism(MorphismTable.identity(algs[i])) for i in range(3)}
        star = functors.star_compose_weak
        laws = 0
        for (i, j), arrows in lifts.items():
            for a in arrows:
                assert star(a, ident[i]).table == a.table == star(ident[j], a).table
                laws += 2
        for i, j, k in itertools.product(range(3), repeat=3):
            for a1 in lifts[i, j]:
                for a2 in lifts[j, k]:
                    comp = star(a2, a1)
                    # Id of the composite is the star of the restricted tables
                    expected = boolalg.star_compose(functors.restrict(a2), functors.restrict(a1),
                                                    order_rel(algs[i]))
                    assert functors.restrict(comp) == expected
                    laws += 1
                    for l in range(3):
                        for a3 in lifts[k, l]:
                            left = star(a3, star(a2, a1))
                            right = star(star(a3, a2), a1)
                            assert left.table == right.table
                            laws += 1
        info.update(checked=laws)


def pytest_report_lines():
    return list(RESULTS)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
            except Exception:
                failed += 1
    print("\n".join(RESULTS))
    sys.exit(1 if failed else 0)
