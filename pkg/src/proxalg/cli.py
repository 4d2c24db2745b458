"""Command line driver: run axiom suites on instance files and compute constructions.

Exit codes: 0 pass, 1 fail (or a typed computation error), 2 bad input.
Every run is seeded, and printing a report then feeding it back to
``check`` reruns the same instance with the same seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Optional

from . import boolalg, core, functors, normal, specker
from .boolalg import FinBA, MorphismTable, RegOpenAlgebra
from .core import MalformedInterval, RegOpen, fmt_q, q
from .normal import StepFn
from .specker import FlatAlgebra, FlatElem, OrthDecomp
from .verdict import InputError, UndecidableAtDeskScale, Verdict

SUITES = ("devries", "proximity", "morphism", "weakpm", "claim", "roundtrip")
OPS = ("baire-upper", "baire-lower", "normalize", "decompose-orth", "decompose-decr", "invert",
       "annihilator", "compose-star", "interpolate", "iso")


class Options:
    def __init__(self, ns: argparse.Namespace):
        self.seed = ns.seed
        self.samples = ns.samples
        self.exhaustive = ns.exhaustive
        self.max_atoms = ns.max_atoms


# ---------------------------------------------------------------- parsing

def load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg}") from exc


def _need(obj: Any, key: str) -> Any:
    if not isinstance(obj, dict) or key not in obj:
        raise InputError(f"missing field {key!r}")
    return obj[key]


def parse_carrier(obj: Any, opts: Options):
    if isinstance(obj, dict) and "atoms" in obj:
        name = f"finba:{obj['atoms']}"
    elif isinstance(obj, dict):
        name = obj.get("carrier", "")
    else:
        name = obj
    B = boolalg.carrier_from_name(name)
    if isinstance(B, FinBA) and B.atoms > opts.max_atoms:
        raise InputError(f"{B.atoms} atoms exceeds --max-atoms {opts.max_atoms}")
    return B


def parse_relation(obj: Any, opts: Options) -> boolalg.ProximityRel:
    """{"atoms": n, "relation": [[a, b], ...]} or {"carrier": ..., "relation": name}."""
    B = parse_carrier(obj, opts)
    rel = obj.get("relation", "order" if B.finite else "closure")
    if isinstance(rel, list):
        if not B.finite:
            raise InputError("explicit relation tables need a finite carrier")
        return boolalg.table_rel(B, rel)
    return boolalg.rel_from_name(B, rel)


def parse_stepfn(obj: Any) -> StepFn:
    try:
        return StepFn.from_json(obj)
    except (KeyError, TypeError, ValueError, MalformedInterval) as exc:
        raise InputError(f"bad step function: {exc}") from exc


def parse_flat(obj: Any) -> FlatElem:
    try:
        return FlatElem.from_json(obj)
    except (KeyError, TypeError, ValueError, MalformedInterval) as exc:
        raise InputError(f"bad flat element: {exc}") from exc


def parse_regopen(obj: Any) -> RegOpen:
    try:
        return RegOpen.from_json(obj)
    except (KeyError, TypeError, ValueError, MalformedInterval) as exc:
        raise InputError(f"bad regular open set: {exc}") from exc


def parse_table(obj: Any, src, tgt) -> MorphismTable:
    mp = _need(obj, "map")
    if not isinstance(mp, dict):
        raise InputError("map must be an object")
    return MorphismTable.from_json({"source": src.atoms, "target": tgt.atoms, "map": mp})


def parse_morphism(obj: Any, opts: Options) -> functors.WeakProxMorphism:
    """A table {"source", "target", "map"}, {"eval": p} or {"identity": carrier}."""
    if not isinstance(obj, dict):
        raise InputError("morphism must be an object")
    if "eval" in obj:
        return functors.point_evaluation(q(obj["eval"]))
    if "identity" in obj:
        rel = parse_relation(obj["identity"], opts)
        return functors.identity_morphism(FlatAlgebra(rel.carrier, rel))
    rs, rt = parse_relation(_need(obj, "source"), opts), parse_relation(_need(obj, "target"), opts)
    table = parse_table(obj, rs.carrier, rt.carrier)
    return functors.lift_morphism(table, rs, rt)


def proximity_algebra(obj: Any, opts: Options):
    """(algebra handle, relation or None) for a proximity instance."""
    if obj.get("algebra") == "stepfn":
        alg = normal.StepAlgebra()
        name = obj.get("relation", "kt")
        rels = {"kt": None, "threshold": normal.threshold_proximity,
                "full": lambda f, g: True, "equality": lambda f, g: f == g}
        if name not in rels:
            raise InputError(f"unknown step function relation {name!r}")
        return alg, rels[name]
    rel = parse_relation(obj, opts)
    return FlatAlgebra(rel.carrier, rel), None


# ---------------------------------------------------------------- suites

def suite_devries(inst: dict, opts: Options) -> Verdict:
    if "enumerate" in inst:
        B = parse_carrier({"atoms": inst["enumerate"]}, opts)
        found = boolalg.de_vries_relations(B)
        order = boolalg.order_rel(B).table
        stats = {"mode": "exhaustive", "relations": 1 << (B.size * B.size), "passing": len(found)}
        if found == [order]:
            return Verdict("pass", seed=opts.seed, stats=stats)
        extra = [sorted(r) for r in found if r != order]
        cx = {"axiom": "COLLAPSE", "passing": [[list(p) for p in r] for r in extra]}
        return Verdict("fail", "COLLAPSE", cx, opts.seed, stats)
    rel = parse_relation(inst, opts)
    return boolalg.check_de_vries(rel, seed=opts.seed, samples=opts.samples)


def suite_proximity(inst: dict, opts: Options) -> Verdict:
    alg, rel = proximity_algebra(inst, opts)
    replay = inst.get("counterexample")
    return specker.check_proximity(alg, rel, seed=opts.seed, samples=opts.samples, replay=replay)


def suite_morphism(inst: dict, opts: Options) -> Verdict:
    rs = parse_relation(_need(inst, "source"), opts)
    rt = parse_relation(_need(inst, "target"), opts)
    if "sigma" not in inst:
        found = boolalg.enumerate_morphisms(rs, rt)
        return Verdict("pass", seed=opts.seed, stats={"mode": "exhaustive", "morphisms": len(found)})
    table = parse_table(inst["sigma"], rs.carrier, rt.carrier)
    v = boolalg.check_de_vries_morphism(table, rs, rt)
    v.seed = opts.seed
    return v


def suite_weakpm(inst: dict, opts: Options) -> Verdict:
    rs = parse_relation(_need(inst, "source"), opts)
    rt = parse_relation(_need(inst, "target"), opts)
    full = inst.get("suite", "weak") == "full"
    check = functors.verify_full_morphism if full else functors.check_weak_morphism
    if "sigma" in inst:
        tables = [parse_table(inst["sigma"], rs.carrier, rt.carrier)]
    elif opts.exhaustive:
        tables = boolalg.enumerate_morphisms(rs, rt)
    else:
        raise InputError("weakpm needs a sigma table or --exhaustive")
    stats = {"tables": 0, "instances": 0}
    for i, table in enumerate(tables):
        alpha = functors.unchecked_morphism(table, rs, rt)
        v = check(alpha, probes=opts.samples, seed=opts.seed + i)
        stats["tables"] += 1
        stats["instances"] += v.stats.get("instances", 0)
        if not v.ok:
            cx = dict(v.counterexample or {}, sigma=table.to_json())
            return Verdict(v.status, v.axiom_id, cx if v.status == "fail" else None, opts.seed, stats)
    return Verdict("pass", seed=opts.seed, stats=stats)


def suite_claim(inst: dict, opts: Options) -> Verdict:
    if "f" in inst:
        pairs = [(parse_stepfn(inst["f"]), parse_stepfn(_need(inst, "g")))]
    else:
        rng = random.Random(opts.seed)
        pairs = []
        for _ in range(opts.samples):
            f = normal.random_stepfn(rng, max_cells=int(inst.get("max_cells", 4)))
            g = normal.dilate(f, rng) if rng.random() < 0.5 else normal.random_stepfn(rng)
            pairs.append((f, g))
    related = 0
    for f, g in pairs:
        rep = normal.claim_equivalence(f, g)
        related += rep.kt
        if not rep.agree:
            cx = {"axiom": "CLAIM", "f": f.to_json(), "g": g.to_json(), "report": rep.to_json()}
            return Verdict("fail", "CLAIM", cx, opts.seed, {"pairs": len(pairs)})
    return Verdict("pass", seed=opts.seed, stats={"pairs": len(pairs), "related": related})


def suite_roundtrip(inst: dict, opts: Options) -> Verdict:
    if inst.get("model") == "fn":
        return functors.roundtrip_fn(seed=opts.seed, samples=opts.samples)
    rel = parse_relation(inst, opts)
    return functors.roundtrip_id_sp(rel.carrier, rel, seed=opts.seed, samples=opts.samples)


SUITE_FNS = {"devries": suite_devries, "proximity": suite_proximity, "morphism": suite_morphism,
             "weakpm": suite_weakpm, "claim": suite_claim, "roundtrip": suite_roundtrip}


# ---------------------------------------------------------------- computations

class ComputeError(Exception):
    """A well-formed request whose answer does not exist."""


def _flat_or_field(inst: Any, key: str = "a") -> FlatElem:
    return parse_flat(inst[key] if isinstance(inst, dict) and key in inst else inst)


def _step_or_field(inst: Any, key: str = "f") -> StepFn:
    return parse_stepfn(inst[key] if isinstance(inst, dict) and key in inst else inst)


def op_baire(tag: str):
    def run(inst, opts):
        return normal.baire(tag, _step_or_field(inst)).to_json()
    return run


def op_normalize(inst, opts):
    return normal.normalize(_step_or_field(inst)).to_json()


def op_orth(inst, opts):
    return specker.to_orthogonal(_flat_or_field(inst), full=bool(inst.get("full", False))).to_json()


def op_decr(inst, opts):
    if isinstance(inst, dict) and "terms" in inst:
        try:
            return specker.to_decreasing(OrthDecomp.from_json(inst)).to_json()
        except MalformedInterval as exc:
            raise InputError(str(exc)) from exc
    a = _flat_or_field(inst)
    r0, terms = specker.decreasing_form(a)
    B = a.carrier
    return {"carrier": B.name, "r0": fmt_q(r0), "terms": [[fmt_q(c), B.encode(e)] for c, e in terms]}


def op_invert(inst, opts):
    return specker.invert(_flat_or_field(inst)).to_json()


def op_annihilator(inst, opts):
    gens = [parse_flat(g) for g in _need(inst, "generators")]
    B = parse_carrier(inst, opts) if "carrier" in inst else None
    if B is None and not gens:
        raise InputError("carrier needed for an empty generator list")
    return specker.annihilator(gens, B).to_json()


def op_compose_star(inst, opts):
    a1, a2 = parse_morphism(_need(inst, "first"), opts), parse_morphism(_need(inst, "second"), opts)
    comp = functors.star_compose_weak(a2, a1)
    if "at" in inst:
        s = parse_flat(inst["at"])
        return functors.star_join(a2, a1, s).to_json()
    if comp.table is None:
        raise InputError("an infinite source needs an element given as 'at'")
    return comp.table.to_json()


def op_interpolate(inst, opts):
    if "u" in inst:
        u, v = parse_regopen(inst["u"]), parse_regopen(_need(inst, "v"))
        if not core.closure_contained(u, v):
            raise ComputeError("the closure of u is not inside v")
        return core.interpolate(u, v).to_json()
    f, g = parse_stepfn(_need(inst, "f")), parse_stepfn(_need(inst, "g"))
    h = normal.midpoint_interpolant(f, g)
    if h is None:
        raise ComputeError("f is not well below g")
    return h.to_json()


def op_iso(inst, opts):
    value = _need(inst, "value")
    direction = inst.get("direction") or ("to-stepfn" if "steps" in value else "to-flat")
    x = parse_flat(value) if direction == "to-stepfn" else parse_stepfn(value)
    return functors.flat_stepfn_iso(direction, x).to_json()


OP_FNS = {"baire-upper": op_baire("upper"), "baire-lower": op_baire("lower"),
          "normalize": op_normalize, "decompose-orth": op_orth, "decompose-decr": op_decr,
          "invert": op_invert, "annihilator": op_annihilator, "compose-star": op_compose_star,
          "interpolate": op_interpolate, "iso": op_iso}


# ---------------------------------------------------------------- commands

def _emit(payload: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    v = payload.get("verdict")
    if v is not None:
        line = v["status"].upper()
        if v["axiom_id"]:
            line += f" {v['axiom_id']}"
        out.write(f"{payload['suite']}: {line}\n")
        if v["counterexample"] is not None:
            out.write("counterexample: " + json.dumps(v["counterexample"], sort_keys=True) + "\n")
    elif "result" in payload:
        out.write(json.dumps(payload["result"], sort_keys=True) + "\n")
    else:
        out.write(f"error: {payload['error']}\n")


def cmd_check(path: str, suite: str, opts: Options, as_json: bool = False, out=None) -> int:
    out = out or sys.stdout
    try:
        inst = load(path)
        if isinstance(inst, dict) and "instance" in inst and "verdict" in inst:
            # a report: rerun its instance under its own seed
            opts.seed = inst["verdict"].get("seed", opts.seed)
            suite = inst.get("suite", suite)
            inst = inst["instance"]
        if not isinstance(inst, dict):
            raise InputError("instance must be a JSON object")
        v = SUITE_FNS[suite](inst, opts)
    except (InputError, MalformedInterval, KeyError, TypeError, ValueError) as exc:
        _emit({"suite": suite, "error": str(exc)}, as_json, out)
        return 2
    except UndecidableAtDeskScale as exc:
        v = Verdict("undecidable", stats={"reason": str(exc)}, seed=opts.seed)
    _emit({"suite": suite, "instance": inst, "verdict": v.to_json()}, as_json, out)
    if v.status == "pass":
        return 0
    return 1


def cmd_compute(path: str, op: str, opts: Options, as_json: bool = False, out=None) -> int:
    out = out or sys.stdout
    try:
        inst = load(path)
        result = OP_FNS[op](inst, opts)
    except (specker.NotInvertible, UndecidableAtDeskScale, ComputeError,
            functors.MorphismAxiomError) as exc:
        _emit({"op": op, "error": f"{type(exc).__name__}: {exc}"}, as_json, out)
        return 1
    except (InputError, MalformedInterval, KeyError, TypeError, ValueError) as exc:
        _emit({"op": op, "error": str(exc)}, as_json, out)
        return 2
    _emit({"op": op, "result": result}, as_json, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="proxalg", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("--exhaustive", action="store_true",
                        help="enumerate every table where the suite supports it")
    common.add_argument("--max-atoms", type=int, default=4,
                        help="refuse finite carriers with more atoms")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("check", parents=[common], help="run an axiom suite")
    c.add_argument("path")
    c.add_argument("suite", choices=SUITES)
    k = sub.add_parser("compute", parents=[common], help="run a construction")
    k.add_argument("path")
    k.add_argument("op", choices=OPS)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    opts = Options(ns)
    if ns.command == "check":
        return cmd_check(ns.path, ns.suite, opts, ns.json)
    return cmd_compute(ns.path, ns.op, opts, ns.json)


if __name__ == "__main__":
    sys.exit(main())
