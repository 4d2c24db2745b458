import json
import subprocess
import sys
from pathlib import Path

import pytest

from proxalg import cli

INST = Path(__file__).resolve().parent.parent / "instances"


def run(capsys, *args):
    code = cli.main([str(a) for a in args])
    return code, capsys.readouterr().out


def report(capsys, *args):
    code, out = run(capsys, *args, "--json")
    return code, json.loads(out)


@pytest.mark.parametrize("name,suite,code,axiom", [
    ("regopen-closure", "devries", 0, None),
    ("finba2-enumerate", "devries", 0, None),
    ("finba2-top-only", "devries", 1, "DV3"),
    ("full-relation", "proximity", 1, "P2"),
    ("equality-relation", "proximity", 1, "P3"),
    ("stepfn-kt", "proximity", 0, None),
    ("collapse", "weakpm", 0, None),
    ("not-m3", "weakpm", 1, "PM3"),
    ("not-m3", "morphism", 1, "M3"),
    ("claim-pair", "claim", 0, None),
    ("claim-random", "claim", 0, None),
    ("roundtrip-fn", "roundtrip", 0, None),
    ("finba2-order", "roundtrip", 0, None),
])
def test_check_suites(capsys, name, suite, code, axiom):
    got, rep = report(capsys, "check", INST / f"{name}.json", suite, "--samples", 60)
    assert got == code
    assert rep["verdict"]["axiom_id"] == axiom


@pytest.mark.parametrize("suite", cli.SUITES)
def test_malformed_input_exits_2(capsys, suite):
    code, out = run(capsys, "check", INST / "malformed.json", suite)
    assert code == 2 and out.startswith("error")


def test_missing_file_and_bad_flags(capsys, tmp_path):
    assert run(capsys, "check", tmp_path / "nope.json", "devries")[0] == 2
    assert run(capsys, "check", INST / "finba2-order.json", "bogus")[0] == 2
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"atoms": 5}))
    assert run(capsys, "check", big, "devries")[0] == 2
    assert run(capsys, "check", big, "devries", "--max-atoms", 5)[0] == 0


def test_exhaustive_weakpm(capsys):
    code, rep = report(capsys, "check", INST / "finba3-tables.json", "weakpm", "--exhaustive",
                       "--samples", 20)
    assert code == 0 and rep["verdict"]["stats"]["tables"] == 9


def test_replay_is_byte_identical_and_refails(capsys, tmp_path):
    code, out = run(capsys, "check", INST / "equality-relation.json", "proximity", "--json",
                    "--seed", 11)
    assert code == 1
    path = tmp_path / "report.json"
    path.write_text(out)
    code2, out2 = run(capsys, "check", path, "proximity", "--json")
    assert code2 == 1 and out2 == out
    # feeding only the counterexample back replays that single instance
    rep = json.loads(out)
    inst = dict(rep["instance"], counterexample=rep["verdict"]["counterexample"])
    single = tmp_path / "single.json"
    single.write_text(json.dumps(inst))
    code3, rep3 = report(capsys, "check", single, "proximity")
    assert code3 == 1 and rep3["verdict"]["axiom_id"] == "P3"


def test_seeded_reports_repeat(capsys):
    outs = {run(capsys, "check", INST / "regopen-closure.json", "devries", "--json", "--seed", 5)[1]
            for _ in range(2)}
    assert len(outs) == 1


@pytest.mark.parametrize("name,op,expected", [
    ("chi-0-half", "normalize", {"x": ["0/1", "1/2", "1/1"], "c": ["1/1", "0/1"], "v": ["1/1", "0/1", "0/1"]}),
    ("chi-0-half", "baire-upper", {"x": ["0/1", "1/2", "1/1"], "c": ["1/1", "0/1"], "v": ["1/1", "1/1", "0/1"]}),
    ("one", "invert", {"carrier": "finba:2", "steps": [["1/1", 3]]}),
    ("a-1p2", "decompose-orth", {"carrier": "finba:2", "full": False, "terms": [["3/1", 1], ["1/1", 2]]}),
    ("orth-3p1q", "decompose-decr", {"carrier": "finba:2", "steps": [["1/1", 3], ["3/1", 1]]}),
    ("a-1p2", "decompose-decr", {"carrier": "finba:2", "r0": "1/1", "terms": [["2/1", 1]]}),
    ("annihilator-p", "annihilator", {"carrier": "finba:2", "steps": [["0/1", 3], ["1/1", 1]]}),
    ("star-collapse", "compose-star", {"map": {"0": "0", "1": "1", "2": "0", "3": "1"}, "source": 2, "target": 1}),
    ("star-eval", "compose-star", {"carrier": "finba:1", "steps": [["1/1", 1]]}),
    ("interp-pair", "interpolate", {"x": ["0/1", "3/16", "5/8", "1/1"], "c": ["0/1", "1/1", "0/1"],
                                    "v": ["0/1", "0/1", "0/1", "0/1"]}),
])
def test_compute_ops(capsys, name, op, expected):
    code, rep = report(capsys, "compute", INST / f"{name}.json", op)
    assert code == 0 and rep["result"] == expected


@pytest.mark.parametrize("name,op,code", [
    ("two-q", "invert", 1),
    ("star-identity", "compose-star", 1),
    ("bad-interval", "iso", 2),
    ("malformed", "normalize", 2),
])
def test_compute_errors(capsys, name, op, code):
    assert run(capsys, "compute", INST / f"{name}.json", op)[0] == code


def test_iso_roundtrip_through_files(capsys, tmp_path):
    code, rep = report(capsys, "compute", INST / "iso-chi.json", "iso")
    assert code == 0
    back = tmp_path / "back.json"
    back.write_text(json.dumps({"value": rep["result"]}))
    code, rep2 = report(capsys, "compute", back, "iso")
    src = json.loads((INST / "iso-chi.json").read_text())["value"]
    assert code == 0 and rep2["result"] == {"x": ["0/1", "1/2", "1/1"], "c": ["1/1", "0/1"],
                                            "v": ["1/1", "0/1", "0/1"]}
    assert len(src["x"]) == 3


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "proxalg", "check", str(INST / "finba2-order.json"),
                          "devries"], capture_output=True, text=True)
    assert out.returncode == 0 and "PASS" in out.stdout
