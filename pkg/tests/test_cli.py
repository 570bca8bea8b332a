import subprocess
import sys
from pathlib import Path

import pytest

from ultraposet.cli import dispatch, main, split_labels
from ultraposet.fileformat import load_structure
from ultraposet.iso import iso_search

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


def machine(rep):
    return [line for line in rep.lines if line.startswith("#? ")]


# (argv, expected exit code, a machine line fragment that must appear)
GOLDEN = [
    (["check", d("diamond.struct")], 0, "op name=f arity=1 monotone=true additive=true quasi=true"),
    (["check", d("top_const.struct")], 1, "witness op=f kind=additive X1={} sups=(bot) image_sup=bot f_of_sups=top"),
    (["check", d("m3_meet.struct")], 1, "additive=false quasi=false instances_additive=false lemma_agree=true"),
    (["check", d("r.struct")], 0, "relational name=r elements=2 relations=R:2"),
    (["check", d("cycle.struct")], 2, "error kind=ValidationError"),
    (["product", d("c2.struct"), d("c2.struct"), "-o", "{out}"], 0, "product factors=2 elements=4"),
    (["product", d("diamond.struct"), d("antichain.struct"), "-o", "{out}"], 2, "error kind=SignatureMismatch"),
    (["ultraproduct", "--filter", "1", d("diamond.struct"), d("c2.struct"), "-o", "{out}"], 0,
     "reduced_product generator=1 ultra=true classes=2 subfamily_iso=true"),
    (["ultraproduct", "--filter", "5", d("c2.struct"), "-o", "{out}"], 2, "error kind=OutOfRangeIndex"),
    (["los", "--formula", "f(s) <= y", "--assign", "s=a,0", "--assign", "y=top,1", "--filter", "0",
      d("diamond.struct"), d("c2.struct")], 0, "los J_true={0,1} in_filter=true product_satisfies=true agree=true"),
    (["los", "--formula", "f(s) <= y", "--assign", "s=a", "--filter", "0", d("diamond.struct"), d("c2.struct")],
     2, "error kind=UsageError"),
    (["los", "--formula", "f(s <= y", "--filter", "0", d("c2.struct")], 2, "error kind=FormulaSyntaxError"),
    (["complete", d("antichain.struct"), "-o", "{out}"], 0, "completion elements=4 complete=true embedding=a->a,b->b"),
    (["complete", d("cycle.struct"), "-o", "{out}"], 2, "error kind=ValidationError"),
    (["cm", d("r.struct"), "-o", "{out}"], 0, "operator name=R arity=1 additive=true normal=true"),
    (["cm", d("diamond.struct"), "-o", "{out}"], 2, "error kind=SignatureMismatch"),
    (["givant", "--filter", "1", d("r.struct"), d("r2.struct")], 0, "givant isIso=true"),
    (["givant", "--filter", "0,1", d("r.struct"), d("r2.struct")], 2, "error kind=PreconditionFailed"),
    (["replay", "--op", "f", "--set", "a,b", "--bound", "top", d("diamond.struct")], 0,
     "replay overall=true cross_checks=true all_steps=true"),
    (["replay", "--op", "f", "--set", "", "--bound", "bot", d("diamond.struct")], 0, "replay s=bot y=bot A={bot}"),
    (["replay", "--op", "f", "--set", "b", "--bound", "a", d("diamond.struct")], 2, "error kind=PreconditionFailed"),
    (["replay", "--op", "f", "--set", "a", "--bound", "top", d("top_const.struct")], 2, "error kind=PreconditionFailed"),
    (["campaign", "--seed", "5", "--trials", "10", "--props", "theorem1,givant"], 0, "verdict=pass"),
    (["campaign", "--seed", "5", "--trials", "10", "--props", "bogus"], 2, "error kind=ConfigOutOfRange"),
    (["campaign", "--seed", "x", "--trials", "10"], 2, "error kind=UsageError"),
    (["nosuch"], 2, "error kind=UsageError"),
    (["check", d("missing.struct")], 2, "error kind=StructureIOError"),
]


@pytest.mark.parametrize("argv, code, fragment", GOLDEN, ids=[" ".join(g[0][:2]) + f"->{g[1]}" for g in GOLDEN])
def test_golden(tmp_path, argv, code, fragment):
    argv = [a.replace("{out}", str(tmp_path / "out.struct")) for a in argv]
    rep = dispatch(argv)
    assert rep.exit_code == code, rep.lines
    assert any(fragment in line for line in machine(rep)), rep.lines


def test_every_command_has_success_and_failure_cases():
    outcomes = {}
    for argv, code, _ in GOLDEN:
        outcomes.setdefault(argv[0], set()).add(code == 0)
    for cmd in ("check", "product", "ultraproduct", "los", "complete", "cm", "givant", "replay", "campaign"):
        assert outcomes[cmd] == {True, False}, cmd


def test_ultraproduct_output_is_isomorphic_to_factor(tmp_path):
    out = tmp_path / "u.struct"
    assert dispatch(["ultraproduct", "--filter", "1", d("diamond.struct"), d("c2.struct"), "-o", str(out)]).exit_code == 0
    u = load_structure(out)
    c2 = load_structure(d("c2.struct")).renamed(u.name)
    assert iso_search(u, c2) is not None


def test_written_files_reload(tmp_path):
    for cmd in (["complete", d("antichain.struct")], ["cm", d("r.struct")],
                ["product", d("diamond.struct"), d("c2.struct")]):
        out = tmp_path / "o.struct"
        assert dispatch(cmd + ["-o", str(out)]).exit_code == 0
        load_structure(out)


def test_split_labels():
    assert split_labels("a,b") == ["a", "b"]
    assert split_labels("(a,b),{c,d},e") == ["(a,b)", "{c,d}", "e"]
    assert split_labels("") == []


def test_main_prints_and_returns_code(capsys):
    assert main(["check", d("diamond.struct")]) == 0
    out = capsys.readouterr().out
    assert "#? axioms reflexive=true antisymmetric=true transitive=true" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ultraposet", "check", d("top_const.struct")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "#? witness" in proc.stdout


def test_reports_are_deterministic():
    argv = ["campaign", "--seed", "9", "--trials", "15", "--props", "los,quasi"]
    assert machine(dispatch(argv)) == machine(dispatch(argv))
