"""Command line interface.

Every command prints human-readable lines plus machine-readable lines prefixed
``#?``.  Exit codes: 0 when every checked property holds, 1 when one fails
(witness printed), 2 for input or usage errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .campaign import PROPERTIES, CampaignConfig, run_campaign
from .complex import complex_algebra, givant_check, is_normal
from .errors import UltraposetError, UsageError
from .fileformat import load_structure, save_structure
from .fol.proof import ProofReplayer
from .fol.syntax import Signature, parse_formula
from .order import (
    AdditivityWitness, MonotoneWitness, SupResult, check_lemma_equivalence, dm_completion,
    is_complete_lattice, is_completely_additive, is_monotone, is_quasi_complete,
)
from .product import Family, direct_product, los_check, make_filter, reduced_product
from .iso import is_isomorphism

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunReport:
    command: list[str]
    lines: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def say(self, text: str) -> None:
        self.lines.append(text)

    def machine(self, text: str) -> None:
        self.lines.append("#? " + text)

    def fail(self) -> None:
        self.exit_code = max(self.exit_code, EXIT_FAIL)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _flag(b: bool) -> str:
    return "true" if b else "false"


def _set(labels, ids) -> str:
    return "{" + ",".join(labels[i] for i in sorted(ids)) + "}"


def _sup_text(labels, r: SupResult) -> str:
    return labels[r.id] if r.exists else f"none({r.reason})"


def split_labels(text: str) -> list[str]:
    """Split a comma list, ignoring commas nested inside brackets or braces."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [x.strip() for x in out if x.strip()]


def _witness_line(labels, name, kind, w) -> str:
    if isinstance(w, MonotoneWitness):
        lo = ",".join(labels[a] for a in w.lower)
        hi = ",".join(labels[a] for a in w.upper)
        return (f"witness op={name} kind={kind} lower=({lo}) upper=({hi}) "
                f"f_lower={labels[w.f_lower]} f_upper={labels[w.f_upper]}")
    assert isinstance(w, AdditivityWitness)
    subsets = " ".join(f"X{j + 1}={_set(labels, x)}" for j, x in enumerate(w.subsets))
    sups = ",".join(labels[s] for s in w.sups)
    return (f"witness op={name} kind={kind} {subsets} sups=({sups}) "
            f"image_sup={_sup_text(labels, w.image_sup)} f_of_sups={w.f_of_sups.label}")


# ------------------------------------------------------------------ commands


def cmd_check(args, rep: RunReport) -> None:
    s = load_structure(args.file)
    if s.order is None:
        rels = ",".join(f"{k}:{v.ndim}" for k, v in sorted(s.relations.items()))
        rep.say(f"{s.name}: relational structure on {s.size} elements")
        rep.machine(f"relational name={s.name} elements={s.size} relations={rels or '-'}")
        return
    p = s.order
    rep.say(f"{s.name}: poset on {p.size} elements, {len(p.covers())} covers")
    rep.machine("axioms reflexive=true antisymmetric=true transitive=true")
    rep.machine(f"poset name={s.name} elements={p.size} covers={len(p.covers())} "
                f"lattice={_flag(p.is_lattice())} complete={_flag(is_complete_lattice(p))}")
    for name, op in sorted(s.operations.items()):
        mono = is_monotone(p, op)
        add = is_completely_additive(p, op)
        quasi = is_quasi_complete(p, op)
        line = (f"op name={name} arity={op.arity} monotone={_flag(mono.holds)} "
                f"additive={_flag(add.holds)} quasi={_flag(quasi.holds)}")
        if op.arity >= 2:
            lemma = check_lemma_equivalence(p, op)
            line += f" instances_additive={_flag(lemma.all_instances)} lemma_agree={_flag(lemma.agree)}"
            if not lemma.agree:
                rep.fail()
        rep.machine(line)
        if not mono:
            rep.machine(_witness_line(p.labels, name, "monotone", mono.witness))
        if not add:
            rep.machine(_witness_line(p.labels, name, "additive", add.witness))
            rep.fail()
        if not quasi:
            rep.machine(_witness_line(p.labels, name, "quasi", quasi.witness))


def _family(files) -> Family:
    return Family.of([load_structure(f) for f in files])


def _filter(fam: Family, text: str):
    try:
        gen = [int(x) for x in split_labels(text)]
    except ValueError:
        raise UsageError(f"--filter expects a comma list of indices, got {text!r}") from None
    return make_filter(fam.index, gen)


def cmd_product(args, rep: RunReport) -> None:
    fam = _family(args.files)
    dp = direct_product(fam, args.name)
    save_structure(dp.structure, args.output)
    rep.say(f"wrote direct product of {len(fam.members)} factors to {args.output}")
    rep.machine(f"product factors={len(fam.members)} elements={dp.structure.size}")


def cmd_ultraproduct(args, rep: RunReport) -> None:
    fam = _family(args.files)
    fs = _filter(fam, args.filter)
    rp = reduced_product(fam, fs, args.name)
    sub = direct_product(fam.subfamily(fs.generator))
    iso = is_isomorphism(rp.structure, sub.structure, rp.subfamily_isomorphism)
    save_structure(rp.structure, args.output)
    rep.say(f"wrote reduced product modulo <{','.join(map(str, sorted(fs.generator)))}> to {args.output}")
    rep.machine(f"reduced_product generator={','.join(map(str, sorted(fs.generator)))} "
                f"ultra={_flag(fs.is_ultra)} classes={rp.structure.size} subfamily_iso={_flag(iso)}")
    if not iso:
        rep.fail()


def cmd_los(args, rep: RunReport) -> None:
    fam = _family(args.files)
    fs = _filter(fam, args.filter)
    sig = Signature.of(fam.members[0])
    phi = parse_formula(args.formula, sig)
    assignments = [{} for _ in fam.members]
    for item in args.assign or []:
        name, eq, rest = item.partition("=")
        if not eq or not name:
            raise UsageError(f"--assign expects NAME=LABEL[,...], got {item!r}")
        labels = split_labels(rest)
        if len(labels) != len(fam.members):
            raise UsageError(f"--assign {name}: {len(labels)} labels for {len(fam.members)} factors")
        for a, m, lab in zip(assignments, fam.members, labels):
            a[name] = m.index(lab)
    r = los_check(fam, fs, phi, assignments)
    rep.say("Łoś check " + ("(ultrafilter)" if fs.is_ultra else "(non-ultra filter, informational)"))
    rep.machine(f"los J_true={{{','.join(map(str, sorted(r.J_true)))}}} in_filter={_flag(r.in_filter)} "
                f"product_satisfies={_flag(r.product_satisfies)} agree={_flag(r.agree)} ultra={_flag(r.ultra)}")
    if r.ultra and not r.agree:
        rep.fail()


def cmd_complete(args, rep: RunReport) -> None:
    s = load_structure(args.file)
    if s.order is None:
        raise UsageError("complete needs a poset file")
    c = dm_completion(s.order)
    out = c.lattice
    save_structure(type(s).from_poset(out, name=args.name or f"{s.name}_dm"), args.output)
    emb = ",".join(f"{s.labels[i]}->{out.labels[j]}" for i, j in enumerate(c.embedding))
    complete = is_complete_lattice(out)
    rep.say(f"wrote completion with {out.size} elements to {args.output}")
    rep.machine(f"completion elements={out.size} complete={_flag(complete)} embedding={emb}")
    if not complete:
        rep.fail()


def cmd_cm(args, rep: RunReport) -> None:
    s = load_structure(args.file)
    b = complex_algebra(s)
    save_structure(b.to_structure(args.name or f"cm_{s.name}"), args.output)
    rep.say(f"wrote complex algebra with {b.lattice.size} elements to {args.output}")
    ok = True
    for name, op in sorted(b.operators.items()):
        add = is_completely_additive(b.lattice, op).holds
        normal = is_normal(b.lattice, op)
        ok &= add and normal
        rep.machine(f"operator name={name} arity={op.arity} additive={_flag(add)} normal={_flag(normal)}")
    rep.machine(f"cm atoms={b.atom_count} elements={b.lattice.size} operators={len(b.operators)}")
    if not ok:
        rep.fail()


def cmd_givant(args, rep: RunReport) -> None:
    fam = _family(args.files)
    fs = _filter(fam, args.filter)
    r = givant_check(fam, fs)
    checks = " ".join(f"{k}={_flag(v)}" for k, v in r.checks.items())
    rep.say(f"canonical map between {r.rhs.lattice.size}-element algebras")
    rep.machine(f"givant isIso={_flag(r.is_iso)} {checks}")
    if not r.is_iso:
        rep.fail()


def cmd_replay(args, rep: RunReport) -> None:
    s = load_structure(args.file)
    if s.order is None or args.op not in s.operations:
        raise UsageError(f"replay needs a poset file with unary operation {args.op!r}")
    p = s.order
    X = [p.index(lab) for lab in split_labels(args.set)]
    y = p.index(args.bound)
    r = ProofReplayer(p, s.operations[args.op], args.op).replay(X, y)
    L = p.labels
    rep.say(f"s = sup X = {L[r.s]}, y = {L[y]}, A = {_set(L, r.A)}")
    rep.machine(f"replay s={L[r.s]} y={L[y]} A={_set(L, r.A)} X_subset_A={_flag(r.X_subset_A)}")
    rep.machine(f"step eq1 sup_A={_sup_text(L, r.sup_A)} holds={_flag(r.eq1)}")
    rep.machine(f"step sigma holds={_flag(r.sigma_holds)}")
    rep.machine(f"step eq3 sup_fA={_sup_text(L, r.image_sup_A)} f_s={L[s.operations[args.op](r.s)]} "
                f"holds={_flag(r.eq3)}")
    rep.machine(f"step phi holds={_flag(r.phi_holds)}")
    rep.machine(f"step conclusion holds={_flag(r.conclusion)}")
    rep.machine(f"replay overall={_flag(r.overall)} cross_checks={_flag(r.cross_checks)} "
                f"all_steps={_flag(r.all_steps)}")
    if not r.all_steps:
        rep.fail()


def cmd_campaign(args, rep: RunReport) -> None:
    props = tuple(split_labels(args.props))
    cfg = CampaignConfig(args.seed, args.trials, args.max_carrier, args.max_index, args.max_arity, props)
    r = run_campaign(cfg)
    rep.say(f"campaign finished in {r.wall_time:.2f}s")
    for line in r.lines():
        rep.lines.append(line)
    if not r.ok:
        rep.fail()


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ultraposet", description="finite order structures, products and Łoś checks")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="poset axioms and operation properties")
    p.add_argument("file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("product", help="direct product")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(run=cmd_product)

    p = sub.add_parser("ultraproduct", help="reduced product modulo the filter generated by J")
    p.add_argument("--filter", required=True, help="comma list of indices; one index = ultrafilter")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(run=cmd_ultraproduct)

    p = sub.add_parser("los", help="pointwise truth versus truth in the reduced product")
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", action="append", help="NAME=LABEL,... one label per factor")
    p.add_argument("--filter", required=True)
    p.add_argument("files", nargs="+")
    p.set_defaults(run=cmd_los)

    p = sub.add_parser("complete", help="Dedekind-MacNeille completion")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("cm", help="complex algebra of a relational structure")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--name", default=None)
    p.set_defaults(run=cmd_cm)

    p = sub.add_parser("givant", help="canonical isomorphism check for complex algebras")
    p.add_argument("--filter", required=True)
    p.add_argument("files", nargs="+")
    p.set_defaults(run=cmd_givant)

    p = sub.add_parser("replay", help="replay the unary supremum-transfer argument")
    p.add_argument("--op", required=True)
    p.add_argument("--set", required=True, help="comma list of labels (may be empty)")
    p.add_argument("--bound", required=True)
    p.add_argument("file")
    p.set_defaults(run=cmd_replay)

    p = sub.add_parser("campaign", help="seeded property campaign")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--props", default="theorem1", help=f"comma list from {','.join(PROPERTIES)}")
    p.add_argument("--max-carrier", type=int, default=8)
    p.add_argument("--max-index", type=int, default=4)
    p.add_argument("--max-arity", type=int, default=2)
    p.set_defaults(run=cmd_campaign)
    return ap


def dispatch(argv: list[str]) -> RunReport:
    rep = RunReport(list(argv))
    try:
        args = build_parser().parse_args(argv)
        args.run(args, rep)
    except UltraposetError as exc:
        rep.say(f"error: {exc}")
        rep.machine(f"error kind={type(exc).__name__}")
        rep.exit_code = EXIT_USAGE
    return rep


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv and argv[0] in ("-h", "--help") or (len(argv) >= 2 and argv[1] in ("-h", "--help")):
        try:
            build_parser().parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
    rep = dispatch(argv)
    for line in rep.lines:
        print(line)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
