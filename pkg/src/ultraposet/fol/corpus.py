"""A fixed formula corpus over ``leq/2`` and ``f/1`` with free names among ``s, y``."""
from __future__ import annotations

from .proof import build_paper_formulas
from .syntax import Formula, Signature, format_formula, parse_formula

TEXTS = (
    "forall x. x <= x",
    "forall x. forall z. x <= z & z <= x -> x = z",
    "exists y. forall x. x <= y",
    "exists y. forall x. y <= x",
    "forall x. exists z. x <= z & !(x = z)",
    "forall x. forall z. exists w. x <= w & z <= w",
    "forall x. forall z. exists w. w <= x & w <= z",
    "forall x. forall z. x <= z -> f(x) <= f(z)",
    "forall x. f(x) = x",
    "exists x. f(x) = x",
    "forall x. f(f(x)) = f(x)",
    "forall x. x <= f(x)",
    "forall x. f(x) <= x",
    "s <= y",
    "f(s) <= y",
    "s = y",
    "!(s <= y) | f(s) <= f(y)",
    "exists x. x <= s & !(x = s)",
    "forall x. x <= s -> f(x) <= f(s)",
    "exists z. s <= z & y <= z",
    "exists z. s <= z & y <= z & (forall w. s <= w & y <= w -> z <= w)",
    "exists x. x <= s & f(x) <= y",
    "forall x. x <= s & f(x) <= y -> x <= s",
    "forall x. forall z. x <= z | z <= x",
    "exists x. exists z. !(x <= z) & !(z <= x)",
    "forall x. exists z. f(z) = x",
    "exists z. (forall x. x <= z) & f(z) = z",
)


def formula_corpus(op: str = "f") -> list[tuple[str, Formula]]:
    """Named formulas: the fixed texts plus sigma, phi and the unabridged sigma."""
    sig = Signature.standard(op)
    texts = TEXTS if op == "f" else tuple(t.replace("f(", op + "(") for t in TEXTS)
    out = [(f"c{i:02d}", parse_formula(t, sig)) for i, t in enumerate(texts)]
    pf = build_paper_formulas(sig, op)
    out += [("sigma", pf.sigma), ("phi", pf.phi), ("sigma_full", pf.sigma_full)]
    return out


def corpus_texts(op: str = "f") -> list[tuple[str, str]]:
    return [(name, format_formula(phi)) for name, phi in formula_corpus(op)]
