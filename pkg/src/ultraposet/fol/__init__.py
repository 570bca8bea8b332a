"""First-order syntax, semantics and the supremum-transfer proof replay."""
from .corpus import formula_corpus
from .proof import PaperFormulas, ProofReplayer, ProofReport, build_paper_formulas, replay_proof
from .semantics import evaluate
from .syntax import (
    And, App, Eq, Exists, Forall, Formula, Implies, Not, Or, Rel, Signature, Term, Var,
    check_signature, format_formula, free_names, leq, parse_formula,
)

__all__ = [
    "And", "App", "Eq", "Exists", "Forall", "Formula", "Implies", "Not", "Or", "PaperFormulas",
    "ProofReplayer", "ProofReport", "Rel", "Signature", "Term", "Var", "build_paper_formulas",
    "check_signature", "evaluate", "format_formula", "formula_corpus", "free_names", "leq",
    "parse_formula", "replay_proof",
]
