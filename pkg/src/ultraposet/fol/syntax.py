"""Formula AST, signatures, a recursive-descent parser and a printer.

Text grammar::

    formula := 'forall' ident '.' formula | 'exists' ident '.' formula | imp
    imp     := disj ('->' imp)?
    disj    := conj ('|' conj)*
    conj    := neg ('&' neg)*
    neg     := '!' neg | atom
    atom    := term '<=' term | term '=' term | '(' formula ')' | rel '(' term, ... ')'
    term    := ident | ident '(' term (',' term)* ')'

The last ``atom`` alternative applies only to relation symbols of the
signature other than ``leq``.  ``|`` and ``&`` associate to the left and ``->``
to the right; :func:`format_formula` inserts exactly the parentheses needed to
reparse to the same tree.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

from ..errors import ArityMismatch, FormulaSyntaxError, SignatureMismatch, UnknownSymbol
from ..structure import LEQ, Structure

# ------------------------------------------------------------------ signature


@dataclass(frozen=True)
class Signature:
    relations: Mapping[str, int] = field(default_factory=lambda: {LEQ: 2})
    operations: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        rels = dict(self.relations)
        rels.setdefault(LEQ, 2)
        if rels[LEQ] != 2:
            raise SignatureMismatch("leq must be binary")
        ops = dict(self.operations)
        clash = set(rels) & set(ops)
        if clash:
            raise SignatureMismatch(f"names used as relation and operation: {sorted(clash)}")
        for name, arity in {**rels, **ops}.items():
            if arity < 1:
                raise SignatureMismatch(f"symbol {name!r} must have arity >= 1")
            if name in KEYWORDS or not IDENT.fullmatch(name):
                raise SignatureMismatch(f"bad symbol name {name!r}")
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "operations", ops)

    def __hash__(self):
        return hash((tuple(sorted(self.relations.items())), tuple(sorted(self.operations.items()))))

    @classmethod
    def standard(cls, op: str = "f") -> Signature:
        """``leq/2`` plus one unary operation symbol."""
        return cls({LEQ: 2}, {op: 1})

    @classmethod
    def of(cls, s: Structure) -> Signature:
        return cls({k: v.ndim for k, v in s.relations.items()} | {LEQ: 2},
                   {k: v.arity for k, v in s.operations.items()})


# ------------------------------------------------------------------------ AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    op: str
    args: tuple


Term = Union[Var, App]


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Rel, Eq, Not, And, Or, Implies, Forall, Exists]


def leq(a: Term, b: Term) -> Rel:
    return Rel(LEQ, (a, b))


def term_names(t: Term) -> Iterator[str]:
    if isinstance(t, Var):
        yield t.name
    else:
        for a in t.args:
            yield from term_names(a)


def free_names(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Rel):
        return frozenset(n for a in phi.args for n in term_names(a))
    if isinstance(phi, Eq):
        return frozenset(term_names(phi.left)) | frozenset(term_names(phi.right))
    if isinstance(phi, Not):
        return free_names(phi.body)
    if isinstance(phi, (And, Or, Implies)):
        return free_names(phi.left) | free_names(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_names(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def symbols(phi: Formula) -> tuple[set[tuple[str, int]], set[tuple[str, int]]]:
    """Relation and operation symbols (with arities) used by ``phi``."""
    rels, ops = set(), set()

    def term(t):
        if isinstance(t, App):
            ops.add((t.op, len(t.args)))
            for a in t.args:
                term(a)

    def walk(f):
        if isinstance(f, Rel):
            rels.add((f.name, len(f.args)))
            for a in f.args:
                term(a)
        elif isinstance(f, Eq):
            term(f.left)
            term(f.right)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or, Implies)):
            walk(f.left)
            walk(f.right)
        else:
            walk(f.body)

    walk(phi)
    return rels, ops


def check_signature(phi: Formula, sig: Signature) -> None:
    rels, ops = symbols(phi)
    for name, arity in rels:
        if sig.relations.get(name) != arity:
            raise SignatureMismatch(f"relation {name}/{arity} not in signature")
    for name, arity in ops:
        if sig.operations.get(name) != arity:
            raise SignatureMismatch(f"operation {name}/{arity} not in signature")


# ------------------------------------------------------------------- printing

_QUANT, _IMP, _OR, _AND, _NOT, _ATOM = range(6)


def _level(phi: Formula) -> int:
    if isinstance(phi, (Forall, Exists)):
        return _QUANT
    if isinstance(phi, Implies):
        return _IMP
    if isinstance(phi, Or):
        return _OR
    if isinstance(phi, And):
        return _AND
    if isinstance(phi, Not):
        return _NOT
    return _ATOM


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"{t.op}(" + ", ".join(format_term(a) for a in t.args) + ")"


def format_formula(phi: Formula, min_level: int = _QUANT) -> str:
    if _level(phi) < min_level:
        return "(" + format_formula(phi) + ")"
    if isinstance(phi, Forall):
        return f"forall {phi.var}. " + format_formula(phi.body, _QUANT)
    if isinstance(phi, Exists):
        return f"exists {phi.var}. " + format_formula(phi.body, _QUANT)
    if isinstance(phi, Implies):
        return format_formula(phi.left, _OR) + " -> " + format_formula(phi.right, _IMP)
    if isinstance(phi, Or):
        return format_formula(phi.left, _OR) + " | " + format_formula(phi.right, _AND)
    if isinstance(phi, And):
        return format_formula(phi.left, _AND) + " & " + format_formula(phi.right, _NOT)
    if isinstance(phi, Not):
        return "!" + format_formula(phi.body, _NOT)
    if isinstance(phi, Eq):
        return format_term(phi.left) + " = " + format_term(phi.right)
    if isinstance(phi, Rel):
        if phi.name == LEQ:
            return format_term(phi.args[0]) + " <= " + format_term(phi.args[1])
        return f"{phi.name}(" + ", ".join(format_term(a) for a in phi.args) + ")"
    raise TypeError(f"not a formula: {phi!r}")


# -------------------------------------------------------------------- parsing

IDENT = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")
KEYWORDS = {"forall", "exists"}
_TOKEN = re.compile(r"\s*(?:(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<sym><=|->|[().,&|!=]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', 'kw', a symbol, or 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            toks.append(_Tok("end", "end of input", pos))
            return toks
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(pos, ["a token"], repr(text[pos]))
        if m.group("ident"):
            word = m.group("ident")
            toks.append(_Tok("kw" if word in KEYWORDS else "ident", word, m.start("ident")))
        else:
            sym = m.group("sym")
            toks.append(_Tok(sym, sym, m.start("sym")))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = sig

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, *expected):
        raise FormulaSyntaxError(self.tok.pos, expected, repr(self.tok.text) if self.tok.kind != "end" else "end of input")

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(repr(kind) if kind != "ident" else "identifier")
        t = self.tok
        self.i += 1
        return t

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def formula(self) -> Formula:
        if self.tok.kind == "kw":
            q = self.tok.text
            self.i += 1
            var = self.expect("ident").text
            self.expect(".")
            body = self.formula()
            return Forall(var, body) if q == "forall" else Exists(var, body)
        return self.imp()

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.neg()
        while self.accept("&"):
            f = And(f, self.neg())
        return f

    def neg(self) -> Formula:
        if self.accept("!"):
            return Not(self.neg())
        return self.atom()

    def atom(self) -> Formula:
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if self.tok.kind == "ident" and self.tok.text in self.sig.relations:
            name = self.tok.text
            start = self.tok
            self.i += 1
            args = self.arguments(start)
            if len(args) != self.sig.relations[name]:
                raise ArityMismatch(f"relation {name!r} expects {self.sig.relations[name]} arguments, got {len(args)}")
            return Rel(name, args)
        if self.tok.kind != "ident":
            self.fail("identifier", "'('", "'!'", "'forall'", "'exists'")
        left = self.term()
        if self.accept("<="):
            return leq(left, self.term())
        if self.accept("="):
            return Eq(left, self.term())
        self.fail("'<='", "'='")

    def arguments(self, head: _Tok) -> tuple:
        self.expect("(")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        if self.tok.kind != ")":
            self.fail("','", "')'")
        self.i += 1
        return tuple(args)

    def term(self) -> Term:
        head = self.expect("ident")
        name = head.text
        if name in self.sig.relations:
            raise UnknownSymbol(f"relation symbol {name!r} used as a term at position {head.pos}")
        if self.tok.kind == "(":
            if name not in self.sig.operations:
                raise UnknownSymbol(f"unknown operation symbol {name!r} at position {head.pos}")
            args = self.arguments(head)
            if len(args) != self.sig.operations[name]:
                raise ArityMismatch(
                    f"operation {name!r} expects {self.sig.operations[name]} arguments, got {len(args)}")
            return App(name, args)
        if name in self.sig.operations:
            raise ArityMismatch(f"operation {name!r} used without arguments at position {head.pos}")
        return Var(name)


def parse_formula(text: str, sig: Signature | None = None) -> Formula:
    """Parse ``text``; ``sig`` defaults to ``leq/2`` with operation ``f/1``."""
    p = _Parser(text, sig if sig is not None else Signature.standard())
    f = p.formula()
    if p.tok.kind != "end":
        p.fail("end of input")
    return f
