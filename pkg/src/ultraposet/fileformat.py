"""Plain-text structure files.

::

    structure <name>
    elements <label> <label> ...
    order                   # poset block: one generating pair per line, a <= b
    rel <name> <arity>      # one tuple of labels per line
    op <name> <arity>       # one row per line: a1 ... an -> b

``#`` starts a comment.  A file with an ``order`` block (possibly empty) is a
poset; otherwise it is a relational structure.  Saving writes the Hasse
covers, relation tuples and operation rows in id order.
"""
from __future__ import annotations

import itertools
import re
from pathlib import Path

import numpy as np

from .errors import (
    AntisymmetryViolation, DuplicateLabel, ParseError, SignatureMismatch, StructureIOError, UnknownElement,
    ValidationError,
)
from .order import OperationTable, validate_poset
from .structure import Structure

KEYWORDS = ("structure", "elements", "order", "rel", "op")
_NAME = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")


def _check_label(label: str) -> None:
    if not label or any(c.isspace() for c in label) or "#" in label or label in KEYWORDS \
            or label in ("<=", "->"):
        raise ValidationError(f"label {label!r} cannot be written to a structure file")


def _tokens(raw: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with 1-based columns."""
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", raw)]


def parse_structure(text: str) -> Structure:
    name = None
    labels = None
    index: dict[str, int] = {}
    pairs: list[tuple[str, str]] = []
    has_order = False
    rels: dict[str, tuple[int, set]] = {}
    ops: dict[str, tuple[int, dict]] = {}
    block = None  # ('order',) | ('rel', name) | ('op', name)

    def lookup(tok, line, col):
        if labels is None:
            raise ParseError("elements must be declared before data lines", line, col)
        try:
            return index[tok]
        except KeyError:
            raise ParseError(f"unknown element {tok!r}", line, col) from None

    def header_arity(toks, line):
        if len(toks) != 3:
            raise ParseError(f"expected '{toks[0][0]} <name> <arity>'", line, toks[0][1])
        sym, col = toks[1]
        if not _NAME.fullmatch(sym):
            raise ParseError(f"bad symbol name {sym!r}", line, col)
        if sym in rels or sym in ops:
            raise ParseError(f"symbol {sym!r} declared twice", line, col)
        if not toks[2][0].isdigit() or int(toks[2][0]) < 1:
            raise ParseError("arity must be a positive integer", line, toks[2][1])
        return sym, int(toks[2][0])

    for lineno, raw in enumerate(text.splitlines(), start=1):
        raw = raw.split("#", 1)[0]
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if head == "structure":
            if name is not None:
                raise ParseError("second 'structure' line", lineno, col)
            if len(toks) != 2:
                raise ParseError("expected 'structure <name>'", lineno, col)
            name = toks[1][0]
            block = None
        elif head == "elements":
            if labels is not None:
                raise ParseError("second 'elements' line", lineno, col)
            labels = [t for t, _ in toks[1:]]
            if not labels:
                raise ParseError("empty carrier", lineno, col)
            for t, c in toks[1:]:
                if t in index:
                    raise ParseError(f"duplicate element {t!r}", lineno, c)
                if t in KEYWORDS or t in ("<=", "->"):
                    raise ParseError(f"reserved word {t!r} used as an element", lineno, c)
                index[t] = len(index)
            block = None
        elif head == "order":
            if len(toks) != 1:
                raise ParseError("'order' takes no arguments", lineno, toks[1][1])
            if has_order:
                raise ParseError("second 'order' block", lineno, col)
            has_order = True
            block = ("order",)
        elif head == "rel":
            sym, arity = header_arity(toks, lineno)
            rels[sym] = (arity, set())
            block = ("rel", sym)
        elif head == "op":
            sym, arity = header_arity(toks, lineno)
            ops[sym] = (arity, {})
            block = ("op", sym)
        elif block is None:
            raise ParseError(f"data line outside a block: {head!r}", lineno, col)
        elif block[0] == "order":
            if len(toks) != 3 or toks[1][0] != "<=":
                raise ParseError("expected '<a> <= <b>'", lineno, col)
            a = lookup(toks[0][0], lineno, toks[0][1])
            b = lookup(toks[2][0], lineno, toks[2][1])
            pairs.append((labels[a], labels[b]))
        elif block[0] == "rel":
            arity, tuples = rels[block[1]]
            if len(toks) != arity:
                raise ParseError(f"relation {block[1]} expects {arity} elements per line, got {len(toks)}",
                                 lineno, col)
            tuples.add(tuple(lookup(t, lineno, c) for t, c in toks))
        else:
            arity, rows = ops[block[1]]
            if len(toks) != arity + 2 or toks[arity][0] != "->":
                raise ParseError(f"expected {arity} arguments, '->', and a result", lineno, col)
            args = tuple(lookup(t, lineno, c) for t, c in toks[:arity])
            if args in rows:
                raise ParseError(f"duplicate row for {block[1]}({', '.join(labels[a] for a in args)})",
                                 lineno, col)
            rows[args] = lookup(*toks[arity + 1], lineno)

    if labels is None:
        raise ParseError("no 'elements' line")
    n = len(labels)
    operations = {}
    for sym, (arity, rows) in ops.items():
        table = np.empty((n,) * arity, dtype=np.int64)
        for args in itertools.product(range(n), repeat=arity):
            if args not in rows:
                raise ParseError(f"missing row for {sym}({', '.join(labels[a] for a in args)})")
            table[args] = rows[args]
        operations[sym] = OperationTable(table, n)
    order = None
    if has_order:
        try:
            order = validate_poset(pairs, labels)
        except (AntisymmetryViolation, DuplicateLabel, UnknownElement) as exc:
            raise ValidationError(str(exc)) from exc
    arrays = {}
    for sym, (arity, tuples) in rels.items():
        arr = np.zeros((n,) * arity, dtype=bool)
        for t in tuples:
            arr[t] = True
        arrays[sym] = arr
    try:
        return Structure(labels, order=order, relations=arrays, operations=operations,
                         name=name or "S")
    except (ValueError, DuplicateLabel, SignatureMismatch) as exc:
        raise ValidationError(str(exc)) from exc


def format_structure(s: Structure) -> str:
    for lab in s.labels:
        _check_label(lab)
    if not re.fullmatch(r"[^\s#]+", s.name):
        raise ValidationError(f"structure name {s.name!r} cannot be written")
    lines = [f"structure {s.name}", "elements " + " ".join(s.labels)]
    if s.order is not None:
        lines.append("order")
        lines += [f"{s.labels[a]} <= {s.labels[b]}" for a, b in s.order.covers()]
    for sym, arr in sorted(s.relations.items()):
        lines.append(f"rel {sym} {arr.ndim}")
        lines += [" ".join(s.labels[int(v)] for v in t) for t in np.argwhere(arr)]
    for sym, op in sorted(s.operations.items()):
        lines.append(f"op {sym} {op.arity}")
        lines += [" ".join(s.labels[a] for a in args) + f" -> {s.labels[v]}" for args, v in op.rows()]
    return "\n".join(lines) + "\n"


def load_structure(path) -> Structure:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StructureIOError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_structure(text)


def save_structure(s: Structure, path) -> None:
    text = format_structure(s)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise StructureIOError(f"cannot write {path}: {exc.strerror or exc}") from exc
