"""First-order structures over a finite carrier.

A ``Structure`` carries an optional partial order (exposed to formulas as the
relation ``leq``), further relations as boolean arrays and operations as
:class:`OperationTable`.  Posets with operations and relational structures are
both just structures; the former have ``order`` set.
"""
from __future__ import annotations

from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import DuplicateLabel, SignatureMismatch, UnknownElement
from .order import OperationTable, Poset

LEQ = "leq"


class Structure:
    def __init__(
        self,
        labels: Sequence[str],
        *,
        order: Poset | None = None,
        relations: Mapping[str, np.ndarray] | None = None,
        operations: Mapping[str, OperationTable] | None = None,
        name: str = "S",
    ):
        labels = tuple(labels)
        if not labels:
            raise ValueError("carrier must be nonempty")
        if len(set(labels)) != len(labels):
            raise DuplicateLabel("duplicate element label")
        if order is not None and order.labels != labels:
            raise ValueError("order labels differ from structure labels")
        n = len(labels)
        rels = {}
        for rname, arr in (relations or {}).items():
            if rname == LEQ:
                raise SignatureMismatch("'leq' is reserved for the order")
            a = np.array(arr, dtype=bool)
            if a.ndim < 1 or any(d != n for d in a.shape):
                raise ValueError(f"relation {rname!r} has shape {a.shape}")
            a.setflags(write=False)
            rels[rname] = a
        ops = {}
        for oname, op in (operations or {}).items():
            if oname in rels or oname == LEQ:
                raise SignatureMismatch(f"symbol {oname!r} used as both relation and operation")
            if op.size != n:
                raise ValueError(f"operation {oname!r} is on {op.size} elements, carrier has {n}")
            ops[oname] = op
        self.labels = labels
        self.order = order
        self.relations = rels
        self.operations = ops
        self.name = name

    @classmethod
    def from_poset(cls, p: Poset, operations=None, name: str = "S") -> Structure:
        return cls(p.labels, order=p, operations=operations, name=name)

    @classmethod
    def from_tuples(cls, labels, relations: Mapping[str, tuple[int, set]], name="S") -> Structure:
        """Relational structure from ``{name: (arity, tuples)}`` given as ids."""
        n = len(labels)
        arrs = {}
        for rname, (arity, tuples) in relations.items():
            a = np.zeros((n,) * arity, dtype=bool)
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} does not have arity {arity}")
                a[tuple(t)] = True
            arrs[rname] = a
        return cls(labels, relations=arrs, name=name)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def is_poset(self) -> bool:
        return self.order is not None

    def all_relations(self) -> dict[str, np.ndarray]:
        rels = dict(self.relations)
        if self.order is not None:
            rels[LEQ] = self.order.leq
        return rels

    def relation(self, name: str) -> np.ndarray:
        if name == LEQ and self.order is not None:
            return self.order.leq
        try:
            return self.relations[name]
        except KeyError:
            raise SignatureMismatch(f"structure has no relation {name!r}") from None

    def relation_tuples(self, name: str) -> set[tuple[int, ...]]:
        return {tuple(int(v) for v in t) for t in np.argwhere(self.relation(name))}

    @property
    def signature(self) -> tuple[tuple[tuple[str, int], ...], tuple[tuple[str, int], ...]]:
        rels = tuple(sorted((k, v.ndim) for k, v in self.all_relations().items()))
        ops = tuple(sorted((k, v.arity) for k, v in self.operations.items()))
        return rels, ops

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"no element labelled {label!r}") from None

    def with_operations(self, operations: Mapping[str, OperationTable]) -> Structure:
        return Structure(self.labels, order=self.order, relations=self.relations,
                         operations=operations, name=self.name)

    def renamed(self, name: str) -> Structure:
        return Structure(self.labels, order=self.order, relations=self.relations,
                         operations=self.operations, name=name)

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        if (self.name, self.labels, self.order) != (other.name, other.labels, other.order):
            return False
        if self.relations.keys() != other.relations.keys() or self.operations != other.operations:
            return False
        return all(np.array_equal(v, other.relations[k]) for k, v in self.relations.items())

    __hash__ = None

    def __repr__(self):
        kind = "poset" if self.is_poset else "relational"
        return (f"Structure({self.name!r}, {kind}, size={self.size}, "
                f"relations={sorted(self.relations)}, operations={sorted(self.operations)})")
