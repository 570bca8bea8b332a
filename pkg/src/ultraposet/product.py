"""Filters on finite index sets, direct and reduced products, Łoś checks.

Every filter on a finite index set ``I`` is principal: it is
``{S ⊆ I : J ⊆ S}`` for a nonempty generator ``J``, and it is an ultrafilter
exactly when ``|J| = 1``.  The interesting ultraproducts (nonprincipal
ultrafilters on infinite index sets) cannot be built by a program; what can be
built, and is built here, is the quotient construction itself, with Łoś-style
agreement checked on the materialized quotient.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .caps import current_caps, require
from .errors import (
    CapExceeded, EmptyGenerator, OutOfRangeIndex, PreconditionFailed, SignatureMismatch,
)
from .fol.semantics import evaluate
from .fol.syntax import Formula, Signature, check_signature
from .order import OperationTable, Poset, Verdict, is_completely_additive, is_quasi_complete
from .structure import LEQ, Structure


@dataclass(frozen=True)
class IndexSet:
    size: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("index set must be nonempty")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(self.size)))
        if len(self.labels) != self.size:
            raise ValueError("one label per index")


@dataclass(frozen=True)
class FilterSpec:
    index: IndexSet
    generator: frozenset[int]

    @property
    def is_ultra(self) -> bool:
        return len(self.generator) == 1

    def __contains__(self, subset: Iterable[int]) -> bool:
        return self.generator <= frozenset(subset)


def make_filter(ix: IndexSet, generator: Iterable[int]) -> FilterSpec:
    gen = frozenset(int(i) for i in generator)
    if not gen:
        raise EmptyGenerator("the filter generated by the empty set is improper")
    bad = sorted(i for i in gen if not 0 <= i < ix.size)
    if bad:
        raise OutOfRangeIndex(f"indices {bad} outside 0..{ix.size - 1}")
    return FilterSpec(ix, gen)


@dataclass(frozen=True)
class Family:
    index: IndexSet
    members: tuple[Structure, ...]

    def __post_init__(self):
        if len(self.members) != self.index.size:
            raise ValueError(f"{len(self.members)} members for {self.index.size} indices")
        sigs = {m.signature for m in self.members}
        if len(sigs) != 1:
            raise SignatureMismatch("family members do not share one signature")

    @classmethod
    def of(cls, members: Sequence[Structure]) -> Family:
        return cls(IndexSet(len(members)), tuple(members))

    @property
    def signature(self):
        return self.members[0].signature

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(m.size for m in self.members)

    def subfamily(self, indices: Iterable[int]) -> Family:
        idx = sorted(indices)
        return Family(IndexSet(len(idx), tuple(self.index.labels[i] for i in idx)),
                      tuple(self.members[i] for i in idx))


def tuple_label(labels: Sequence[str]) -> str:
    return "(" + ",".join(labels) + ")"


def _all_tuples(sizes: Sequence[int]) -> np.ndarray:
    total = prod(sizes)
    require(total, current_caps().product, "product carrier size")
    return np.stack(np.unravel_index(np.arange(total), sizes), axis=1).astype(np.int64)


def _table_cap(rows: int, arity: int) -> None:
    if rows ** arity > current_caps().table:
        raise CapExceeded(f"{rows}^{arity} table entries exceed cap {current_caps().table}")


def _componentwise_relation(members, name, reps, coords) -> np.ndarray:
    """``R`` on rows of ``reps`` holding iff it holds at every coordinate in ``coords``."""
    k = members[0].all_relations()[name].ndim
    _table_cap(len(reps), k)
    out = np.ones((len(reps),) * k, dtype=bool)
    for i in coords:
        arr = members[i].all_relations()[name]
        out &= arr[np.ix_(*([reps[:, i]] * k))]
    return out


def _componentwise_op(members, name, reps, coords) -> list[np.ndarray]:
    """Per-coordinate result tables of operation ``name`` applied to rows of ``reps``."""
    k = members[0].operations[name].arity
    _table_cap(len(reps), k)
    return [members[i].operations[name].table[np.ix_(*([reps[:, i]] * k))] for i in coords]


def _assemble(labels, members, relations, operations, name) -> Structure:
    rels = dict(relations)
    order = None
    if LEQ in rels:
        order = Poset(labels, rels.pop(LEQ), check=False)
    return Structure(labels, order=order, relations=rels, operations=operations, name=name)


@dataclass(frozen=True)
class DirectProduct:
    structure: Structure
    tuples: np.ndarray = field(repr=False)  # product id -> member ids

    def projection(self, i: int) -> np.ndarray:
        return self.tuples[:, i]


def direct_product(fam: Family, name: str | None = None) -> DirectProduct:
    """Componentwise product; carrier in lexicographic order of index tuples."""
    members = fam.members
    tuples = _all_tuples(fam.sizes)
    coords = range(len(members))
    labels = [tuple_label([members[i].labels[t[i]] for i in coords]) for t in tuples]
    rels = {r: _componentwise_relation(members, r, tuples, coords)
            for r in members[0].all_relations()}
    radix = np.array(fam.sizes, dtype=np.int64)
    ops = {}
    for o in members[0].operations:
        parts = _componentwise_op(members, o, tuples, coords)
        ops[o] = OperationTable(np.ravel_multi_index(tuple(parts), tuple(radix)), len(tuples))
    s = _assemble(labels, members, rels, ops, name or "product")
    return DirectProduct(s, tuples)


@dataclass(frozen=True)
class ReducedProduct:
    """Quotient of the direct product by agreement on a filter set.

    ``tuple_class[t]`` is the class of the tuple with product id ``t``;
    ``representatives[c]`` is the lexicographically least tuple of class ``c``.
    """

    structure: Structure
    filter: FilterSpec
    family: Family
    tuple_class: np.ndarray = field(repr=False)
    representatives: np.ndarray = field(repr=False)
    alt_representatives: np.ndarray = field(repr=False)

    def class_of(self, member_ids: Sequence[int]) -> int:
        t = np.ravel_multi_index(tuple(int(v) for v in member_ids), self.family.sizes)
        return int(self.tuple_class[t])

    @property
    def subfamily_isomorphism(self) -> tuple[int, ...]:
        """Class id -> id in ``direct_product(family.subfamily(J))``."""
        J = sorted(self.filter.generator)
        sizes = [self.family.sizes[j] for j in J]
        reps = self.representatives[:, J]
        return tuple(int(v) for v in np.ravel_multi_index(tuple(reps.T), sizes))


def reduced_product(fam: Family, fs: FilterSpec, name: str | None = None) -> ReducedProduct:
    """Reduced product ``P<B_i : i in I>/F`` for a principal filter ``F``.

    Two tuples are identified when the set of coordinates where they agree is
    in ``F``.  A relation holds on classes when the set of coordinates where it
    holds on representatives is in ``F``.  Operations act on representatives;
    the result is recomputed from a second representative of every class and
    the two must agree.
    """
    if fs.index.size != fam.index.size:
        raise OutOfRangeIndex("filter and family live on different index sets")
    members = fam.members
    tuples = _all_tuples(fam.sizes)
    J = sorted(fs.generator)
    # agreement set contains J  <=>  agreement set is in F
    tuple_class_raw = np.ravel_multi_index(tuple(tuples[:, J].T), [fam.sizes[j] for j in J])
    classes, first = np.unique(tuple_class_raw, return_index=True)
    _, last = np.unique(tuple_class_raw[::-1], return_index=True)
    last = len(tuples) - 1 - last
    reps = tuples[first]
    alt = tuples[last]
    tuple_class = np.searchsorted(classes, tuple_class_raw)
    q = len(classes)

    def cls(parts_j):
        # parts_j: per-J-coordinate member ids -> class id
        raw = np.ravel_multi_index(tuple(parts_j), [fam.sizes[j] for j in J])
        return np.searchsorted(classes, raw)

    # coordinates outside J never decide membership in F, so only J is consulted
    rels = {r: _componentwise_relation(members, r, reps, J) for r in members[0].all_relations()}
    for r, arr in rels.items():
        if not np.array_equal(arr, _componentwise_relation(members, r, alt, J)):
            raise AssertionError(f"relation {r} depends on the representative")
    ops = {}
    for o in members[0].operations:
        table = cls(_componentwise_op(members, o, reps, J))
        if not np.array_equal(table, cls(_componentwise_op(members, o, alt, J))):
            raise AssertionError(f"operation {o} depends on the representative")
        ops[o] = OperationTable(table, q)
    labels = [tuple_label([members[i].labels[t[i]] for i in range(len(members))]) for t in reps]
    s = _assemble(labels, members, rels, ops, name or "reduced")
    return ReducedProduct(s, fs, fam, tuple_class, reps, alt)


def ultraproduct(fam: Family, fs: FilterSpec, name: str | None = None) -> ReducedProduct:
    if not fs.is_ultra:
        raise PreconditionFailed(f"generator {sorted(fs.generator)} does not define an ultrafilter")
    return reduced_product(fam, fs, name or "ultraproduct")


# ---------------------------------------------------------------------- Łoś


@dataclass(frozen=True)
class LosReport:
    J_true: frozenset[int]
    in_filter: bool
    product_satisfies: bool
    agree: bool
    ultra: bool

    @property
    def required(self) -> bool:
        """Agreement is guaranteed only for ultrafilters."""
        return self.ultra


def los_check(fam: Family, fs: FilterSpec, phi: Formula,
              assignments: Sequence[Mapping[str, int]],
              product: ReducedProduct | None = None) -> LosReport:
    """Compare pointwise truth (filter-large?) with truth in the reduced product."""
    if len(assignments) != fam.index.size:
        raise ValueError("one assignment per index")
    check_signature(phi, Signature.of(fam.members[0]))
    rp = product if product is not None else reduced_product(fam, fs)
    J_true = frozenset(i for i, (m, a) in enumerate(zip(fam.members, assignments))
                       if evaluate(m, phi, a))
    names = set().union(*(a.keys() for a in assignments)) if assignments else set()
    product_assignment = {}
    for name in names:
        try:
            ids = [a[name] for a in assignments]
        except KeyError:
            raise ValueError(f"name {name!r} is not assigned at every index") from None
        product_assignment[name] = rp.class_of(ids)
    in_filter = J_true in fs
    sat = evaluate(rp.structure, phi, product_assignment)
    return LosReport(J_true, in_filter, sat, in_filter == sat, fs.is_ultra)


# ---------------------------------------------------------- preservation check


@dataclass(frozen=True)
class Theorem1Report:
    ultraproduct: Structure
    verdicts: dict[str, Verdict]
    per_factor_sets: dict[tuple[str, int, int], tuple[frozenset[int], ...]]
    transfer_ok: bool
    mode: str = "additive"

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts.values()) and self.transfer_ok


def _down_and_below(p: Poset, f: OperationTable, s: int, y: int) -> frozenset[int]:
    return frozenset(x for x in range(p.size) if p.leq[x, s] and p.leq[f.table[x], y])


def theorem1_check(fam: Family, fs: FilterSpec, *, mode: str = "additive") -> Theorem1Report:
    """Build the ultraproduct and check that every induced operation stays additive.

    ``mode="quasi"`` uses quasi-completeness (nonempty suprema) throughout.
    For unary operations the sets ``A_i = {x : x <= s_i and f_i(x) <= y_i}`` are
    recorded for every ``(s, y)`` with ``f(s) <= y``, and membership in the
    ultraproduct's ``A`` is checked to be filter-large membership in the ``A_i``.
    """
    check = {"additive": is_completely_additive, "quasi": is_quasi_complete}[mode]
    if not fs.is_ultra:
        raise PreconditionFailed("theorem1_check needs an ultrafilter")
    for i, m in enumerate(fam.members):
        if m.order is None:
            raise PreconditionFailed(f"member {i} is not a poset")
        for name, op in m.operations.items():
            v = check(m.order, op)
            if not v:
                raise PreconditionFailed(f"operation {name!r} of member {i} fails the {mode} check: {v.witness}")
    rp = ultraproduct(fam, fs)
    u = rp.structure
    verdicts = {name: check(u.order, op) for name, op in u.operations.items()}
    sets: dict[tuple[str, int, int], tuple[frozenset[int], ...]] = {}
    transfer_ok = True
    for name, op in u.operations.items():
        if op.arity != 1:
            continue
        for s, y in itertools.product(range(u.size), repeat=2):
            if not u.order.leq[op.table[s], y]:
                continue
            A = _down_and_below(u.order, op, s, y)
            per = tuple(
                _down_and_below(m.order, m.operations[name], int(rp.representatives[s, i]),
                                int(rp.representatives[y, i]))
                for i, m in enumerate(fam.members)
            )
            sets[(name, s, y)] = per
            for x in range(u.size):
                large = {i for i in range(len(per)) if int(rp.representatives[x, i]) in per[i]} in fs
                if large != (x in A):
                    transfer_ok = False
    return Theorem1Report(u, verdicts, sets, transfer_ok, mode)
