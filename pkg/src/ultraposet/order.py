"""Finite posets, suprema and order-theoretic property checks.

Elements are dense integer ids ``0..n-1``; the order is a boolean matrix
``leq[a, b]`` meaning ``a <= b``.  Subsets are handled as bitmasks, with bit
``i`` standing for element ``i``.  The exhaustive checks enumerate every
subset (or tuple of subsets) as a bitmask and fold upper-bound masks over it,
so one check is a handful of numpy passes over ``2**n`` lanes per argument.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .caps import current_caps, require
from .errors import (
    AntisymmetryViolation,
    ArityCarrierMismatch,
    DuplicateLabel,
    PositionOutOfRange,
    UnknownElement,
)

UP = "up"
DOWN = "down"


class Element(NamedTuple):
    id: int
    label: str


def bits(mask: int) -> Iterable[int]:
    """Yield the element ids in ``mask`` in ascending order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def to_mask(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


class Poset:
    """A finite partial order.

    ``leq`` is copied into a read-only boolean matrix.  Pass ``check=False``
    only for orders that are posets by construction (products, quotients).
    """

    def __init__(self, labels: Sequence[str], leq, *, check: bool = True):
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise ValueError("carrier must be nonempty")
        if len(set(labels)) != len(labels):
            dup = next(x for x in labels if labels.count(x) > 1)
            raise DuplicateLabel(f"duplicate label {dup!r}")
        m = np.array(leq, dtype=bool)
        n = len(labels)
        if m.shape != (n, n):
            raise ValueError(f"order matrix has shape {m.shape}, expected {(n, n)}")
        m.setflags(write=False)
        self.labels = labels
        self.leq = m
        if check:
            _check_poset_axioms(labels, m)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.labels, self.leq.tobytes()))

    def __repr__(self):
        return f"Poset({list(self.labels)}, covers={[(self.labels[a], self.labels[b]) for a, b in self.covers()]})"

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"no element labelled {label!r}") from None

    def element(self, i: int) -> Element:
        return Element(int(i), self.labels[i])

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    @cached_property
    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((int(a), int(b)) for a, b in np.argwhere(self.leq))

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """``up_masks[a]`` is the bitmask of elements ``>= a``."""
        return tuple(_row_mask(row) for row in self.leq)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        return tuple(_row_mask(col) for col in self.leq.T)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(a, b)`` with ``a < b`` and nothing strictly between."""
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        via = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        return [(int(a), int(b)) for a, b in np.argwhere(strict & ~via)]

    def least_in(self, mask: int) -> int | None:
        """The least element of the subset ``mask``, if it has one."""
        up = self.up_masks
        for u in bits(mask):
            if mask & ~up[u] == 0:
                return u
        return None

    def greatest_in(self, mask: int) -> int | None:
        down = self.down_masks
        for u in bits(mask):
            if mask & ~down[u] == 0:
                return u
        return None

    @cached_property
    def bottom(self) -> int | None:
        return self.least_in(self.full_mask)

    @cached_property
    def top(self) -> int | None:
        return self.greatest_in(self.full_mask)

    def upper_bounds(self, ids: Iterable[int]) -> int:
        m = self.full_mask
        for x in ids:
            m &= self.up_masks[x]
        return m

    def lower_bounds(self, ids: Iterable[int]) -> int:
        m = self.full_mask
        for x in ids:
            m &= self.down_masks[x]
        return m

    def join(self, a: int, b: int) -> int | None:
        return self.least_in(self.up_masks[a] & self.up_masks[b])

    def meet(self, a: int, b: int) -> int | None:
        return self.greatest_in(self.down_masks[a] & self.down_masks[b])

    @cached_property
    def lattice_tables(self) -> tuple[np.ndarray, np.ndarray] | None:
        """``(meet, join)`` tables, or ``None`` when some pair lacks one."""
        n = self.size
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(a, n):
                j = self.join(a, b)
                m = self.meet(a, b)
                if j is None or m is None:
                    return None
                join[a, b] = join[b, a] = j
                meet[a, b] = meet[b, a] = m
        meet.setflags(write=False)
        join.setflags(write=False)
        return meet, join

    def is_lattice(self) -> bool:
        return self.lattice_tables is not None


def _row_mask(row) -> int:
    # little-endian bit order: element i -> bit i
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _check_poset_axioms(labels, m) -> None:
    n = len(labels)
    if not m.diagonal().all():
        i = int(np.flatnonzero(~m.diagonal())[0])
        raise ValueError(f"order is not reflexive at {labels[i]!r}")
    sym = m & m.T & ~np.eye(n, dtype=bool)
    if sym.any():
        a, b = (int(v) for v in np.argwhere(sym)[0])
        raise AntisymmetryViolation([labels[a], labels[b], labels[a]])
    mi = m.astype(np.int64)
    if ((mi @ mi > 0) & ~m).any():
        raise ValueError("order is not transitive")


def transitive_closure(adj: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a boolean adjacency matrix (Warshall)."""
    r = np.array(adj, dtype=bool) | np.eye(len(adj), dtype=bool)
    for k in range(len(r)):
        r |= r[:, k, None] & r[None, k, :]
    return r


def _find_path(adj: np.ndarray, src: int, dst: int) -> list[int]:
    prev = {src: None}
    frontier = [src]
    while frontier:
        nxt = []
        for u in frontier:
            for v in np.flatnonzero(adj[u]):
                v = int(v)
                if v not in prev:
                    prev[v] = u
                    nxt.append(v)
        frontier = nxt
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def validate_poset(candidate_pairs: Iterable[tuple[str, str]], elements: Sequence[str]) -> Poset:
    """Close generating pairs ``a <= b`` reflexively and transitively.

    Raises ``AntisymmetryViolation`` naming a cycle when the closure would
    identify two distinct elements.
    """
    labels = tuple(elements)
    seen = set()
    for lab in labels:
        if lab in seen:
            raise DuplicateLabel(f"duplicate label {lab!r}")
        seen.add(lab)
    if not labels:
        raise ValueError("carrier must be nonempty")
    idx = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    adj = np.zeros((n, n), dtype=bool)
    for a, b in candidate_pairs:
        for lab in (a, b):
            if lab not in idx:
                raise UnknownElement(f"no element labelled {lab!r}")
        adj[idx[a], idx[b]] = True
    closed = transitive_closure(adj)
    sym = closed & closed.T & ~np.eye(n, dtype=bool)
    if sym.any():
        a, b = (int(v) for v in np.argwhere(sym)[0])
        edges = adj & ~np.eye(n, dtype=bool)
        cycle = _find_path(edges, a, b) + _find_path(edges, b, a)[1:]
        raise AntisymmetryViolation([labels[i] for i in cycle])
    return Poset(labels, closed, check=False)


# ---------------------------------------------------------------- operations


class OperationTable:
    """A total ``arity``-ary operation on ``{0..size-1}`` stored as an ndarray."""

    def __init__(self, table, size: int | None = None):
        t = np.array(table, dtype=np.int64)
        if t.ndim < 1:
            raise ValueError("operation arity must be at least 1")
        n = t.shape[0] if size is None else size
        if any(d != n for d in t.shape):
            raise ValueError(f"table shape {t.shape} is not {(n,) * t.ndim}")
        if t.size and (t.min() < 0 or t.max() >= n):
            raise ValueError("table output outside the carrier")
        t.setflags(write=False)
        self.table = t
        self.size = n

    @property
    def arity(self) -> int:
        return self.table.ndim

    def __call__(self, *args: int) -> int:
        return int(self.table[args])

    def __eq__(self, other):
        if not isinstance(other, OperationTable):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.table.shape, self.table.tobytes()))

    def __repr__(self):
        return f"OperationTable(arity={self.arity}, size={self.size})"

    @classmethod
    def from_function(cls, size: int, arity: int, fn) -> OperationTable:
        t = np.empty((size,) * arity, dtype=np.int64)
        for args in itertools.product(range(size), repeat=arity):
            t[args] = fn(*args)
        return cls(t, size)

    def rows(self):
        for args in itertools.product(range(self.size), repeat=self.arity):
            yield args, int(self.table[args])


def _check_fits(p: Poset, f: OperationTable) -> None:
    if f.size != p.size:
        raise ArityCarrierMismatch(f"operation is on {f.size} elements, poset has {p.size}")


# ------------------------------------------------------------------- suprema


@dataclass(frozen=True)
class SupResult:
    exists: bool
    value: Element | None = None
    reason: str | None = None

    @property
    def id(self) -> int | None:
        return None if self.value is None else self.value.id


NO_UPPER = "no upper bound"
NO_LEAST = "no least upper bound"
NO_LOWER = "no lower bound"
NO_GREATEST = "no greatest lower bound"


def sup(p: Poset, xs: Iterable[int], direction: str = UP) -> SupResult:
    """Least upper bound (``direction="up"``) or greatest lower bound of ``xs``."""
    xs = list(xs)
    for x in xs:
        if not (isinstance(x, (int, np.integer)) and 0 <= x < p.size):
            raise UnknownElement(f"{x!r} is not an element id")
    if direction == UP:
        bounds = p.upper_bounds(xs)
        best = p.least_in(bounds)
        none_reason, no_best = NO_UPPER, NO_LEAST
    elif direction == DOWN:
        bounds = p.lower_bounds(xs)
        best = p.greatest_in(bounds)
        none_reason, no_best = NO_LOWER, NO_GREATEST
    else:
        raise ValueError(f"direction must be 'up' or 'down', not {direction!r}")
    if best is not None:
        return SupResult(True, p.element(best))
    return SupResult(False, reason=none_reason if bounds == 0 else no_best)


def inf(p: Poset, xs: Iterable[int]) -> SupResult:
    return sup(p, xs, DOWN)


# ---------------------------------------------------- vectorized subset folds


def subset_fold(values: np.ndarray, identity: int, op) -> np.ndarray:
    """Fold ``op`` over every subset of the last axis.

    For ``values`` of shape ``(..., n)`` returns shape ``(..., 2**n)`` whose
    entry at bitmask ``S`` is ``op`` reduced over ``values[..., i]`` for ``i``
    in ``S`` (``identity`` for the empty set).
    """
    n = values.shape[-1]
    out = np.empty(values.shape[:-1] + (1 << n,), dtype=values.dtype)
    out[..., 0] = identity
    for k in range(n):
        lo = 1 << k
        op(out[..., :lo], values[..., k : k + 1], out=out[..., lo : 2 * lo])
    return out


def _fold_all_axes(t: np.ndarray, identity: int, op) -> np.ndarray:
    for axis in range(t.ndim):
        t = np.moveaxis(subset_fold(np.moveaxis(t, axis, -1), identity, op), -1, axis)
    return t


class _MaskTables:
    """Lookup tables over all ``2**n`` bitmasks of a small poset."""

    def __init__(self, p: Poset):
        n = p.size
        self.full = (1 << n) - 1
        self.up = np.array(p.up_masks, dtype=np.int64)
        self.down = np.array(p.down_masks, dtype=np.int64)
        masks = np.arange(1 << n, dtype=np.int64)
        least = np.full(1 << n, -1, dtype=np.int64)
        greatest = np.full(1 << n, -1, dtype=np.int64)
        for u in range(n):
            member = (masks >> u) & 1 == 1
            least[member & ((masks & ~self.up[u]) == 0)] = u
            greatest[member & ((masks & ~self.down[u]) == 0)] = u
        self.least = least
        self.greatest = greatest
        # upper/lower bound masks and sup/inf of every subset
        self.ub = subset_fold(self.up, self.full, np.bitwise_and)
        self.lb = subset_fold(self.down, self.full, np.bitwise_and)
        self.sup = least[self.ub]
        self.inf = greatest[self.lb]


def _tables(p: Poset) -> _MaskTables:
    t = p.__dict__.get("_mask_tables")
    if t is None:
        t = _MaskTables(p)
        p.__dict__["_mask_tables"] = t
    return t


# --------------------------------------------------------------- properties


@dataclass(frozen=True)
class MonotoneWitness:
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    f_lower: int
    f_upper: int


@dataclass(frozen=True)
class AdditivityWitness:
    subsets: tuple[frozenset[int], ...]
    sups: tuple[int, ...]
    image_sup: SupResult
    f_of_sups: Element


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: object = None

    def __bool__(self):
        return self.holds


def is_monotone(p: Poset, f: OperationTable) -> Verdict:
    """Coordinatewise ``<=``-preservation; witness is the first violating pair."""
    _check_fits(p, f)
    n, k = p.size, f.arity
    lo_idx, hi_idx = np.nonzero(p.leq & ~np.eye(n, dtype=bool))
    for axis in range(k):
        moved = np.moveaxis(f.table, axis, 0).reshape(n, -1)
        ok = p.leq[moved[lo_idx], moved[hi_idx]]
        if not ok.all():
            pair, rest = (int(v) for v in np.argwhere(~ok)[0])
            others = np.unravel_index(rest, (n,) * (k - 1)) if k > 1 else ()
            others = [int(v) for v in others]
            lower = tuple(others[:axis] + [int(lo_idx[pair])] + others[axis:])
            upper = tuple(others[:axis] + [int(hi_idx[pair])] + others[axis:])
            return Verdict(False, MonotoneWitness(lower, upper, f(*lower), f(*upper)))
    return Verdict(True)


def _additivity_violations(p: Poset, f: OperationTable, nonempty: bool):
    tabs = _tables(p)
    # ub_masks[X_1, ..., X_k] = upper bounds of {f(x_1..x_k) : x_j in X_j}
    ub_masks = _fold_all_axes(tabs.up[f.table], tabs.full, np.bitwise_and)
    image_sup = tabs.least[ub_masks]
    k = f.arity
    s = tabs.sup
    exists = s >= 0
    safe = np.where(exists, s, 0)
    expected = f.table[np.ix_(*([safe] * k))]
    valid = np.ones((1,) * k, dtype=bool)
    for axis in range(k):
        shape = [1] * k
        shape[axis] = len(exists)
        valid = valid & exists.reshape(shape)
    bad = valid & (image_sup != expected)
    if nonempty:
        for axis in range(k):
            np.moveaxis(bad, axis, 0)[0] = False
    return bad, tabs


def _additivity(p: Poset, f: OperationTable, nonempty: bool) -> Verdict:
    _check_fits(p, f)
    require(p.size, current_caps().additive(f.arity), f"carrier size for arity-{f.arity} additivity check")
    bad, tabs = _additivity_violations(p, f, nonempty)
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return Verdict(True)
    masks = [int(m) for m in hits[0]]
    subsets = tuple(frozenset(bits(m)) for m in masks)
    sups = tuple(int(tabs.sup[m]) for m in masks)
    image = {f(*args) for args in itertools.product(*subsets)}
    return Verdict(False, AdditivityWitness(subsets, sups, sup(p, image), p.element(f(*sups))))


def is_completely_additive(p: Poset, f: OperationTable) -> Verdict:
    """Whether ``f`` carries suprema of subsets (empty included) to suprema.

    Tuples where some ``sup X_j`` does not exist impose no constraint.  The
    witness is the first violating tuple of subsets in ascending bitmask order.
    """
    return _additivity(p, f, nonempty=False)


def is_quasi_complete(p: Poset, f: OperationTable) -> Verdict:
    """Like :func:`is_completely_additive` but over nonempty subsets only."""
    return _additivity(p, f, nonempty=True)


def additivity_violation(p: Poset, f: OperationTable, subsets: Sequence[Iterable[int]]) -> bool:
    """Direct test of one tuple of subsets; handy for checking reported witnesses."""
    subsets = [list(x) for x in subsets]
    sups = [sup(p, x) for x in subsets]
    if not all(s.exists for s in sups):
        return False
    image = {f(*args) for args in itertools.product(*subsets)}
    got = sup(p, image)
    return not (got.exists and got.id == f(*(s.id for s in sups)))


# ----------------------------------------------------------- unary instances


@dataclass(frozen=True)
class UnaryInstanceSpec:
    """Fix every argument but the one at 1-based ``position``."""

    position: int
    fixed_args: tuple[int, ...]


def unary_instance(f: OperationTable, spec: UnaryInstanceSpec) -> OperationTable:
    if f.arity < 2:
        raise PositionOutOfRange("unary instances need an operation of arity >= 2")
    if not 1 <= spec.position <= f.arity:
        raise PositionOutOfRange(f"position {spec.position} outside 1..{f.arity}")
    if len(spec.fixed_args) != f.arity - 1:
        raise PositionOutOfRange(f"expected {f.arity - 1} fixed arguments, got {len(spec.fixed_args)}")
    for a in spec.fixed_args:
        if not 0 <= a < f.size:
            raise UnknownElement(f"{a!r} is not an element id")
    j = spec.position - 1
    index = list(spec.fixed_args[:j]) + [slice(None)] + list(spec.fixed_args[j:])
    return OperationTable(f.table[tuple(index)], f.size)


def unary_instance_specs(f: OperationTable) -> list[UnaryInstanceSpec]:
    return [
        UnaryInstanceSpec(j, fixed)
        for j in range(1, f.arity + 1)
        for fixed in itertools.product(range(f.size), repeat=f.arity - 1)
    ]


@dataclass(frozen=True)
class LemmaReport:
    joint: Verdict
    per_instance: dict[UnaryInstanceSpec, bool]
    agree: bool

    @property
    def all_instances(self) -> bool:
        return all(self.per_instance.values())


def _unary_batch(p: Poset, tables: np.ndarray) -> np.ndarray:
    """Complete-additivity verdicts for a stack of unary tables, shape (m, n)."""
    tabs = _tables(p)
    image_sup = tabs.least[subset_fold(tabs.up[tables], tabs.full, np.bitwise_and)]
    exists = tabs.sup >= 0
    expected = tables[:, np.where(exists, tabs.sup, 0)]
    return ~((image_sup != expected) & exists).any(axis=1)


def check_lemma_equivalence(p: Poset, f: OperationTable) -> LemmaReport:
    """Joint complete additivity versus additivity of every unary instance."""
    _check_fits(p, f)
    if f.arity < 2:
        raise PositionOutOfRange("the joint/per-coordinate equivalence needs arity >= 2")
    joint = is_completely_additive(p, f)
    require(p.size, current_caps().additive1, "carrier size for unary instance checks")
    specs = unary_instance_specs(f)
    stacked = np.stack([unary_instance(f, s).table for s in specs])
    verdicts = _unary_batch(p, stacked)
    per = {s: bool(v) for s, v in zip(specs, verdicts)}
    return LemmaReport(joint, per, joint.holds == all(per.values()))


# ---------------------------------------------------------------- completion


@dataclass(frozen=True)
class CompletionResult:
    lattice: Poset
    embedding: tuple[int, ...]
    cuts: tuple[int, ...] = field(repr=False)


def _cut_label(p: Poset, mask: int) -> str:
    return "{" + ",".join(p.labels[i] for i in bits(mask)) + "}"


def dm_completion(p: Poset) -> CompletionResult:
    """Dedekind-MacNeille completion by closing every subset under lower-of-upper.

    Completion elements are the cuts, ordered by inclusion; a cut that is the
    principal downset of ``x`` keeps the label of ``x``.
    """
    require(p.size, current_caps().dm, "carrier size for completion")
    tabs = _tables(p)
    closure = tabs.lb[tabs.ub]
    cuts = [int(c) for c in np.unique(closure)]
    cuts.sort(key=lambda c: (bin(c).count("1"), c))
    pos = {c: i for i, c in enumerate(cuts)}
    principal = {m: x for x, m in enumerate(p.down_masks)}
    labels = []
    taken = set(p.labels)
    for c in cuts:
        if c in principal:
            labels.append(p.labels[principal[c]])
            continue
        lab = _cut_label(p, c)
        while lab in taken:
            lab += "'"
        taken.add(lab)
        labels.append(lab)
    arr = np.array(cuts, dtype=np.int64)
    leq = (arr[:, None] & ~arr[None, :]) == 0
    lattice = Poset(labels, leq, check=False)
    embedding = tuple(pos[m] for m in p.down_masks)
    return CompletionResult(lattice, embedding, tuple(cuts))


def is_complete_lattice(p: Poset) -> bool:
    """Every subset (empty included) has a supremum and an infimum."""
    if p.size <= 16:
        tabs = _tables(p)
        return bool((tabs.sup >= 0).all() and (tabs.inf >= 0).all())
    return p.bottom is not None and p.top is not None and p.is_lattice()
