"""Complex algebras, atom structures and the canonical-isomorphism check.

Subsets of an ``n``-element carrier are bitmasks, so the complex algebra's
element with id ``m`` is the subset with bitmask ``m``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .caps import current_caps, require
from .errors import NotAtomic, PreconditionFailed, SignatureMismatch
from .order import (
    OperationTable, Poset, Verdict, bits, dm_completion, is_quasi_complete, subset_fold, sup,
)
from .product import Family, FilterSpec, reduced_product
from .structure import Structure

BOOLEAN_OPS = ("meet", "join", "compl")


@dataclass(frozen=True)
class BAO:
    """A finite Boolean algebra with operators."""

    lattice: Poset
    meet: OperationTable
    join: OperationTable
    complement: OperationTable
    operators: Mapping[str, OperationTable] = field(default_factory=dict)

    @property
    def atoms(self) -> tuple[int, ...]:
        bot = self.lattice.bottom
        return tuple(hi for lo, hi in self.lattice.covers() if lo == bot)

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    def to_structure(self, name: str = "bao") -> Structure:
        clash = set(self.operators) & set(BOOLEAN_OPS)
        if clash:
            raise SignatureMismatch(f"operator names collide with Boolean operations: {sorted(clash)}")
        ops = {"meet": self.meet, "join": self.join, "compl": self.complement, **self.operators}
        return Structure.from_poset(self.lattice, ops, name=name)

    @classmethod
    def from_lattice(cls, lattice: Poset, operators: Mapping[str, OperationTable] | None = None) -> BAO:
        """Read meet, join and complement off a finite Boolean lattice."""
        tables = lattice.lattice_tables
        if tables is None or lattice.bottom is None or lattice.top is None:
            raise ValueError("not a bounded lattice")
        meet, join = tables
        n = lattice.size
        comp = np.full(n, -1, dtype=np.int64)
        for x in range(n):
            cands = [c for c in range(n) if meet[x, c] == lattice.bottom and join[x, c] == lattice.top]
            if len(cands) != 1:
                raise ValueError(f"{lattice.labels[x]!r} has {len(cands)} complements; not Boolean")
            comp[x] = cands[0]
        return cls(lattice, OperationTable(meet), OperationTable(join), OperationTable(comp),
                   dict(operators or {}))


def _subset_label(s: Structure, mask: int) -> str:
    return "{" + ",".join(s.labels[i] for i in bits(mask)) + "}"


def complex_algebra(s: Structure) -> BAO:
    """Powerset algebra of ``s`` with one operator per relation.

    A relation ``R`` of arity ``n+1`` gives the ``n``-ary operator
    ``f_R(X_1..X_n) = {y : (x_1..x_n, y) in R for some x_j in X_j}``.
    """
    require(s.size, current_caps().complex, "carrier size for complex algebra")
    if s.order is not None:
        raise SignatureMismatch("complex_algebra expects a relational structure without an order")
    n = s.size
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    lattice = Poset([_subset_label(s, int(m)) for m in masks], leq, check=False)
    meet = OperationTable(masks[:, None] & masks[None, :], size)
    join = OperationTable(masks[:, None] | masks[None, :], size)
    comp = OperationTable((size - 1) & ~masks, size)
    weights = (1 << np.arange(n, dtype=np.int64))
    operators = {}
    for name, rel in sorted(s.relations.items()):
        if rel.ndim < 2:
            raise SignatureMismatch(f"relation {name!r} has arity {rel.ndim}; operators need arity >= 2")
        if name in BOOLEAN_OPS:
            raise SignatureMismatch(f"relation name {name!r} collides with a Boolean operation")
        # image mask of each atom tuple, then union over subset tuples
        t = (rel.astype(np.int64) * weights).sum(axis=-1)
        for axis in range(t.ndim):
            t = np.moveaxis(subset_fold(np.moveaxis(t, axis, -1), 0, np.bitwise_or), -1, axis)
        operators[name] = OperationTable(t, size)
    return BAO(lattice, meet, join, comp, operators)


def atom_structure(b: BAO) -> Structure:
    """Atoms of ``b`` with ``(a_1..a_n, c)`` in ``R_f`` iff ``c <= f(a_1..a_n)``."""
    p = b.lattice
    if p.bottom is None:
        raise NotAtomic("no least element")
    atoms = b.atoms
    for x in range(p.size):
        below = [a for a in atoms if p.le(a, x)]
        got = sup(p, below)
        if not (got.exists and got.id == x):
            raise NotAtomic(f"{p.labels[x]!r} is not the join of the atoms below it")
    at = np.array(atoms, dtype=np.int64)
    rels = {}
    for name, op in b.operators.items():
        vals = op.table[np.ix_(*([at] * op.arity))]
        rels[name] = p.leq[at.reshape((1,) * op.arity + (-1,)), vals[..., None]]
    return Structure([p.labels[a] for a in atoms], relations=rels, name="atoms")


def is_normal(p: Poset, f: OperationTable) -> bool:
    """``f`` returns the bottom whenever some argument is the bottom."""
    bot = p.bottom
    if bot is None:
        return True
    return all(bool((np.take(f.table, bot, axis=j) == bot).all()) for j in range(f.arity))


def check_quasi_complete_operators(b: BAO) -> Verdict:
    """Every operator preserves suprema of nonempty sets; witness names the first failure."""
    for name, op in sorted(b.operators.items()):
        v = is_quasi_complete(b.lattice, op)
        if not v:
            return Verdict(False, (name, v.witness))
    return Verdict(True)


@dataclass(frozen=True)
class GivantReport:
    lhs: BAO
    rhs: BAO
    canonical_map: tuple[int, ...]  # rhs id -> lhs id
    checks: Mapping[str, bool]
    is_iso: bool


def givant_check(fam: Family, fs: FilterSpec) -> GivantReport:
    """Compare the complex algebra of the ultraproduct with the completed ultraproduct
    of the complex algebras, through the canonical map.

    An element ``X/F`` of the ultraproduct of complex algebras goes to the set of
    classes ``u/F`` with ``{i : u_i in X_i}`` in ``F``.  Each ``X/F`` is handled
    through two representatives, which must give the same image.
    """
    if not fs.is_ultra:
        raise PreconditionFailed("givant_check needs an ultrafilter")
    structures = reduced_product(fam, fs, "ultraproduct")
    lhs = complex_algebra(structures.structure)

    cms = [complex_algebra(m) for m in fam.members]
    cm_family = Family(fam.index, tuple(c.to_structure(f"cm{i}") for i, c in enumerate(cms)))
    algebras = reduced_product(cm_family, fs, "ultraproduct_cm")
    ua = algebras.structure
    completion = dm_completion(ua.order)
    emb = completion.embedding
    checks = {}
    checks["embedding_onto"] = sorted(emb) == list(range(completion.lattice.size))
    if not checks["embedding_onto"]:
        # an infinite-scale phenomenon; finite quotients are already complete
        return GivantReport(lhs, lhs, (), checks, False)
    inv = np.empty(len(emb), dtype=np.int64)
    inv[list(emb)] = np.arange(len(emb))
    transported = {}
    for name in lhs.operators:
        t = ua.operations[name].table
        transported[name] = OperationTable(np.asarray(emb)[t[np.ix_(*([inv] * t.ndim))]])
    rhs = BAO.from_lattice(completion.lattice, transported)

    u_reps = structures.representatives
    n_members = len(fam.members)

    def image(rep_row) -> int:
        mask = 0
        for u in range(structures.structure.size):
            large = {i for i in range(n_members) if (int(rep_row[i]) >> int(u_reps[u, i])) & 1} in fs
            if large:
                mask |= 1 << u
        return mask

    cmap = []
    reps_agree = True
    for c in range(rhs.lattice.size):
        e = int(inv[c])
        first = image(algebras.representatives[e])
        reps_agree &= first == image(algebras.alt_representatives[e])
        cmap.append(first)
    checks["representative_independent"] = reps_agree
    phi = np.array(cmap, dtype=np.int64)
    checks["bijective"] = sorted(cmap) == list(range(lhs.lattice.size))
    checks["order"] = bool(np.array_equal(rhs.lattice.leq, lhs.lattice.leq[np.ix_(phi, phi)]))
    for name, a, b in (("meet", rhs.meet, lhs.meet), ("join", rhs.join, lhs.join),
                       ("compl", rhs.complement, lhs.complement)):
        checks[name] = bool(np.array_equal(phi[a.table], b.table[np.ix_(*([phi] * a.arity))]))
    for name, op in rhs.operators.items():
        other = lhs.operators[name].table
        checks[f"op:{name}"] = bool(np.array_equal(phi[op.table], other[np.ix_(*([phi] * op.arity))]))
    return GivantReport(lhs, rhs, tuple(cmap), checks, all(checks.values()))
