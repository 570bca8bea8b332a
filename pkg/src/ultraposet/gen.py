"""Seeded generation of posets, downset lattices and operations.

Randomness comes from :class:`random.Random` (Mersenne Twister MT19937), whose
output for a given integer seed is fixed across platforms and CPython versions.
"""
from __future__ import annotations

import itertools
import random
from typing import Iterator, Mapping

import numpy as np

from .caps import current_caps, require
from .errors import NotDownsetLattice, SizeOutOfRange
from .order import OperationTable, Poset, bits, transitive_closure


def gen_poset(seed: int, size: int) -> Poset:
    """Random DAG on ``size`` elements, closed transitively."""
    if not 1 <= size <= 12:
        raise SizeOutOfRange(f"poset size {size} outside 1..12")
    rng = random.Random(seed)
    perm = list(range(size))
    rng.shuffle(perm)
    density = rng.choice((0.15, 0.3, 0.5, 0.7))
    adj = np.zeros((size, size), dtype=bool)
    for i, j in itertools.combinations(range(size), 2):
        if rng.random() < density:
            adj[perm[i], perm[j]] = True
    return Poset([f"x{i}" for i in range(size)], transitive_closure(adj), check=False)


def enumerate_posets(n: int) -> Iterator[Poset]:
    """Every partial order on the labels ``0..n-1`` (labelled, not up to isomorphism)."""
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    labels = [str(i) for i in range(n)]
    eye = np.eye(n, dtype=bool)
    for choice in itertools.product((False, True), repeat=len(off)):
        m = eye.copy()
        for (a, b), on in zip(off, choice):
            m[a, b] = on
        if (m & m.T & ~eye).any():
            continue
        mi = m.astype(np.int64)
        if ((mi @ mi > 0) & ~m).any():
            continue
        yield Poset(labels, m, check=False)


def downset_lattice(base: Poset) -> Poset:
    """Downward-closed subsets of ``base`` ordered by inclusion."""
    down = base.down_masks
    sets = [m for m in range(1 << base.size) if all(down[x] & ~m == 0 for x in bits(m))]
    sets.sort(key=lambda m: (bin(m).count("1"), m))
    arr = np.array(sets, dtype=np.int64)
    leq = (arr[:, None] & ~arr[None, :]) == 0
    labels = ["{" + ",".join(base.labels[i] for i in bits(m)) + "}" for m in sets]
    return Poset(labels, leq, check=False)


def gen_downset_lattice(seed: int, base_size: int) -> Poset:
    if not 1 <= base_size <= 4:
        raise SizeOutOfRange(f"base size {base_size} outside 1..4")
    return downset_lattice(gen_poset(seed, base_size))


def join_irreducibles(lattice: Poset) -> list[int]:
    """Elements with exactly one lower cover."""
    lower = [0] * lattice.size
    for _, b in lattice.covers():
        lower[b] += 1
    return [x for x in range(lattice.size) if lower[x] == 1]


def is_distributive(lattice: Poset) -> bool:
    tables = lattice.lattice_tables
    if tables is None:
        return False
    meet, join = tables
    lhs = meet[:, join]  # x ∧ (y ∨ z), indexed [x, y, z]
    rhs = join[meet[:, :, None], meet[:, None, :]]
    return bool((lhs == rhs).all())


def _require_distributive(lattice: Poset) -> None:
    if lattice.bottom is None or not is_distributive(lattice):
        raise NotDownsetLattice("operation recipe needs a finite distributive lattice")


def additive_op_from_values(lattice: Poset, values: Mapping[tuple[int, ...], int], arity: int) -> OperationTable:
    """Extend values on tuples of join-irreducibles by joins.

    ``f(x_1..x_n)`` is the join of ``values[j_1..j_n]`` over join-irreducibles
    ``j_k <= x_k``.  In a distributive lattice join-irreducibles are join-prime,
    which makes the result completely additive.
    """
    _require_distributive(lattice)
    _, join = lattice.lattice_tables
    ji = join_irreducibles(lattice)
    below = [[j for j in ji if lattice.le(j, x)] for x in range(lattice.size)]
    n = lattice.size
    require(n ** arity, current_caps().table, "operation table size")
    table = np.empty((n,) * arity, dtype=np.int64)
    for args in itertools.product(range(n), repeat=arity):
        acc = lattice.bottom
        for js in itertools.product(*(below[a] for a in args)):
            acc = join[acc, values[js]]
        table[args] = acc
    return OperationTable(table, n)


def gen_additive_op(seed: int, lattice: Poset, arity: int) -> OperationTable:
    _require_distributive(lattice)
    if not 1 <= arity <= 2:
        raise SizeOutOfRange(f"arity {arity} outside 1..2")
    rng = random.Random(seed)
    ji = join_irreducibles(lattice)
    sparse = rng.random() < 0.3
    values = {}
    for js in itertools.product(ji, repeat=arity):
        if sparse and rng.random() < 0.5:
            values[js] = lattice.bottom
        else:
            values[js] = rng.randrange(lattice.size)
    return additive_op_from_values(lattice, values, arity)


def gen_quasi_op(seed: int, lattice: Poset, arity: int) -> OperationTable:
    """``g ∨ c`` for additive ``g`` and a random constant ``c``: preserves nonempty
    joins, and is not normal unless ``c`` is the bottom."""
    rng = random.Random(seed)
    g = gen_additive_op(rng.getrandbits(64), lattice, arity)
    c = rng.randrange(lattice.size)
    _, join = lattice.lattice_tables
    return OperationTable(join[g.table, c], lattice.size)


def gen_monotone_op(seed: int, p: Poset, arity: int, attempts: int = 20) -> OperationTable:
    """Random table repaired to monotonicity by upward rounding.

    Tuples are visited along a linear extension of the product order; each
    value is rounded up to a minimal common upper bound of its own random draw
    and the values at the tuple's lower covers.
    """
    n = p.size
    require(n ** arity, current_caps().table, "operation table size")
    rng = random.Random(seed)
    height = [bin(m).count("1") for m in p.down_masks]
    lower_covers = [[] for _ in range(n)]
    for a, b in p.covers():
        lower_covers[b].append(a)
    tuples = sorted(itertools.product(range(n), repeat=arity), key=lambda t: (sum(height[x] for x in t), t))

    def minimal(mask: int) -> list[int]:
        return [u for u in bits(mask) if mask & p.down_masks[u] == 1 << u]

    for _ in range(attempts):
        table = np.empty((n,) * arity, dtype=np.int64)
        ok = True
        for t in tuples:
            prev = [int(table[t[:k] + (c,) + t[k + 1:]]) for k in range(arity) for c in lower_covers[t[k]]]
            r = rng.randrange(n)
            cands = minimal(p.upper_bounds(prev + [r])) or minimal(p.upper_bounds(prev))
            if not cands:
                ok = False
                break
            table[t] = rng.choice(cands)
        if ok:
            return OperationTable(table, n)
    # constant maps are always monotone
    return OperationTable(np.full((n,) * arity, rng.randrange(n), dtype=np.int64), n)


def random_table(seed: int, n: int, arity: int) -> OperationTable:
    rng = random.Random(seed)
    return OperationTable(np.array([rng.randrange(n) for _ in range(n ** arity)]).reshape((n,) * arity), n)
