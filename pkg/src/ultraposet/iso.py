"""Isomorphism search between small structures.

Backtracking over element assignments.  Candidates are restricted to elements
with the same invariant vector (per-relation, per-position occurrence counts and
per-operation preimage counts), and every partial map is forward-checked
against all relations and operations on the already-assigned elements.
"""
from __future__ import annotations

import numpy as np

from .caps import current_caps, require
from .errors import SignatureMismatch
from .structure import Structure


def _invariants(s: Structure) -> list[tuple]:
    n = s.size
    parts = []
    for name, arr in sorted(s.all_relations().items()):
        for axis in range(arr.ndim):
            parts.append(np.moveaxis(arr, axis, 0).reshape(n, -1).sum(axis=1))
        if arr.ndim >= 2:
            parts.append(np.array([arr[(i,) * arr.ndim] for i in range(n)], dtype=np.int64))
    for name, op in sorted(s.operations.items()):
        t = op.table
        parts.append(np.bincount(t.ravel(), minlength=n))
        parts.append(np.array([t[(i,) * op.arity] == i for i in range(n)], dtype=np.int64))
    if not parts:
        return [()] * n
    cols = np.stack(parts, axis=1)
    return [tuple(int(v) for v in row) for row in cols]


def is_isomorphism(a: Structure, b: Structure, mapping) -> bool:
    """Whether ``mapping[i]`` (ids of ``a`` to ids of ``b``) is an isomorphism."""
    if a.signature != b.signature or a.size != b.size:
        return False
    phi = np.asarray(mapping, dtype=np.int64)
    if phi.shape != (a.size,) or sorted(phi.tolist()) != list(range(b.size)):
        return False
    rb = b.all_relations()
    for name, arr in a.all_relations().items():
        if not np.array_equal(arr, rb[name][np.ix_(*([phi] * arr.ndim))]):
            return False
    for name, op in a.operations.items():
        other = b.operations[name].table
        if not np.array_equal(phi[op.table], other[np.ix_(*([phi] * op.arity))]):
            return False
    return True


def iso_search(a: Structure, b: Structure) -> tuple[int, ...] | None:
    """Find an isomorphism ``a -> b`` as a tuple of ids, or ``None``."""
    if a.signature != b.signature:
        raise SignatureMismatch(f"signatures differ: {a.signature} vs {b.signature}")
    cap = current_caps().iso
    require(a.size, cap, "carrier size for isomorphism search")
    require(b.size, cap, "carrier size for isomorphism search")
    if a.size != b.size:
        return None
    n = a.size
    inv_a, inv_b = _invariants(a), _invariants(b)
    if sorted(inv_a) != sorted(inv_b):
        return None
    by_inv: dict[tuple, list[int]] = {}
    for w, key in enumerate(inv_b):
        by_inv.setdefault(key, []).append(w)
    # assign rarest invariant classes first
    order = sorted(range(n), key=lambda v: (len(by_inv[inv_a[v]]), v))
    rels = [(arr, b.all_relations()[name]) for name, arr in sorted(a.all_relations().items())]
    ops = [(op.table, b.operations[name].table) for name, op in sorted(a.operations.items())]
    phi = np.full(n, -1, dtype=np.int64)
    psi = np.full(n, -1, dtype=np.int64)
    dom: list[int] = []
    img: list[int] = []

    def consistent(v: int, w: int) -> bool:
        da = dom + [v]
        db = img + [w]
        for ra, rb in rels:
            k = ra.ndim
            for pos in range(k):
                ia = [da] * k
                ib = [db] * k
                ia[pos] = [v]
                ib[pos] = [w]
                if not np.array_equal(ra[np.ix_(*ia)], rb[np.ix_(*ib)]):
                    return False
        for ta, tb in ops:
            k = ta.ndim
            for pos in range(k):
                ia = [da] * k
                ib = [db] * k
                ia[pos] = [v]
                ib[pos] = [w]
                va = ta[np.ix_(*ia)].ravel()
                vb = tb[np.ix_(*ib)].ravel()
                mapped = phi[va]
                known = mapped >= 0
                if not np.array_equal(mapped[known], vb[known]):
                    return False
                # an unassigned value must not land on an already-used image
                if (psi[vb[~known]] >= 0).any():
                    return False
        return True

    def search(depth: int) -> bool:
        if depth == n:
            return True
        v = order[depth]
        for w in by_inv[inv_a[v]]:
            if psi[w] >= 0:
                continue
            phi[v] = w
            psi[w] = v
            if consistent(v, w):
                dom.append(v)
                img.append(w)
                if search(depth + 1):
                    return True
                dom.pop()
                img.pop()
            phi[v] = -1
            psi[w] = -1
        return False

    if not search(0):
        return None
    result = tuple(int(x) for x in phi)
    assert is_isomorphism(a, b, result)
    return result
