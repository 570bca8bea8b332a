import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import chain, naive_additive, naive_image, naive_iso
from ultraposet.complex import (
    BAO, atom_structure, check_quasi_complete_operators, complex_algebra, givant_check, is_normal,
)
from ultraposet.errors import NotAtomic, PreconditionFailed, SignatureMismatch
from ultraposet.iso import iso_search
from ultraposet.order import OperationTable, Poset, bits, is_completely_additive
from ultraposet.product import Family, make_filter, ultraproduct
from ultraposet.structure import Structure

EXAMPLE = Structure.from_tuples(["0", "1"], {"R": (2, {(0, 1), (1, 1)})}, name="ex")


def relational(n, tuples_by_name):
    return Structure.from_tuples([f"e{i}" for i in range(n)], tuples_by_name)


def rel_structures(max_n=3, arities=(2,)):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        rels = {}
        for k, ar in enumerate(arities):
            cells = list(itertools.product(range(n), repeat=ar))
            chosen = draw(st.sets(st.sampled_from(cells)))
            rels[f"R{k}"] = (ar, chosen)
        return relational(n, rels)
    return build()


def test_example_images():
    b = complex_algebra(EXAMPLE)
    f = b.operators["R"]
    assert [f(m) for m in range(4)] == [0b00, 0b10, 0b10, 0b10]


@settings(max_examples=40, deadline=None)
@given(rel_structures(3, (2, 3)))
def test_operators_are_existential_images(s):
    b = complex_algebra(s)
    n = s.size
    for name, op in b.operators.items():
        tuples = s.relation_tuples(name)
        for masks in itertools.product(range(1 << n), repeat=op.arity):
            Xs = [set(bits(m)) for m in masks]
            assert set(bits(op(*masks))) == naive_image(tuples, Xs)
        assert op(*([0] * op.arity)) == 0
        assert is_normal(b.lattice, op)


@settings(max_examples=30, deadline=None)
@given(rel_structures(3, (2,)))
def test_operators_distribute_over_union(s):
    f = complex_algebra(s).operators["R0"]
    for x, y in itertools.product(range(1 << s.size), repeat=2):
        assert f(x | y) == f(x) | f(y)


@settings(max_examples=15, deadline=None)
@given(rel_structures(2, (2, 3)))
def test_operators_are_completely_additive(s):
    b = complex_algebra(s)
    for op in b.operators.values():
        assert is_completely_additive(b.lattice, op)
        assert naive_additive(b.lattice, op)


def test_rejections():
    with pytest.raises(SignatureMismatch):
        complex_algebra(Structure.from_poset(chain(2)))
    with pytest.raises(SignatureMismatch):
        complex_algebra(Structure.from_tuples(["a"], {"U": (1, {(0,)})}))


# ---------------------------------------------------------------- atom structures


def test_atom_structure_round_trip():
    at = atom_structure(complex_algebra(EXAMPLE))
    assert iso_search(at.renamed("ex"), EXAMPLE) is not None


@settings(max_examples=30, deadline=None)
@given(rel_structures(3, (2, 3)))
def test_atom_structure_inverts_complex_algebra(s):
    at = atom_structure(complex_algebra(s))
    assert at.size == s.size
    for name in s.relations:
        assert at.relation_tuples(name) == s.relation_tuples(name)


def powerset_bao(n, ops):
    cm = complex_algebra(Structure.from_tuples([str(i) for i in range(n)], {}))
    return BAO(cm.lattice, cm.meet, cm.join, cm.complement, ops)


def test_identity_and_top_operators():
    size = 1 << 2
    b = powerset_bao(2, {"f": OperationTable(list(range(size)), size)})
    assert atom_structure(b).relation_tuples("f") == {(0, 0), (1, 1)}
    b = powerset_bao(2, {"f": OperationTable([size - 1] * size, size)})
    assert atom_structure(b).relation_tuples("f") == {(a, c) for a in range(2) for c in range(2)}


def test_non_atomic_rejected():
    # in a 3-chain the only atom is the middle element, so the top is not a join of atoms
    p = Poset(["0", "1", "2"], np.triu(np.ones((3, 3), dtype=bool)))
    fake = BAO(p, OperationTable([[0, 0, 0], [0, 1, 1], [0, 1, 2]]),
               OperationTable([[0, 1, 2], [1, 1, 2], [2, 2, 2]]), OperationTable([2, 1, 0]), {})
    with pytest.raises(NotAtomic):
        atom_structure(fake)


def test_from_lattice_recovers_boolean_operations():
    cm = complex_algebra(EXAMPLE)
    again = BAO.from_lattice(cm.lattice, cm.operators)
    assert again.meet == cm.meet and again.join == cm.join and again.complement == cm.complement


def test_quasi_complete_operator_checks():
    assert check_quasi_complete_operators(complex_algebra(EXAMPLE))
    size = 4
    top = powerset_bao(2, {"f": OperationTable([3] * size, size)})
    assert check_quasi_complete_operators(top)
    assert not is_normal(top.lattice, top.operators["f"])
    comp = powerset_bao(2, {"f": OperationTable([3, 2, 1, 0], size)})
    assert not check_quasi_complete_operators(comp)


# ---------------------------------------------------------------- canonical map


def test_givant_examples():
    fam = Family.of([EXAMPLE, EXAMPLE])
    r = givant_check(fam, make_filter(fam.index, [0]))
    assert r.is_iso and all(r.checks.values())
    assert naive_iso(r.lhs.lattice, complex_algebra(EXAMPLE).lattice)

    other = Structure.from_tuples(["0", "1"], {"R": (2, {(0, 0)})}, name="other")
    fam = Family.of([EXAMPLE, other])
    r = givant_check(fam, make_filter(fam.index, [1]))
    assert r.is_iso
    cm_other = complex_algebra(other)
    assert [r.lhs.operators["R"](m) for m in range(4)] == [cm_other.operators["R"](m) for m in range(4)]


def test_givant_three_indices():
    ms = [relational(3, {"R": (2, {(0, 1), (1, 2)})}),
          relational(3, {"R": (2, {(2, 2)})}),
          relational(3, {"R": (2, {(0, 0), (0, 2), (2, 1)})})]
    fam = Family.of(ms)
    r = givant_check(fam, make_filter(fam.index, [2]))
    assert r.is_iso and r.lhs.lattice.size == 8


def test_givant_needs_ultrafilter():
    fam = Family.of([EXAMPLE, EXAMPLE])
    with pytest.raises(PreconditionFailed):
        givant_check(fam, make_filter(fam.index, [0, 1]))


@settings(max_examples=25, deadline=None)
@given(st.lists(rel_structures(3, (2,)), min_size=1, max_size=3), st.data())
def test_givant_random(ms, data):
    fam = Family.of(ms)
    j = data.draw(st.integers(0, len(ms) - 1))
    r = givant_check(fam, make_filter(fam.index, [j]))
    assert r.is_iso
    u = ultraproduct(fam, make_filter(fam.index, [j])).structure
    assert r.lhs.lattice.size == 1 << u.size
