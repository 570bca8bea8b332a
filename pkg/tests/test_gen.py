
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    antichain, boolean4, chain, m3, n5, naive_additive, naive_closure, naive_downsets, naive_iso,
    naive_monotone,
)
from ultraposet.errors import NotDownsetLattice, SizeOutOfRange
from ultraposet.gen import (
    additive_op_from_values, downset_lattice, enumerate_posets, gen_additive_op, gen_downset_lattice,
    gen_monotone_op, gen_poset, gen_quasi_op, is_distributive, join_irreducibles,
)
from ultraposet.order import is_quasi_complete, validate_poset

seeds = st.integers(0, 2**64 - 1)


def test_gen_poset_basics():
    assert gen_poset(7, 1).size == 1
    assert gen_poset(7, 6) == gen_poset(7, 6)
    with pytest.raises(SizeOutOfRange):
        gen_poset(0, 13)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 9))
def test_gen_poset_passes_validator(seed, n):
    p = gen_poset(seed, n)
    q = validate_poset([(p.labels[a], p.labels[b]) for a, b in p.covers()], p.labels)
    assert q == p


def test_enumeration_counts():
    # labelled posets on 1..4 elements
    assert [sum(1 for _ in enumerate_posets(n)) for n in range(1, 5)] == [1, 3, 19, 219]


def test_enumerated_posets_are_closed():
    for p in enumerate_posets(3):
        assert p.pairs == naive_closure(3, p.pairs)


def test_downset_lattice_examples():
    assert naive_iso(downset_lattice(antichain(2)), boolean4())
    assert naive_iso(downset_lattice(chain(2)), chain(3))
    assert naive_iso(downset_lattice(chain(1)), chain(2))


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_downset_lattice_matches_enumeration(seed, n):
    base = gen_poset(seed, n)
    L = gen_downset_lattice(seed, n)
    assert L.size == len(naive_downsets(base))
    assert is_distributive(L)
    # Birkhoff: join-irreducibles of the downset lattice mirror the base poset
    assert len(join_irreducibles(L)) == n


def test_distributivity_detection():
    assert is_distributive(boolean4()) and is_distributive(chain(4))
    assert not is_distributive(m3()) and not is_distributive(n5())


def test_additive_recipe_examples():
    b = boolean4()
    ji = join_irreducibles(b)
    zero = additive_op_from_values(b, {(j,): 0 for j in ji}, 1)
    assert list(zero.table) == [0, 0, 0, 0]
    ident = additive_op_from_values(b, {(j,): j for j in ji}, 1)
    assert list(ident.table) == [0, 1, 2, 3]
    with pytest.raises(NotDownsetLattice):
        gen_additive_op(0, m3(), 1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 3), st.integers(1, 2))
def test_generated_ops_have_their_property(seed, base, arity):
    L = gen_downset_lattice(seed, base)
    if arity == 2 and L.size > 5:
        L = gen_downset_lattice(seed, 2)
    assert naive_additive(L, gen_additive_op(seed, L, arity))
    q = gen_quasi_op(seed, L, arity)
    assert naive_additive(L, q, nonempty=True) and is_quasi_complete(L, q)


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 2))
def test_monotone_generator(seed, n, arity):
    p = gen_poset(seed, n)
    f = gen_monotone_op(seed, p, arity)
    assert naive_monotone(p, f)
    assert f == gen_monotone_op(seed, p, arity)


def test_monotone_maps_on_two_chain_cover_all_three():
    c = chain(2)
    seen = {tuple(gen_monotone_op(s, c, 1).table) for s in range(200)}
    assert seen == {(0, 0), (0, 1), (1, 1)}
