import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    antichain, boolean4, chain, const_op, identity_op, join_op, m3, meet_op, n5, naive_additive,
    naive_closure, naive_cuts, naive_monotone, naive_sup, naive_unary_instances, naive_violation,
)
from ultraposet.errors import (
    AntisymmetryViolation, ArityCarrierMismatch, CapExceeded, DuplicateLabel, PositionOutOfRange,
    UnknownElement,
)
from ultraposet.gen import gen_monotone_op, gen_poset, random_table
from ultraposet.order import (
    OperationTable, Poset, UnaryInstanceSpec, additivity_violation, bits, check_lemma_equivalence,
    dm_completion, inf, is_complete_lattice, is_completely_additive, is_monotone, is_quasi_complete,
    sup, unary_instance, unary_instance_specs, validate_poset,
)

seeds = st.integers(0, 2**64 - 1)


def complement(p):
    return OperationTable([3, 2, 1, 0], p.size)


# ---------------------------------------------------------------- validate


def test_single_edge_closes_to_two_chain():
    p = validate_poset([("a", "b")], ["a", "b"])
    assert p.pairs == {(0, 0), (1, 1), (0, 1)}


def test_two_cycle_is_rejected_with_cycle():
    with pytest.raises(AntisymmetryViolation) as exc:
        validate_poset([("a", "b"), ("b", "a")], ["a", "b"])
    assert exc.value.cycle[0] == exc.value.cycle[-1]
    assert set(exc.value.cycle) == {"a", "b"}


def test_long_cycle_reports_a_real_cycle():
    pairs = [("a", "b"), ("b", "c"), ("c", "d"), ("d", "b")]
    with pytest.raises(AntisymmetryViolation) as exc:
        validate_poset(pairs, list("abcd"))
    cyc = exc.value.cycle
    assert cyc[0] == cyc[-1]
    for x, y in zip(cyc, cyc[1:]):
        assert (x, y) in pairs


def test_diamond_closure_matches_oracle():
    p = validate_poset([("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")], list("abcd"))
    assert len(p.pairs) == 9
    assert p.pairs == naive_closure(4, {(0, 1), (0, 2), (1, 3), (2, 3)})


def test_bad_inputs():
    with pytest.raises(DuplicateLabel):
        validate_poset([], ["a", "a"])
    with pytest.raises(UnknownElement):
        validate_poset([("a", "z")], ["a"])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.sets(st.tuples(st.integers(0, 6), st.integers(0, 6)), max_size=14))
def test_validate_agrees_with_naive_closure(n, raw):
    pairs = {(a, b) for a, b in raw if a < n and b < n}
    labels = [f"v{i}" for i in range(n)]
    closed = naive_closure(n, pairs)
    cyclic = any((b, a) in closed for a, b in closed if a != b)
    named = [(labels[a], labels[b]) for a, b in pairs]
    if cyclic:
        with pytest.raises(AntisymmetryViolation):
            validate_poset(named, labels)
    else:
        assert validate_poset(named, labels).pairs == closed


def test_poset_rejects_non_poset_matrix():
    with pytest.raises(AntisymmetryViolation):
        Poset(["a", "b"], np.ones((2, 2), dtype=bool))


# ---------------------------------------------------------------- sup / inf


def test_sup_examples():
    c = chain(2)
    assert sup(c, []).id == 0
    assert sup(c, [1]).id == 1
    r = sup(antichain(2), [0, 1])
    assert not r.exists and r.reason == "no upper bound"
    assert inf(c, []).id == 1


def test_sup_without_least_upper_bound():
    # two minimal upper bounds over a 2-antichain
    p = validate_poset([("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")], list("abcd"))
    r = sup(p, [0, 1])
    assert not r.exists and r.reason == "no least upper bound"


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8), st.data())
def test_sup_and_inf_match_scan(seed, n, data):
    p = gen_poset(seed, n)
    xs = data.draw(st.sets(st.integers(0, n - 1)))
    got = sup(p, xs)
    assert (got.id if got.exists else None) == naive_sup(p, xs)
    got = inf(p, xs)
    assert (got.id if got.exists else None) == naive_sup(p, xs, down=True)


# ---------------------------------------------------------------- monotone


def test_monotone_examples():
    b = boolean4()
    assert is_monotone(b, identity_op(b))
    assert is_monotone(b, join_op(b))
    v = is_monotone(b, complement(b))
    assert not v
    w = v.witness
    assert w.lower == (0,) and w.upper == (1,) and w.f_lower == 3 and w.f_upper == 2


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 2), st.booleans())
def test_monotone_matches_scan(seed, n, arity, repaired):
    p = gen_poset(seed, n)
    f = gen_monotone_op(seed, p, arity) if repaired else random_table(seed, n, arity)
    v = is_monotone(p, f)
    assert v.holds == naive_monotone(p, f)
    if not v:
        w = v.witness
        assert all(p.le(a, b) for a, b in zip(w.lower, w.upper))
        assert not p.le(w.f_lower, w.f_upper)


def test_table_must_fit_carrier():
    with pytest.raises(ArityCarrierMismatch):
        is_monotone(chain(2), OperationTable([0, 1, 2]))


# ---------------------------------------------------------------- additivity


def test_constant_top_on_two_chain():
    c = chain(2)
    f = const_op(c, 1)
    v = is_completely_additive(c, f)
    assert not v
    w = v.witness
    assert w.subsets == (frozenset(),) and w.sups == (0,)
    assert w.image_sup.id == 0 and w.f_of_sups.id == 1
    assert is_quasi_complete(c, f)


def test_meet_on_m3_fails_with_a_genuine_witness():
    p = m3()
    f = meet_op(p)
    v = is_completely_additive(p, f)
    assert not v
    assert naive_violation(p, f, [sorted(x) for x in v.witness.subsets])
    # the textbook witness X1={r}, X2={p,q} is also a violation
    assert additivity_violation(p, f, [[3], [1, 2]])
    assert f(3, p.join(1, 2)) == 3


def test_identity_and_join_are_additive():
    for p in (chain(3), boolean4(), m3(), n5(), antichain(3)):
        assert is_completely_additive(p, identity_op(p))
    b = boolean4()
    assert is_completely_additive(b, meet_op(b))


def test_binary_join_is_not_normal_hence_not_additive():
    # X1 empty forces f(bottom, z) = bottom; join(0, a) = a breaks that
    b = boolean4()
    v = is_completely_additive(b, join_op(b))
    assert not v and frozenset() in v.witness.subsets
    assert is_quasi_complete(b, join_op(b))


def test_complement_is_not_quasi_complete():
    b = boolean4()
    assert not is_quasi_complete(b, complement(b))


def test_cap_is_enforced(monkeypatch):
    monkeypatch.setenv("ULTRAPOSET_CAPS", "additive1=3")
    with pytest.raises(CapExceeded):
        is_completely_additive(chain(4), identity_op(chain(4)))


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 4), st.integers(1, 2), st.booleans())
def test_additivity_matches_subset_enumeration(seed, n, arity, repaired):
    p = gen_poset(seed, n)
    f = gen_monotone_op(seed, p, arity) if repaired else random_table(seed, n, arity)
    for nonempty, check in ((False, is_completely_additive), (True, is_quasi_complete)):
        v = check(p, f)
        assert v.holds == naive_additive(p, f, nonempty)
        if not v:
            assert naive_violation(p, f, [sorted(x) for x in v.witness.subsets])
            if nonempty:
                assert all(v.witness.subsets)


def test_missing_sups_impose_no_constraint():
    # on an antichain no pair has a sup, so any map preserving singletons and the
    # (absent) empty sup passes
    p = antichain(3)
    assert is_completely_additive(p, OperationTable([2, 0, 1]))


# ---------------------------------------------------------------- unary instances


def test_unary_instance_examples():
    b = boolean4()
    j = join_op(b)
    assert list(unary_instance(j, UnaryInstanceSpec(1, (0,))).table) == [0, 1, 2, 3]
    assert list(unary_instance(j, UnaryInstanceSpec(1, (3,))).table) == [3, 3, 3, 3]
    p = m3()
    assert list(unary_instance(meet_op(p), UnaryInstanceSpec(1, (3,))).table) == [0, 0, 0, 3, 3]


def test_unary_instance_rejections():
    b = boolean4()
    with pytest.raises(PositionOutOfRange):
        unary_instance(join_op(b), UnaryInstanceSpec(3, (0,)))
    with pytest.raises(PositionOutOfRange):
        unary_instance(join_op(b), UnaryInstanceSpec(1, (0, 1)))
    with pytest.raises(PositionOutOfRange):
        check_lemma_equivalence(b, identity_op(b))


def test_instance_specs_enumerate_all_positions():
    f = OperationTable(np.zeros((3, 3, 3), dtype=np.int64))
    assert len(unary_instance_specs(f)) == 3 * 9


def test_lemma_examples():
    b = boolean4()
    r = check_lemma_equivalence(b, meet_op(b))
    assert r.joint and r.all_instances and r.agree
    r = check_lemma_equivalence(b, join_op(b))
    assert not r.joint and not r.all_instances and r.agree
    r = check_lemma_equivalence(m3(), meet_op(m3()))
    assert not r.joint and not r.all_instances and r.agree


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 4))
def test_lemma_instances_match_oracle(seed, n):
    p = gen_poset(seed, n)
    f = gen_monotone_op(seed, p, 2)
    r = check_lemma_equivalence(p, f)
    assert r.joint.holds == naive_additive(p, f)
    assert r.all_instances == all(naive_additive(p, g) for g in naive_unary_instances(f))
    assert r.agree


# ---------------------------------------------------------------- completion


def test_completion_examples():
    c = dm_completion(chain(2))
    assert c.lattice.size == 2
    c = dm_completion(antichain(2))
    assert c.lattice.size == 4
    assert sorted(c.cuts) == [0b00, 0b01, 0b10, 0b11]
    c = dm_completion(m3())
    assert c.lattice.size == 5 and is_complete_lattice(c.lattice)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 7))
def test_completion_matches_cut_enumeration(seed, n):
    p = gen_poset(seed, n)
    c = dm_completion(p)
    assert {frozenset(bits(m)) for m in c.cuts} == naive_cuts(p)
    assert is_complete_lattice(c.lattice)
    # the embedding is an order embedding
    e = c.embedding
    for a, b in itertools.product(range(n), repeat=2):
        assert p.le(a, b) == c.lattice.le(e[a], e[b])


def test_complete_lattice_detection():
    assert is_complete_lattice(n5())
    assert not is_complete_lattice(antichain(2))
    assert is_complete_lattice(chain(1))
