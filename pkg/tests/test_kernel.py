"""Axiom checker, derived order, sub-algebra test and meet/join oracles."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gealab import instances, kernel
from gealab.errors import (
    NoOrderOracle,
    NotEnumerable,
    NotSumClosed,
)


def test_axioms_pass_on_interval():
    rep = kernel.check_axioms(instances.make_interval_ea(4))
    assert rep.all_pass
    assert rep.mode == "exhaustive"
    assert not rep.failures()


def test_axiom_report_verdict_lookup():
    rep = kernel.check_axioms(instances.NatGEA(10))
    assert rep.verdict("GEii").passed
    with pytest.raises(KeyError):
        rep.verdict("GEvi")


def test_broken_fixture_fails_cancellation_with_replayable_counterexample():
    alg = instances.BrokenMaxGEA(6)
    rep = kernel.check_axioms(alg)
    geiv = rep.verdict("GEiv")
    assert not geiv.passed
    assert geiv.counterexample is not None
    assert kernel.replay(alg, geiv)
    # the passing verdicts replay as non-failures
    assert not kernel.replay(alg, rep.verdict("GEiii"))


def test_sampled_mode_needs_sampler_or_elements():
    class Bare(kernel.PartialAlgebra):
        zero = 0

        def add(self, a, b):
            return a + b

    with pytest.raises(NotEnumerable):
        kernel.check_axioms(Bare(), mode="exhaustive")
    with pytest.raises(NotEnumerable):
        kernel.check_axioms(Bare(), mode="sampled", samples=3)
    with pytest.raises(ValueError):
        kernel.check_axioms(instances.NatGEA(3), mode="fuzzy")


def test_derived_le_and_ominus():
    alg = instances.make_interval_ea(5)
    assert kernel.derived_le(alg, 2, 5)
    assert not kernel.derived_le(alg, 5, 2)
    assert kernel.ominus(alg, 5, 2) == 3
    assert kernel.ominus(alg, 2, 5) is None


def test_derived_le_without_oracle_raises():
    class Opaque(kernel.PartialAlgebra):
        zero = 0
        enumerable = False

        def add(self, a, b):
            return a + b

    with pytest.raises(NoOrderOracle):
        kernel.derived_le(Opaque(), 1, 2)
    with pytest.raises(NoOrderOracle):
        kernel.ominus(Opaque(), 2, 1)


def test_even_gap_subset_is_not_sub_gea():
    ambient = instances.NatGEA(50)
    subset = instances.EvenGapGEA(50).elements()
    check = kernel.is_sub_gea(ambient, set(subset))
    assert not check.ok
    assert check.certificate == (4, 2, 6)


def test_is_sub_gea_accepts_closed_subset():
    ambient = instances.NatGEA(20)
    evens = {x for x in ambient.elements() if x % 2 == 0}
    assert kernel.is_sub_gea(ambient, evens).ok
    missing_zero = kernel.is_sub_gea(ambient, {2, 4})
    assert not missing_zero.ok and "zero" in missing_zero.reason


def test_restrict_checks_closure():
    ambient = instances.NatGEA(10)
    with pytest.raises(ValueError):
        kernel.restrict(ambient, [1, 2])
    with pytest.raises(NotSumClosed) as err:
        kernel.restrict(ambient, [0, 1])  # 1 + 1 = 2 escapes
    assert err.value.witness == (1, 1)
    sub = kernel.restrict(ambient, [0, 1], check=False)
    assert sub.add(1, 1) is None
    assert sub.add(0, 1) == 1


def test_brute_meet_join_on_interval():
    alg = instances.make_interval_ea(6)
    assert kernel.brute_meet(alg, [4, 2]) == 2
    assert kernel.brute_join(alg, [4, 2]) == 4
    assert kernel.brute_join(alg, [5, 3]) == 5


def test_brute_join_missing_in_half_open_plane():
    # the only common upper bound of the maximal corners would be (2,2),
    # which is exactly the point [0, (2,2)) removes
    alg = instances.make_half_open((2, 2))
    assert kernel.brute_join(alg, [(2, 1), (1, 2)]) is None
    assert kernel.brute_join(alg, [(1, 0), (0, 1)]) == (1, 1)


def _all_descending_chains(alg, length):
    elems = list(alg.elements())
    le = {(a, b) for a in elems for b in elems if kernel.derived_le(alg, a, b)}
    for chain in itertools.product(elems, repeat=length):
        if all((chain[i + 1], chain[i]) in le for i in range(length - 1)):
            yield chain


def test_complement_route_meet_matches_brute_force():
    for u in (3, (2, 2)):
        alg = instances.make_interval_ea(u)
        for chain in _all_descending_chains(alg, 3):
            assert kernel.meet_via_complement_join(alg, chain) == kernel.brute_meet(alg, chain)


def test_complement_route_join_is_bound_independent():
    alg = instances.make_interval_ea(4)
    elems = list(alg.elements())
    chain = (1, 2, 3)
    bounds = [b for b in elems if all(kernel.derived_le(alg, c, b) for c in chain)]
    assert len(bounds) >= 2
    results = {kernel.join_via_complement_meet(alg, chain, b) for b in bounds}
    assert results == {3}


def test_complement_route_rejects_empty_chain():
    alg = instances.make_interval_ea(3)
    with pytest.raises(ValueError):
        kernel.meet_via_complement_join(alg, [])


@settings(max_examples=40, deadline=None)
@given(u=st.integers(min_value=1, max_value=8))
def test_interval_axioms_property(u):
    assert kernel.check_axioms(instances.make_interval_ea(u)).all_pass


@settings(max_examples=40, deadline=None)
@given(
    u=st.tuples(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3)).filter(
        lambda t: any(t)
    )
)
def test_plane_interval_axioms_property(u):
    assert kernel.check_axioms(instances.make_interval_ea(u)).all_pass


@settings(max_examples=30, deadline=None)
@given(u=st.integers(min_value=2, max_value=10), data=st.data())
def test_ominus_is_partial_inverse(u, data):
    alg = instances.make_interval_ea(u)
    a = data.draw(st.integers(min_value=0, max_value=u))
    b = data.draw(st.integers(min_value=0, max_value=u))
    z = kernel.ominus(alg, b, a)
    if z is None:
        assert not kernel.derived_le(alg, a, b)
    else:
        assert alg.add(a, z) == b
