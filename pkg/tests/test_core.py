from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chorefair import (
    AdditiveOracle,
    Allocation,
    DimensionError,
    Instance,
    check_alpha_efx,
    check_partial_property2,
    check_tefx,
    is_alpha_efx,
    is_tefx,
    max_removal_cost,
)

from support import COUNTEREXAMPLE, tri


def test_allocation_rejects_overlap():
    with pytest.raises(ValueError):
        Allocation((frozenset({0, 1}), frozenset({1})), frozenset())
    with pytest.raises(ValueError):
        Allocation((frozenset({0}),), frozenset({0}))


def test_from_bundles_computes_pool():
    alloc = Allocation.from_bundles([{0}, {2}], 4)
    assert alloc.pool == {1, 3}
    assert not alloc.is_full
    assert Allocation.full([{0}, {1}]).is_full


def test_shape_mismatch_is_an_error():
    alloc = Allocation.full([{0}, {1}])
    with pytest.raises(DimensionError):
        check_alpha_efx(alloc, COUNTEREXAMPLE)


def test_max_removal_cost_additive():
    oracle = AdditiveOracle([5, 3, 2])
    assert max_removal_cost(oracle, {0, 1, 2}) == 8  # drop the cheapest
    assert max_removal_cost(oracle, set()) == 0


def test_singletons_are_always_efx():
    inst = tri([9, 5, 1, 7, 2, 3], [1, 2, 3, 4, 5, 6], [6, 5, 4, 3, 2, 1])
    alloc = Allocation.from_bundles([{0}, {1}, {2}], 6)
    assert check_alpha_efx(alloc, inst).verdict


def test_known_violation_has_witness():
    # rival output on the counterexample: agent 3 strongly 2-envies agent 1
    alloc = Allocation.full([{1}, {2, 3, 4}, {0, 5}])
    report = check_alpha_efx(alloc, COUNTEREXAMPLE, 2)
    assert not report.verdict
    w = next(w for w in report.witnesses if w.agent == 2 and w.other == 0)
    assert w.chore == 0 and w.lhs == 12 and w.rhs == 6


def test_tefx_weaker_than_efx():
    inst = tri([2, 3, 3, 4, 1, 1], [2, 3, 3, 4, 1, 1], [2, 3, 3, 4, 1, 1])
    alloc = Allocation.full([{0, 1}, {2, 4}, {3, 5}])
    if check_alpha_efx(alloc, inst).verdict:
        assert check_tefx(alloc, inst).verdict


def test_verdict_matches_shortcuts():
    alloc = Allocation.full([{1}, {2, 3, 4}, {0, 5}])
    assert is_alpha_efx(alloc, COUNTEREXAMPLE, 2) == check_alpha_efx(alloc, COUNTEREXAMPLE, 2).verdict
    assert is_tefx(alloc, COUNTEREXAMPLE) == check_tefx(alloc, COUNTEREXAMPLE).verdict


def test_alpha_below_one_rejected():
    alloc = Allocation.full([{0}, {1}, {2, 3, 4, 5}])
    with pytest.raises(ValueError):
        check_alpha_efx(alloc, COUNTEREXAMPLE, Fraction(1, 2))


def test_partial_property2():
    # agents 1 and 2 see every pool chore as cheap next to any bundle;
    # agent 3's pool chores (13, 13, 12) dwarf all three bundles
    alloc = Allocation.from_bundles([{0}, {1}, {2}], 6)
    assert check_partial_property2(alloc, COUNTEREXAMPLE) == (True, True, False)
    # full allocation: vacuous
    assert all(check_partial_property2(Allocation.full([{0}, {1}, {2, 3, 4, 5}]), COUNTEREXAMPLE))


costs = st.lists(st.integers(0, 30), min_size=4, max_size=7)


@settings(max_examples=60, deadline=None)
@given(costs, costs, st.data())
def test_efx_implies_tefx_and_higher_alpha(c1, c2, data):
    m = min(len(c1), len(c2))
    inst = Instance(m, 2, (AdditiveOracle(c1[:m]), AdditiveOracle(c2[:m])))
    assignment = data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m))
    bundles = [set(), set()]
    for chore, agent in enumerate(assignment):
        bundles[agent].add(chore)
    alloc = Allocation.full(bundles)
    if check_alpha_efx(alloc, inst).verdict:
        assert check_tefx(alloc, inst).verdict
        assert check_alpha_efx(alloc, inst, 2).verdict
    report = check_alpha_efx(alloc, inst, 2)
    assert report.verdict == (not report.witnesses)
