from fractions import Fraction

import pytest

from chorefair import (
    AdditiveOracle,
    Allocation,
    Instance,
    PreconditionError,
    build_top_trading_graph,
    check_alpha_efx,
    compute_extension_witness,
    eliminate_top_trading_cycles,
    extend_partial,
    generate_instance,
)
from chorefair.envy_graph import ChorePlaced, CycleRemoved

from support import COUNTEREXAMPLE, tri


def test_counterexample_seed_graph():
    seed = Allocation.from_bundles([{1}, {2}, {0}], 6)
    graph = build_top_trading_graph(seed, COUNTEREXAMPLE)
    assert graph.edges == {(0, 1)}
    assert graph.sinks() == (1, 2)
    assert graph.find_cycle() is None


def test_counterexample_mid_graph():
    alloc = Allocation.from_bundles([{1}, {2, 3, 4}, {0}], 6)
    graph = build_top_trading_graph(alloc, COUNTEREXAMPLE)
    assert graph.edges == {(0, 1), (1, 2)}


def test_no_edges_when_all_content():
    inst = tri([1, 9, 9, 9, 9, 9], [9, 1, 9, 9, 9, 9], [9, 9, 1, 9, 9, 9])
    alloc = Allocation.from_bundles([{0}, {1}, {2}], 6)
    assert build_top_trading_graph(alloc, inst).edges == set()


def test_two_agent_swap_cycle():
    inst = Instance(2, 2, (AdditiveOracle([1, 10]), AdditiveOracle([10, 1])))
    alloc = Allocation.full([{1}, {0}])
    removed = []
    result = eliminate_top_trading_cycles(
        alloc, inst, lambda cycle, snap: removed.append(cycle))
    assert result.bundles == (frozenset({0}), frozenset({1}))
    assert len(removed) == 1 and set(removed[0]) == {0, 1}


def test_acyclic_input_unchanged():
    seed = Allocation.from_bundles([{1}, {2}, {0}], 6)
    assert eliminate_top_trading_cycles(seed, COUNTEREXAMPLE) == seed


def test_cycle_elimination_permutes_bundles():
    inst = tri([1, 2, 30, 20, 10, 3], [30, 1, 2, 10, 20, 3], [2, 30, 1, 20, 3, 10])
    alloc = Allocation.from_bundles([{2, 3}, {0, 4}, {1, 5}], 6)
    result = eliminate_top_trading_cycles(alloc, inst)
    assert set(result.bundles) == set(alloc.bundles)
    for agent in range(3):
        assert inst.cost(agent, result.bundles[agent]) <= inst.cost(
            agent, alloc.bundles[agent])
    assert build_top_trading_graph(result, inst).find_cycle() is None


def test_extension_witness_counts_eligible_agents():
    inst = tri([10, 6, 4, 1, 1, 1], [6, 10, 3, 1, 1, 1],
               [4, 3, 10, 1, 1, 1])
    seed = Allocation.from_bundles([{1}, {2}, {0}], 6)
    witness = compute_extension_witness(seed, inst, beta=1)
    assert all(len(r) >= 2 for r in witness.eligible)


def test_extension_witness_failure_names_chore():
    inst = tri([1, 1, 1, 99, 1, 1], [1, 1, 1, 99, 1, 1], [1, 1, 1, 99, 1, 1])
    seed = Allocation.from_bundles([{0}, {1}, {2}], 6)  # pool chore 3 too big
    with pytest.raises(PreconditionError, match="chore 3"):
        compute_extension_witness(seed, inst, beta=1)


def test_extend_partial_identical_agents():
    o = AdditiveOracle([5, 4, 3, Fraction(9, 10), Fraction(8, 10), Fraction(7, 10)])
    inst = Instance(6, 3, (o, o, o))
    seed = Allocation.from_bundles([{2}, {1}, {0}], 6)
    full = extend_partial(seed, inst, alpha=1, beta=1)
    assert full.bundles == (frozenset({2, 3, 4}), frozenset({1, 5}),
                            frozenset({0}))
    assert check_alpha_efx(full, inst, 2).verdict


def test_extend_partial_empty_pool_identity():
    alloc = Allocation.full([{0}, {1}, {2, 3, 4, 5}])
    inst = tri([1, 2, 3, 1, 1, 1], [2, 1, 3, 1, 1, 1], [9, 9, 1, 1, 1, 1])
    assert extend_partial(alloc, inst, 1, 1) == alloc


def test_extend_partial_trace_and_iteration_count(cycle_removal_guard):
    inst = generate_instance("k_partial_ido", 3, 9, 17, k=2)
    from chorefair.oracles import top_chore_order
    top = top_chore_order(inst.oracles[0])[:2]
    seed = Allocation.from_bundles([{top[0]}, {top[1]}, set()], 9)
    trace = []
    full = extend_partial(seed, inst, 1, 1, trace=trace)
    placements = [e for e in trace if isinstance(e, ChorePlaced)]
    assert len(placements) == 7  # one outer iteration per pool chore
    assert full.is_full
    for event in trace:
        assert isinstance(event, (ChorePlaced, CycleRemoved))


def test_extend_partial_rejects_bad_input():
    # partial allocation that is not 1-EFX over allocated bundles
    inst = tri([1, 1, 9, 9, 1, 1], [1, 1, 9, 9, 1, 1], [1, 1, 9, 9, 1, 1])
    seed = Allocation.from_bundles([{2, 3}, {0}, {1}], 6)
    with pytest.raises(PreconditionError):
        extend_partial(seed, inst, alpha=1, beta=1)


def test_pool_order_must_cover_pool():
    seed = Allocation.from_bundles([{1}, {2}, {0}], 6)
    with pytest.raises(ValueError):
        extend_partial(seed, COUNTEREXAMPLE, 1, 1, check_preconditions=False,
                       pool_order=[3, 4])


def test_out_degree_at_most_one():
    for seed_idx in range(10):
        inst = generate_instance("additive", 3, 7, seed_idx)
        alloc = Allocation.from_bundles([{0, 1}, {2, 3}, {4, 5}], 7)
        graph = build_top_trading_graph(alloc, inst)
        sources = [i for i, _ in graph.edges]
        assert len(sources) == len(set(sources))
