"""Brute-force oracles and the reproduction of a rival algorithm's failure.

The exhaustive search enumerates every full allocation and is the ground
truth the constructive algorithms are tested against.  The rival run
replays, step by step, a published cycle-elimination strategy on the
six-chore instance where its envy ratio grows without bound.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import NamedTuple

from .core import Allocation, Instance, max_removal_cost
from .envy_graph import (
    ChorePlaced,
    TopTradingGraph,
    TraceEvent,
    _ttece,
    build_top_trading_graph,
)
from .errors import EnumerationLimitError, PreconditionError
from .oracles import AdditiveOracle, env_enum_limit

SEARCH_LIMIT = 10**7


def _passes(alloc: Allocation, instance: Instance, criterion: str,
            alpha: Fraction) -> bool:
    if criterion == "tefx":
        for i in range(instance.n):
            oracle = instance.oracles[i]
            mine = alloc.bundles[i]
            for j in range(instance.n):
                if i == j:
                    continue
                other = alloc.bundles[j]
                for c in mine:
                    if oracle.cost(mine - {c}) > oracle.cost(other | {c}):
                        return False
        return True
    for i in range(instance.n):
        oracle = instance.oracles[i]
        mine = alloc.bundles[i]
        if not mine:
            continue
        worst = max_removal_cost(oracle, mine)
        for j in range(instance.n):
            if i != j and worst > alpha * oracle.cost(alloc.bundles[j]):
                return False
    return True


def exhaustive_search(
    instance: Instance,
    criterion: str = "efx",
    alpha: Fraction | int = 1,
) -> Allocation | None:
    """First full allocation (lexicographic over chore->agent assignment
    vectors) passing the criterion, or None as a nonexistence certificate.

    criterion: "efx" (alpha forced to 1), "alpha_efx", or "tefx".
    """
    if criterion not in ("efx", "alpha_efx", "tefx"):
        raise ValueError(f"unknown criterion {criterion!r}")
    alpha = Fraction(1) if criterion == "efx" else Fraction(alpha)
    space = instance.n**instance.m
    if space > env_enum_limit(SEARCH_LIMIT):
        raise EnumerationLimitError(
            f"{instance.n}^{instance.m} allocations exceed the search limit")
    for assignment in itertools.product(range(instance.n), repeat=instance.m):
        bundles = [set() for _ in range(instance.n)]
        for chore, agent in enumerate(assignment):
            bundles[agent].add(chore)
        alloc = Allocation.full(bundles)
        if _passes(alloc, instance, criterion, alpha):
            return alloc
    return None


def independent_alpha_efx(
    alloc: Allocation, instance: Instance, alpha: Fraction | int = 1
) -> bool:
    """Second-opinion alpha-EFX check with a separate enumeration shape."""
    alpha = Fraction(alpha)
    triples = itertools.product(range(instance.n), range(instance.n),
                                range(instance.m))
    for i, j, c in triples:
        if i == j or c not in alloc.bundles[i]:
            continue
        oracle = instance.oracles[i]
        if oracle.cost(alloc.bundles[i] - {c}) > alpha * oracle.cost(alloc.bundles[j]):
            return False
    return True


def independent_tefx(alloc: Allocation, instance: Instance) -> bool:
    """Second-opinion tEFX check with a separate enumeration shape."""
    triples = itertools.product(range(instance.n), range(instance.n),
                                range(instance.m))
    for i, j, c in triples:
        if i == j or c not in alloc.bundles[i]:
            continue
        oracle = instance.oracles[i]
        if oracle.cost(alloc.bundles[i] - {c}) > oracle.cost(alloc.bundles[j] | {c}):
            return False
    return True


def counterexample_instance(m1: Fraction | int, m2: Fraction | int) -> Instance:
    """The six-chore, three-additive-agent instance on which the rival
    cycle-elimination algorithm's envy ratio is m2/3; requires m1/2 > m2 > 6.
    """
    m1, m2 = Fraction(m1), Fraction(m2)
    if not (m1 / 2 > m2 > 6):
        raise PreconditionError("parameters must satisfy m1/2 > m2 > 6")
    half = Fraction(1, 2)
    return Instance(6, 3, (
        AdditiveOracle((10, 6, 4, half, half, 3)),
        AdditiveOracle((6, 10, 3, 2, 2, Fraction(3, 2))),
        AdditiveOracle((1, 3, 4, m1 / 2, m1 / 2, m2)),
    ))


class RivalRun(NamedTuple):
    allocation: Allocation
    graphs: tuple[TopTradingGraph, ...]  # before any placement, then after each
    trace: tuple[TraceEvent, ...]
    ratio: Fraction


def rival_counterexample_run(m1: Fraction | int, m2: Fraction | int) -> RivalRun:
    """Replay the rival algorithm: seed ({c2},{c3},{c1}), then place the
    pool in decreasing third-agent cost via cycle elimination with
    lowest-index sinks.  The returned ratio max_c C3(X3\\c) / C3(X1) equals
    m2/3 and exceeds 2 for every valid parameter choice.
    """
    instance = counterexample_instance(m1, m2)
    seed = Allocation.from_bundles([{1}, {2}, {0}], instance.m)
    c3 = instance.oracles[2]
    pool_order = sorted(seed.pool, key=lambda c: (-c3.singleton(c), c))
    trace: list[TraceEvent] = []
    final = _ttece(seed, instance, pool_order, trace)
    graphs = [build_top_trading_graph(seed, instance)]
    for event in trace:
        if isinstance(event, ChorePlaced):
            graphs.append(build_top_trading_graph(event.allocation, instance))
    ratio = max_removal_cost(c3, final.bundles[2]) / c3.cost(final.bundles[0])
    return RivalRun(final, tuple(graphs), tuple(trace), ratio)
