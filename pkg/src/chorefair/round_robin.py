"""Round-robin chore allocation and its approximation guarantees.

Each agent, in a fixed order, repeatedly takes the least costly remaining
chore under its own cost function.  For additive alpha-ratio-bounded costs
this is (1 + (alpha-1)/(ceil(m/n)-1))-EFX once there are at least three
rounds, and tEFX when alpha <= 2.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import Allocation, Instance
from .errors import PreconditionError, VerificationError


class Pick(NamedTuple):
    round: int
    agent: int
    chore: int


class RoundRobinTrace(NamedTuple):
    picks: tuple[Pick, ...]


def round_count(instance: Instance) -> int:
    return math.ceil(instance.m / instance.n)


def guarantee_ratio(alpha: Fraction, rounds: int) -> Fraction:
    """1 + (alpha-1)/(rounds-1), the EFX approximation after >= 3 rounds."""
    if rounds < 3:
        raise PreconditionError("guarantee requires at least 3 rounds")
    return 1 + (Fraction(alpha) - 1) / (rounds - 1)


def in_guarantee_scope(instance: Instance) -> bool:
    """Whether the approximation guarantees apply (>= 3 rounds)."""
    return round_count(instance) >= 3


def round_robin_allocate(
    instance: Instance, agent_order: Sequence[int] | None = None
) -> tuple[Allocation, RoundRobinTrace]:
    """Run round-robin; ties on pick cost break to the lowest chore index.

    The trace invariants (each agent's pick costs weakly increase over
    rounds; every chore picked exactly once) are asserted before returning.
    """
    if agent_order is None:
        agent_order = tuple(range(instance.n))
    else:
        agent_order = tuple(agent_order)
        if sorted(agent_order) != list(range(instance.n)):
            raise PreconditionError("agent_order must be a permutation of the agents")
    remaining = set(range(instance.m))
    bundles: list[set[int]] = [set() for _ in range(instance.n)]
    picks: list[Pick] = []
    t = 0
    while remaining:
        t += 1
        for agent in agent_order:
            if not remaining:
                break
            oracle = instance.oracles[agent]
            chore = min(remaining, key=lambda c: (oracle.singleton(c), c))
            remaining.remove(chore)
            bundles[agent].add(chore)
            picks.append(Pick(t, agent, chore))
    trace = RoundRobinTrace(tuple(picks))
    last: dict[int, Fraction] = {}
    for pick in trace.picks:
        cost = instance.oracles[pick.agent].singleton(pick.chore)
        if pick.agent in last and cost < last[pick.agent]:
            raise VerificationError("pick costs decreased across rounds")
        last[pick.agent] = cost
    if len({p.chore for p in trace.picks}) != instance.m:
        raise VerificationError("some chore was picked twice or never")
    return Allocation.full(bundles), trace
