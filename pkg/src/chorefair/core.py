"""Domain types and exact fairness predicates.

Agents and chores are 0-based internally; 1-based only at the I/O boundary.
All predicates are pure and exact (no floating point anywhere).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import DimensionError
from .oracles import CostOracle

ONE = Fraction(1)


@dataclass(frozen=True)
class Instance:
    """m chores, n agents, one cost oracle per agent."""

    m: int
    n: int
    oracles: tuple[CostOracle, ...]

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError("need m >= 1 and n >= 1")
        if len(self.oracles) != self.n:
            raise ValueError("need exactly one oracle per agent")
        for oracle in self.oracles:
            if oracle.m != self.m:
                raise ValueError("oracle chore count disagrees with instance")

    def cost(self, agent: int, chores: Iterable[int]) -> Fraction:
        return self.oracles[agent].cost(chores)


@dataclass(frozen=True)
class Allocation:
    """Partition of a subset of chores into n bundles plus unallocated pool."""

    bundles: tuple[frozenset[int], ...]
    pool: frozenset[int]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for bundle in self.bundles:
            if bundle & seen:
                raise ValueError("bundles must be pairwise disjoint")
            seen |= bundle
        if seen & self.pool:
            raise ValueError("pool overlaps an allocated bundle")

    @classmethod
    def from_bundles(cls, bundles: Iterable[Iterable[int]], m: int) -> "Allocation":
        frozen = tuple(frozenset(b) for b in bundles)
        allocated = frozenset().union(*frozen) if frozen else frozenset()
        return cls(frozen, frozenset(range(m)) - allocated)

    @classmethod
    def full(cls, bundles: Iterable[Iterable[int]]) -> "Allocation":
        return cls(tuple(frozenset(b) for b in bundles), frozenset())

    @property
    def n(self) -> int:
        return len(self.bundles)

    @property
    def is_full(self) -> bool:
        return not self.pool

    def replace(self, agent: int, bundle: Iterable[int]) -> "Allocation":
        new = list(self.bundles)
        new[agent] = frozenset(bundle)
        return Allocation(tuple(new), self.pool)

    def chores(self) -> frozenset[int]:
        return frozenset().union(*self.bundles, self.pool)


class Witness(NamedTuple):
    """One violating (agent, other agent, chore) triple with both sides."""

    agent: int
    other: int
    chore: int
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class FairnessReport:
    criterion: str  # "alpha_efx" or "tefx"
    alpha: Fraction | None
    verdict: bool
    witnesses: tuple[Witness, ...]

    def __post_init__(self) -> None:
        if self.verdict != (not self.witnesses):
            raise ValueError("verdict must be true iff witnesses are empty")


def _check_shapes(alloc: Allocation, instance: Instance) -> None:
    if alloc.n != instance.n:
        raise DimensionError(
            f"allocation has {alloc.n} bundles, instance has {instance.n} agents")
    all_chores = alloc.chores()
    if all_chores and max(all_chores) >= instance.m:
        raise DimensionError("allocation references chores outside the instance")


def max_removal_cost(oracle: CostOracle, chores: Iterable[int]) -> Fraction:
    """max over c in S of C(S \\ c); 0 for the empty set."""
    bundle = frozenset(chores)
    if not bundle:
        return Fraction(0)
    return max(oracle.cost(bundle - {c}) for c in bundle)


def check_alpha_efx(
    alloc: Allocation, instance: Instance, alpha: Fraction | int = ONE
) -> FairnessReport:
    """alpha-EFX report; witnesses enumerate every violation.

    Pool chores are ignored: the criterion constrains allocated bundles only.
    """
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    _check_shapes(alloc, instance)
    witnesses = []
    for i in range(instance.n):
        oracle = instance.oracles[i]
        mine = alloc.bundles[i]
        for j in range(instance.n):
            if i == j:
                continue
            rhs = alpha * oracle.cost(alloc.bundles[j])
            for c in sorted(mine):
                lhs = oracle.cost(mine - {c})
                if lhs > rhs:
                    witnesses.append(Witness(i, j, c, lhs, rhs))
    return FairnessReport("alpha_efx", alpha, not witnesses, tuple(witnesses))


def check_tefx(alloc: Allocation, instance: Instance) -> FairnessReport:
    """tEFX report: every removal beats the corresponding transfer."""
    _check_shapes(alloc, instance)
    witnesses = []
    for i in range(instance.n):
        oracle = instance.oracles[i]
        mine = alloc.bundles[i]
        for j in range(instance.n):
            if i == j:
                continue
            other = alloc.bundles[j]
            for c in sorted(mine):
                lhs = oracle.cost(mine - {c})
                rhs = oracle.cost(other | {c})
                if lhs > rhs:
                    witnesses.append(Witness(i, j, c, lhs, rhs))
    return FairnessReport("tefx", None, not witnesses, tuple(witnesses))


def is_alpha_efx(
    alloc: Allocation, instance: Instance, alpha: Fraction | int = ONE
) -> bool:
    """Short-circuit verdict (no witness collection) for hot loops."""
    alpha = Fraction(alpha)
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


def is_tefx(alloc: Allocation, instance: Instance) -> bool:
    """Short-circuit tEFX verdict."""
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


def check_partial_property2(alloc: Allocation, instance: Instance) -> tuple[bool, ...]:
    """Per agent i: every pool chore costs at most C_i(X_j) for >= n-1 agents j.

    Vacuously true for full allocations.
    """
    _check_shapes(alloc, instance)
    results = []
    for i in range(instance.n):
        oracle = instance.oracles[i]
        bundle_costs = [oracle.cost(b) for b in alloc.bundles]
        ok = True
        for b in alloc.pool:
            single = oracle.singleton(b)
            covered = sum(1 for cost in bundle_costs if single <= cost)
            if covered < instance.n - 1:
                ok = False
                break
        results.append(ok)
    return tuple(results)
