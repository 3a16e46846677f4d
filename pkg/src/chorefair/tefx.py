"""tEFX allocations for agents split into cost-function groups.

Two-group core: one group shares a general monotone cost C1, the other an
additive 2-ratio-bounded cost C2.  The constructed bundle list has a prefix
that is EFX-feasible under C1 and a suffix tEFX-feasible under C2, with one
overlapping position.  A third group of at most one general-cost agent is
handled by letting it pick its cheapest bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .core import Allocation, Instance, check_tefx, max_removal_cost
from .errors import EnumerationLimitError, PreconditionError, VerificationError
from .oracles import CostOracle, env_enum_limit, ratio_bound

TWO = Fraction(2)
EXHAUSTIVE_LIMIT = 10**7

Bundles = list[frozenset[int]]


@dataclass(frozen=True)
class GroupSpec:
    """Partition of the agents into the three supported cost groups."""

    group1: frozenset[int]
    group2: frozenset[int]
    group3: frozenset[int]

    def __post_init__(self) -> None:
        if len(self.group3) > 1:
            raise ValueError("third group holds at most one agent")
        total = len(self.group1) + len(self.group2) + len(self.group3)
        if len(self.group1 | self.group2 | self.group3) != total:
            raise ValueError("groups must be disjoint")


def is_efx_feasible(
    bundle: frozenset[int], others: Sequence[frozenset[int]], oracle: CostOracle
) -> bool:
    """Every removal from the bundle stays within every other bundle's cost."""
    if not bundle:
        return True
    worst = max_removal_cost(oracle, bundle)
    return all(worst <= oracle.cost(b) for b in others)


def is_tefx_feasible(
    bundle: frozenset[int], others: Sequence[frozenset[int]], oracle: CostOracle
) -> bool:
    """Every removal stays within every other bundle plus the removed chore."""
    return all(
        oracle.cost(bundle - {c}) <= oracle.cost(b | {c})
        for c in bundle
        for b in others
    )


def _min_cost_index(bundles: Bundles, oracle: CostOracle) -> int:
    costs = [oracle.cost(b) for b in bundles]
    return costs.index(min(costs))


def identical_cost_efx(m: int, bundle_count: int, oracle: CostOracle) -> Bundles:
    """Partition [m] into bundle_count bundles, each EFX-feasible under the
    single oracle.

    Greedy seed (costliest chore first onto the cheapest bundle), then a
    local-search repair that moves the min-marginal chore of a violating
    bundle to the globally cheapest bundle; exhaustive search as a last
    resort.  The output is always verified.
    """
    if bundle_count < 1:
        raise ValueError("need at least one bundle")
    if oracle.m != m:
        raise PreconditionError("oracle chore count disagrees with m")

    def verified(bundles: Bundles) -> Bundles | None:
        for i, b in enumerate(bundles):
            others = bundles[:i] + bundles[i + 1:]
            if not is_efx_feasible(b, others, oracle):
                return None
        return bundles

    order = sorted(range(m), key=lambda c: (-oracle.singleton(c), c))
    bundles: Bundles = [frozenset() for _ in range(bundle_count)]
    for c in order:
        grow = [oracle.cost(b | {c}) for b in bundles]
        target = grow.index(min(grow))
        bundles[target] = bundles[target] | {c}

    budget = m * m * bundle_count
    for _ in range(budget):
        violator = None
        for i, b in enumerate(bundles):
            others = bundles[:i] + bundles[i + 1:]
            if not is_efx_feasible(b, others, oracle):
                violator = i
                break
        if violator is None:
            return bundles
        src = bundles[violator]
        # min-marginal chore: its removal keeps the most cost behind
        drops = {c: oracle.cost(src - {c}) for c in src}
        chore = max(sorted(src), key=lambda c: drops[c])
        dest = _min_cost_index(bundles, oracle)
        if dest == violator:
            break
        bundles[violator] = src - {chore}
        bundles[dest] = bundles[dest] | {chore}
    else:
        bundles = None  # budget exhausted without converging

    if bundles is not None and verified(bundles):
        return bundles
    # exhaustive fallback over assignment vectors
    if bundle_count**m > env_enum_limit(EXHAUSTIVE_LIMIT):
        raise EnumerationLimitError(
            f"local search failed and {bundle_count}^{m} assignments exceed "
            "the exhaustive-search limit")
    counters = [0] * m
    while True:
        candidate: Bundles = [frozenset() for _ in range(bundle_count)]
        for c, pos in enumerate(counters):
            candidate[pos] = candidate[pos] | {c}
        if verified(candidate):
            return candidate
        for idx in range(m - 1, -1, -1):
            counters[idx] += 1
            if counters[idx] < bundle_count:
                break
            counters[idx] = 0
        else:
            raise VerificationError(
                "no single-oracle EFX partition exists; the oracle is "
                "likely not monotone")


class MoveStep(NamedTuple):
    """One loop iteration: chore moved from the front max-removal bundle to
    the global min-cost bundle, with the potential value after the move."""

    k: int
    chore: int
    source: int
    target: int
    phi: int


def tefx_two_group(
    m: int,
    n: int,
    c1: CostOracle,
    c2: CostOracle,
    k: int,
    trace: list[MoveStep] | None = None,
) -> Allocation:
    """Bundles 1..n-k+1 EFX-feasible under C1 and n-k+1..n tEFX-feasible
    under C2 (1-based positions; the boundary bundle satisfies both).

    Recursive on k: the base case partitions under C1 alone and parks the
    cheapest C2 bundle last; each later level moves the front bundles'
    worst removal chore onto the cheapest bundle until some front bundle
    becomes tEFX-feasible under C2.
    """
    if not 1 <= k <= n:
        raise PreconditionError("need 1 <= k <= n")
    if c1.m != m or c2.m != m:
        raise PreconditionError("oracle chore counts disagree with m")
    if ratio_bound(c2) > TWO:
        raise PreconditionError("second cost function must be 2-ratio-bounded")

    if k == 1:
        bundles = identical_cost_efx(m, n, c1)
        cheap = _min_cost_index(bundles, c2)
        bundles[cheap], bundles[n - 1] = bundles[n - 1], bundles[cheap]
        result = Allocation.full(bundles)
        _check_two_group(result.bundles, c1, c2, k)
        return result

    bundles = list(tefx_two_group(m, n, c1, c2, k - 1, trace).bundles)
    front = n - k + 1  # count of C1-constrained positions
    max_iters = m + 1
    for _ in range(max_iters):
        feasible = next(
            (i for i in range(front)
             if is_tefx_feasible(bundles[i], bundles[:i] + bundles[i + 1:], c2)),
            None,
        )
        if feasible is not None:
            # relabel within the identically-priced front so the boundary
            # position carries the tEFX-feasible bundle
            bundles[feasible], bundles[front - 1] = (
                bundles[front - 1], bundles[feasible])
            break
        cheap = _min_cost_index(bundles, c2)
        bundles[cheap], bundles[n - 1] = bundles[n - 1], bundles[cheap]
        # worst single-removal over the front bundles, ties to lowest chore
        best: tuple[Fraction, int, int] | None = None
        for i in range(front):
            for c in sorted(bundles[i]):
                left = c1.cost(bundles[i] - {c})
                if best is None or left > best[0]:
                    best = (left, i, c)
        if best is None:
            raise VerificationError("front bundles are empty but infeasible")
        _, src, chore = best
        bundles[src], bundles[0] = bundles[0], bundles[src]
        bundles[0] = bundles[0] - {chore}
        bundles[n - 1] = bundles[n - 1] | {chore}
        phi = sum(len(bundles[i]) for i in range(front))
        if trace is not None:
            trace.append(MoveStep(k, chore, src, n - 1, phi))
        # both invariants must survive every move
        for i in range(front):
            if not is_efx_feasible(bundles[i], bundles[:i] + bundles[i + 1:], c1):
                raise VerificationError("front EFX-feasibility lost in loop")
        for i in range(front, n):
            if not is_tefx_feasible(bundles[i], bundles[:i] + bundles[i + 1:], c2):
                raise VerificationError("back tEFX-feasibility lost in loop")
    else:
        raise VerificationError("two-group loop failed to terminate")
    result = Allocation.full(bundles)
    _check_two_group(result.bundles, c1, c2, k)
    return result


def _check_two_group(
    bundles: Sequence[frozenset[int]], c1: CostOracle, c2: CostOracle, k: int
) -> None:
    n = len(bundles)
    front = n - k + 1
    for i in range(front):
        if not is_efx_feasible(bundles[i], list(bundles[:i]) + list(bundles[i + 1:]), c1):
            raise VerificationError(f"bundle {i} not EFX-feasible under C1")
    for i in range(front - 1, n):
        if not is_tefx_feasible(bundles[i], list(bundles[:i]) + list(bundles[i + 1:]), c2):
            raise VerificationError(f"bundle {i} not tEFX-feasible under C2")


def tefx_three_group(instance: Instance, groups: GroupSpec) -> Allocation:
    """Full tEFX allocation when agents form (general C1, additive
    2-ratio-bounded C2, at most one general C3) groups with identical
    within-group oracles.  Output verified by check_tefx.
    """
    n = instance.n
    if groups.group1 | groups.group2 | groups.group3 != frozenset(range(n)):
        raise PreconditionError("groups must cover all agents")
    if not groups.group1 or not groups.group2:
        raise PreconditionError("first and second groups must be non-empty")
    for group in (groups.group1, groups.group2, groups.group3):
        oracles = {instance.oracles[a] for a in group}
        if len(oracles) > 1:
            raise PreconditionError("within-group oracles must be identical")
    c1 = instance.oracles[min(groups.group1)]
    c2 = instance.oracles[min(groups.group2)]
    ell = len(groups.group2)

    if not groups.group3:
        shared = tefx_two_group(instance.m, n, c1, c2, ell)
        order = sorted(groups.group1) + sorted(groups.group2)
    else:
        agent3 = min(groups.group3)
        c3 = instance.oracles[agent3]
        shared = tefx_two_group(instance.m, n, c1, c2, ell + 1)
        costs3 = [c3.cost(b) for b in shared.bundles]
        pick = costs3.index(min(costs3))
        if pick < n - ell:
            group1_positions = [i for i in range(n - ell) if i != pick]
            group2_positions = list(range(n - ell, n))
        else:
            group1_positions = list(range(n - ell - 1))
            group2_positions = [i for i in range(n - ell - 1, n) if i != pick]
        order_positions = group1_positions + group2_positions
        bundles: list[frozenset[int]] = [frozenset()] * n
        bundles[agent3] = shared.bundles[pick]
        agents = sorted(groups.group1) + sorted(groups.group2)
        for agent, pos in zip(agents, order_positions):
            bundles[agent] = shared.bundles[pos]
        result = Allocation.full(bundles)
        report = check_tefx(result, instance)
        if not report.verdict:
            raise VerificationError(f"output not tEFX: {report.witnesses[:3]}")
        return result

    bundles = [frozenset()] * n
    for agent, pos in zip(order, range(n)):
        bundles[agent] = shared.bundles[pos]
    result = Allocation.full(bundles)
    report = check_tefx(result, instance)
    if not report.verdict:
        raise VerificationError(f"output not tEFX: {report.witnesses[:3]}")
    return result
