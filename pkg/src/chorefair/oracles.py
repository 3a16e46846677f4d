"""Cost oracles, structural validators, seeded generators and the
non-degeneracy perturbation.

Chores are 0-based ints internally; all values are exact ``Fraction``s.
The cost of the empty set is normalized to 0 for every oracle variant.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import EnumerationLimitError, PreconditionError

ENV_MAX_ENUM = "CHOREFAIR_MAX_ENUM"

# default enumeration guards (number of chores m)
MONOTONE_LIMIT = 14
NONDEGENERATE_LIMIT = 14
SUBADDITIVE_LIMIT = 10
DELTA_LIMIT_ADDITIVE = 20
DELTA_LIMIT_GENERAL = 14

ZERO = Fraction(0)


def env_enum_limit(default: int) -> int:
    """Enumeration guard, overridable through CHOREFAIR_MAX_ENUM."""
    raw = os.environ.get(ENV_MAX_ENUM)
    if raw is None:
        return default
    return int(raw)


def _as_fractions(costs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) for c in costs)


class CostOracle:
    """Value oracle over chore subsets: monotone, non-negative, C(empty)=0."""

    m: int

    def __init__(self) -> None:
        self._cache: dict[frozenset[int], Fraction] = {}

    def cost(self, chores: Iterable[int]) -> Fraction:
        key = frozenset(chores)
        if not key:
            return ZERO
        cached = self._cache.get(key)
        if cached is None:
            for c in key:
                if not (0 <= c < self.m):
                    raise IndexError(f"chore {c} out of range for m={self.m}")
            cached = self._raw_cost(key)
            self._cache[key] = cached
        return cached

    def singleton(self, chore: int) -> Fraction:
        return self.cost((chore,))

    def singleton_costs(self) -> tuple[Fraction, ...]:
        return tuple(self.singleton(c) for c in range(self.m))

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        raise NotImplementedError


class AdditiveOracle(CostOracle):
    def __init__(self, costs: Iterable) -> None:
        super().__init__()
        self.costs = _as_fractions(costs)
        if any(c < 0 for c in self.costs):
            raise ValueError("additive costs must be non-negative")
        self.m = len(self.costs)

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        return sum((self.costs[c] for c in chores), ZERO)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AdditiveOracle) and self.costs == other.costs

    def __hash__(self) -> int:
        return hash(("additive", self.costs))

    def __repr__(self) -> str:
        return f"AdditiveOracle({list(self.costs)})"


class CappedAdditiveOracle(CostOracle):
    """min(sum of costs, cap): monotone and subadditive by construction."""

    def __init__(self, costs: Iterable, cap) -> None:
        super().__init__()
        self.costs = _as_fractions(costs)
        self.cap = Fraction(cap)
        if any(c < 0 for c in self.costs) or self.cap < 0:
            raise ValueError("costs and cap must be non-negative")
        self.m = len(self.costs)

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        total = sum((self.costs[c] for c in chores), ZERO)
        return min(total, self.cap)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CappedAdditiveOracle)
            and self.costs == other.costs
            and self.cap == other.cap
        )

    def __hash__(self) -> int:
        return hash(("capped", self.costs, self.cap))

    def __repr__(self) -> str:
        return f"CappedAdditiveOracle({list(self.costs)}, cap={self.cap})"


class MaxOfAdditiveOracle(CostOracle):
    """max over additive rows: monotone and subadditive by construction."""

    def __init__(self, rows: Iterable[Iterable]) -> None:
        super().__init__()
        self.rows = tuple(_as_fractions(row) for row in rows)
        if not self.rows:
            raise ValueError("at least one row required")
        if len({len(row) for row in self.rows}) != 1:
            raise ValueError("rows must have equal length")
        if any(c < 0 for row in self.rows for c in row):
            raise ValueError("row costs must be non-negative")
        self.m = len(self.rows[0])

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        return max(sum((row[c] for c in chores), ZERO) for row in self.rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MaxOfAdditiveOracle) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(("maxadd", self.rows))

    def __repr__(self) -> str:
        return f"MaxOfAdditiveOracle({[list(r) for r in self.rows]})"


class TabulatedOracle(CostOracle):
    """Explicit table over all 2^m subsets; validated monotone on demand."""

    def __init__(self, m: int, values: dict) -> None:
        super().__init__()
        self.m = m
        self.values = {frozenset(k): Fraction(v) for k, v in values.items()}
        if len(self.values) != 2**m:
            raise ValueError(
                f"table must cover all {2 ** m} subsets, got {len(self.values)}"
            )
        if any(v < 0 for v in self.values.values()):
            raise ValueError("table values must be non-negative")

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        try:
            return self.values[chores]
        except KeyError:
            raise KeyError(f"missing table entry for {sorted(chores)}") from None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TabulatedOracle)
            and self.m == other.m
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash(("table", self.m, tuple(sorted(
            (tuple(sorted(k)), v) for k, v in self.values.items()))))

    def __repr__(self) -> str:
        return f"TabulatedOracle(m={self.m})"


class PerturbedOracle(CostOracle):
    """Base cost plus epsilon * sum of 2^j over 1-based chore indices j."""

    def __init__(self, base: CostOracle, epsilon) -> None:
        super().__init__()
        self.base = base
        self.epsilon = Fraction(epsilon)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.m = base.m

    def _raw_cost(self, chores: frozenset[int]) -> Fraction:
        bump = sum(2 ** (c + 1) for c in chores)
        return self.base.cost(chores) + self.epsilon * bump

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PerturbedOracle)
            and self.base == other.base
            and self.epsilon == other.epsilon
        )

    def __hash__(self) -> int:
        return hash(("perturbed", self.base, self.epsilon))

    def __repr__(self) -> str:
        return f"PerturbedOracle({self.base!r}, epsilon={self.epsilon})"


def evaluate_cost(oracle: CostOracle, chores: Iterable[int]) -> Fraction:
    return oracle.cost(chores)


# ---------------------------------------------------------------------------
# structural validators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    violations: tuple = ()


def _all_subsets(m: int):
    chores = range(m)
    for r in range(m + 1):
        for combo in itertools.combinations(chores, r):
            yield frozenset(combo)


def validate_oracle(
    oracle: CostOracle,
    checks: Iterable[str] = ("monotone",),
    *,
    monotone_limit: int | None = None,
    subadditive_limit: int | None = None,
    nondegenerate_limit: int | None = None,
) -> dict[str, CheckResult]:
    """Exhaustively check structural properties of an oracle.

    Refuses (raises EnumerationLimitError) when m exceeds the enumeration
    guard for a requested check; never silently passes.
    """
    m = oracle.m
    results: dict[str, CheckResult] = {}
    for check in checks:
        if check == "monotone":
            limit = monotone_limit if monotone_limit is not None else env_enum_limit(MONOTONE_LIMIT)
            if m > limit:
                raise EnumerationLimitError(
                    f"monotone check needs m <= {limit}, got m={m}")
            bad = []
            for sub in _all_subsets(m):
                base = oracle.cost(sub)
                for c in range(m):
                    if c not in sub and oracle.cost(sub | {c}) < base:
                        bad.append((tuple(sorted(sub)), c))
            results[check] = CheckResult(check, not bad, tuple(bad))
        elif check == "subadditive":
            limit = subadditive_limit if subadditive_limit is not None else env_enum_limit(SUBADDITIVE_LIMIT)
            if m > limit:
                raise EnumerationLimitError(
                    f"subadditive check needs m <= {limit}, got m={m}")
            bad = []
            # every chore goes to S, T or neither: 3^m disjoint pairs
            for assignment in itertools.product(range(3), repeat=m):
                s = frozenset(c for c, a in enumerate(assignment) if a == 1)
                t = frozenset(c for c, a in enumerate(assignment) if a == 2)
                if oracle.cost(s | t) > oracle.cost(s) + oracle.cost(t):
                    bad.append((tuple(sorted(s)), tuple(sorted(t))))
            results[check] = CheckResult(check, not bad, tuple(bad))
        elif check == "nondegenerate":
            limit = nondegenerate_limit if nondegenerate_limit is not None else env_enum_limit(NONDEGENERATE_LIMIT)
            if m > limit:
                raise EnumerationLimitError(
                    f"nondegenerate check needs m <= {limit}, got m={m}")
            seen: dict[Fraction, frozenset[int]] = {}
            bad = []
            for sub in _all_subsets(m):
                value = oracle.cost(sub)
                if value in seen:
                    bad.append((tuple(sorted(seen[value])), tuple(sorted(sub))))
                else:
                    seen[value] = sub
            results[check] = CheckResult(check, not bad, tuple(bad))
        else:
            raise ValueError(f"unknown check {check!r}")
    return results


def ratio_bound(oracle: CostOracle) -> Fraction:
    """Exact max-singleton / min-singleton cost ratio."""
    singles = oracle.singleton_costs()
    if not singles:
        raise ValueError("oracle has no chores")
    low = min(singles)
    if low == 0:
        raise ValueError("ratio bound undefined: a singleton cost is 0")
    return max(singles) / low


def top_chore_order(oracle: CostOracle) -> tuple[int, ...]:
    """Chores by strictly descending singleton cost, ties by ascending index."""
    singles = oracle.singleton_costs()
    return tuple(sorted(range(oracle.m), key=lambda c: (-singles[c], c)))


# ---------------------------------------------------------------------------
# non-degeneracy perturbation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PerturbationParams:
    delta: Fraction
    epsilon: Fraction


def _min_cost_gap(oracle: CostOracle) -> Fraction | None:
    """Min |C(S) - C(T)| over subset pairs with differing cost, or None."""
    values = sorted({oracle.cost(sub) for sub in _all_subsets(oracle.m)})
    if len(values) < 2:
        return None
    return min(b - a for a, b in zip(values, values[1:]))


def compute_delta(oracles: Iterable[CostOracle]) -> Fraction:
    """Joint delta over all agents: min gap among differing subset costs."""
    gaps = []
    for oracle in oracles:
        limit = (
            DELTA_LIMIT_ADDITIVE
            if isinstance(oracle, AdditiveOracle)
            else DELTA_LIMIT_GENERAL
        )
        if oracle.m > env_enum_limit(limit):
            raise EnumerationLimitError(
                f"delta computation needs m <= {limit} for {type(oracle).__name__}, "
                f"got m={oracle.m}; supply delta explicitly")
        gap = _min_cost_gap(oracle)
        if gap is not None:
            gaps.append(gap)
    if not gaps:
        raise PreconditionError(
            "no subset pair with differing cost; delta undefined")
    return min(gaps)


def perturb_oracle(oracle: CostOracle, epsilon: Fraction) -> CostOracle:
    if isinstance(oracle, AdditiveOracle):
        eps = Fraction(epsilon)
        return AdditiveOracle(
            tuple(c + eps * 2 ** (j + 1) for j, c in enumerate(oracle.costs)))
    return PerturbedOracle(oracle, epsilon)


def perturb_nondegenerate(instance, delta: Fraction | None = None):
    """Tie-breaking perturbation C'(S) = C(S) + eps * sum_{j in S} 2^j.

    j is the 1-based chore index; eps = delta / 2^(m+2) so that
    eps * 2^(m+1) < delta. Returns (perturbed instance, params).
    """
    from .core import Instance

    if delta is None:
        delta = compute_delta(instance.oracles)
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    epsilon = delta / 2 ** (instance.m + 2)
    perturbed = tuple(perturb_oracle(o, epsilon) for o in instance.oracles)
    return (
        Instance(instance.m, instance.n, perturbed),
        PerturbationParams(delta, epsilon),
    )


# ---------------------------------------------------------------------------
# seeded instance generators
# ---------------------------------------------------------------------------

GENERATOR_FAMILIES = (
    "additive",
    "additive_ratio",
    "capped_additive",
    "max_of_additive",
    "k_partial_ido",
    "identical_groups",
)


def _distinct_costs(rng: random.Random, m: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in rng.sample(range(1, 20 * m + 200), m))


def _ratio_bounded_costs(rng: random.Random, m: int, alpha: Fraction) -> tuple[Fraction, ...]:
    # costs in [low, alpha*low] with distinct offsets, so ratio <= alpha
    low = Fraction(rng.randint(20, 80))
    span = (alpha - 1) * low
    grid = max(m + 1, 101)
    offsets = rng.sample(range(grid), m)
    return tuple(low + span * Fraction(off, grid - 1) if grid > 1 else low
                 for off in offsets)


def generate_instance(family: str, n: int, m: int, seed: int, **params):
    """Deterministic seeded instance of the requested structural family.

    The family's structural property is re-checked after generation.
    """
    from .core import Instance
    from .ido import check_k_partial_ido

    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    rng = random.Random(f"{family}:{n}:{m}:{seed}")

    if family == "additive":
        oracles = tuple(AdditiveOracle(_distinct_costs(rng, m)) for _ in range(n))
    elif family == "additive_ratio":
        alpha = Fraction(params.get("alpha", 2))
        if alpha < 1:
            raise ValueError("alpha must be >= 1")
        oracles = tuple(
            AdditiveOracle(_ratio_bounded_costs(rng, m, alpha)) for _ in range(n))
        for oracle in oracles:
            if ratio_bound(oracle) > alpha:
                raise AssertionError("generator broke its ratio bound")
    elif family == "capped_additive":
        built = []
        for _ in range(n):
            costs = _distinct_costs(rng, m)
            total = sum(costs, ZERO)
            cap = max(costs) + Fraction(rng.randint(1, 100), 100) * (total - max(costs))
            built.append(CappedAdditiveOracle(costs, cap))
        oracles = tuple(built)
    elif family == "max_of_additive":
        rows_per_agent = int(params.get("rows", 2))
        oracles = tuple(
            MaxOfAdditiveOracle([_distinct_costs(rng, m) for _ in range(rows_per_agent)])
            for _ in range(n))
    elif family == "k_partial_ido":
        k = int(params.get("k", n - 1))
        if not 1 <= k <= m:
            raise ValueError("need 1 <= k <= m")
        shared_top = rng.sample(range(m), k)
        built = []
        rest = [c for c in range(m) if c not in shared_top]
        for _ in range(n):
            costs = [Fraction(0)] * m
            low_pool = rng.sample(range(1, 100), len(rest))
            for c, v in zip(rest, low_pool):
                costs[c] = Fraction(v)
            # shared top-k strictly above everything else and strictly ordered
            for rank, c in enumerate(shared_top):
                costs[c] = Fraction(100 * (k - rank + 1) + rng.randint(0, 99))
            built.append(AdditiveOracle(costs))
        oracles = tuple(built)
        instance = Instance(m, n, oracles)
        if not check_k_partial_ido(instance, k):
            raise AssertionError("generator broke the k-partial-IDO property")
        return instance
    elif family == "identical_groups":
        sizes = tuple(int(s) for s in params.get("sizes", (n,)))
        if sum(sizes) != n or any(s < 1 for s in sizes):
            raise ValueError("group sizes must be positive and sum to n")
        built = []
        for size in sizes:
            shared = AdditiveOracle(_distinct_costs(rng, m))
            built.extend([shared] * size)
        oracles = tuple(built)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {GENERATOR_FAMILIES}")

    return Instance(m, n, oracles)
