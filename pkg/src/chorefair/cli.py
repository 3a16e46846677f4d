"""Command-line surface: instance I/O, algorithm dispatch, verification,
instance generation, and the counterexample walkthrough.

Rationals travel through files as "p/q" / integer strings, never floats.
Exit codes: 0 verified, 1 guarantee-or-verdict failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from typing import Any

from .core import Allocation, FairnessReport, Instance, check_alpha_efx, check_tefx
from .errors import ChorefairError, VerificationError
from .ido import partial_ido_2efx
from .oracles import (
    AdditiveOracle,
    CappedAdditiveOracle,
    CostOracle,
    MaxOfAdditiveOracle,
    TabulatedOracle,
    generate_instance,
)
from .round_robin import round_robin_allocate
from .tefx import GroupSpec, tefx_three_group, tefx_two_group
from .three_agent import three_agent_2efx
from .verify import counterexample_instance, exhaustive_search, rival_counterexample_run

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# (de)serialization
# ---------------------------------------------------------------------------

def parse_rational(value: Any) -> Fraction:
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"rationals must be strings or integers, got {value!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else str(value)


def _subset_key(chores) -> str:
    return ",".join(str(c + 1) for c in sorted(chores))


def _parse_subset_key(key: str, m: int) -> frozenset[int]:
    if not key:
        return frozenset()
    chores = frozenset(int(part) - 1 for part in key.split(","))
    if any(not 0 <= c < m for c in chores):
        raise ValueError(f"subset key {key!r} out of range")
    return chores


def oracle_to_json(oracle: CostOracle) -> dict:
    if isinstance(oracle, CappedAdditiveOracle):
        return {"type": "capped_additive",
                "costs": [format_rational(c) for c in oracle.costs],
                "cap": format_rational(oracle.cap)}
    if isinstance(oracle, AdditiveOracle):
        return {"type": "additive",
                "costs": [format_rational(c) for c in oracle.costs]}
    if isinstance(oracle, MaxOfAdditiveOracle):
        return {"type": "max_of_additive",
                "rows": [[format_rational(c) for c in row] for row in oracle.rows]}
    if isinstance(oracle, TabulatedOracle):
        return {"type": "table",
                "values": {_subset_key(k): format_rational(v)
                           for k, v in sorted(oracle.values.items(),
                                              key=lambda kv: sorted(kv[0]))}}
    raise ValueError(f"cannot serialize oracle {oracle!r}")


def oracle_from_json(data: dict, m: int) -> CostOracle:
    kind = data.get("type")
    if kind == "additive":
        return AdditiveOracle([parse_rational(c) for c in data["costs"]])
    if kind == "capped_additive":
        return CappedAdditiveOracle(
            [parse_rational(c) for c in data["costs"]],
            parse_rational(data["cap"]))
    if kind == "max_of_additive":
        return MaxOfAdditiveOracle(
            [[parse_rational(c) for c in row] for row in data["rows"]])
    if kind == "table":
        values = {_parse_subset_key(k, m): parse_rational(v)
                  for k, v in data["values"].items()}
        return TabulatedOracle(m, values)
    raise ValueError(f"unknown oracle type {kind!r}")


def instance_to_json(instance: Instance) -> dict:
    return {"schema_version": SCHEMA_VERSION,
            "m": instance.m,
            "n": instance.n,
            "agents": [oracle_to_json(o) for o in instance.oracles]}


def instance_from_json(data: dict) -> Instance:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported or missing schema_version")
    m, n = int(data["m"]), int(data["n"])
    oracles = tuple(oracle_from_json(a, m) for a in data["agents"])
    return Instance(m, n, oracles)


def allocation_to_json(alloc: Allocation) -> dict:
    return {"allocation": [sorted(c + 1 for c in b) for b in alloc.bundles],
            "pool": sorted(c + 1 for c in alloc.pool)}


def allocation_from_json(data: dict, m: int) -> Allocation:
    bundles = [frozenset(int(c) - 1 for c in b) for b in data["allocation"]]
    pool = frozenset(int(c) - 1 for c in data.get("pool", ()))
    alloc = Allocation(tuple(bundles), pool)
    if alloc.chores() and max(alloc.chores()) >= m:
        raise ValueError("allocation references chores outside the instance")
    return alloc


def report_to_json(report: FairnessReport) -> dict:
    return {
        "criterion": report.criterion,
        "alpha": None if report.alpha is None else format_rational(report.alpha),
        "verdict": report.verdict,
        "witnesses": [
            {"agent": w.agent + 1, "other": w.other + 1, "chore": w.chore + 1,
             "lhs": format_rational(w.lhs), "rhs": format_rational(w.rhs)}
            for w in report.witnesses
        ],
    }


def write_json_atomic(path: str, payload: dict) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            json.dump(payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    with open(path) as handle:
        return json.load(handle)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _parse_agent_list(raw: str, n: int) -> frozenset[int]:
    if not raw:
        return frozenset()
    agents = frozenset(int(part) - 1 for part in raw.split(","))
    if any(not 0 <= a < n for a in agents):
        raise ValueError(f"agent list {raw!r} out of range")
    return agents


def cmd_solve(args: argparse.Namespace) -> int:
    instance = instance_from_json(_load_json(args.instance))
    started = time.perf_counter()
    criterion, alpha = "alpha_efx", Fraction(2)
    trace_lines: list[str] = []

    if args.algorithm == "three-agent-2efx":
        alloc = three_agent_2efx(instance)
    elif args.algorithm == "partial-ido-2efx":
        alloc = partial_ido_2efx(instance)
    elif args.algorithm == "round-robin":
        order = None
        if args.order:
            order = [int(part) - 1 for part in args.order.split(",")]
        alloc, trace = round_robin_allocate(instance, order)
        criterion, alpha = "tefx", None
        trace_lines = [f"round {p.round}: agent {p.agent + 1} takes chore "
                       f"{p.chore + 1}" for p in trace.picks]
    elif args.algorithm == "tefx-two-group":
        if args.k is None:
            raise ValueError("--k is required for tefx-two-group")
        alloc = tefx_two_group(instance.m, instance.n, instance.oracles[0],
                               instance.oracles[-1], args.k)
        criterion, alpha = "tefx", None
    elif args.algorithm == "tefx-three-group":
        groups = GroupSpec(
            _parse_agent_list(args.group1 or "", instance.n),
            _parse_agent_list(args.group2 or "", instance.n),
            _parse_agent_list(args.group3 or "", instance.n))
        alloc = tefx_three_group(instance, groups)
        criterion, alpha = "tefx", None
    elif args.algorithm == "exhaustive":
        criterion = args.criterion or "efx"
        alpha = Fraction(args.alpha) if args.alpha else Fraction(1)
        alloc = exhaustive_search(instance, criterion, alpha)
        if alloc is None:
            print("no allocation satisfies the criterion", file=sys.stderr)
            return 1
        if criterion == "efx":
            criterion, alpha = "alpha_efx", Fraction(1)
        elif criterion == "tefx":
            alpha = None
    else:
        raise ValueError(f"unknown algorithm {args.algorithm!r}")

    if criterion == "tefx":
        report = check_tefx(alloc, instance)
    else:
        report = check_alpha_efx(alloc, instance, alpha)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "algorithm": args.algorithm,
        **allocation_to_json(alloc),
        **report_to_json(report),
        "timings": {"seconds": round(time.perf_counter() - started, 6)},
    }
    if args.trace and trace_lines:
        payload["trace"] = trace_lines
    if args.output:
        write_json_atomic(args.output, payload)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0 if report.verdict else 1


def cmd_verify(args: argparse.Namespace) -> int:
    instance = instance_from_json(_load_json(args.instance))
    alloc = allocation_from_json(_load_json(args.allocation), instance.m)
    if args.criterion == "tefx":
        report = check_tefx(alloc, instance)
    else:
        alpha = Fraction(1) if args.criterion == "efx" else Fraction(args.alpha or "2")
        report = check_alpha_efx(alloc, instance, alpha)
    json.dump(report_to_json(report), sys.stdout, indent=2, sort_keys=True)
    print()
    return 0 if report.verdict else 1


def cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "counterexample":
        if args.m1 is None or args.m2 is None:
            raise ValueError("--m1 and --m2 are required for counterexample")
        instance = counterexample_instance(Fraction(args.m1), Fraction(args.m2))
    else:
        if args.n is None or args.m is None or args.seed is None:
            raise ValueError("--n, --m, and --seed are required")
        params: dict[str, Any] = {}
        if args.alpha is not None:
            params["alpha"] = Fraction(args.alpha)
        if args.k is not None:
            params["k"] = args.k
        if args.sizes:
            params["sizes"] = tuple(int(s) for s in args.sizes.split(","))
        if args.rows is not None:
            params["rows"] = args.rows
        instance = generate_instance(args.family, args.n, args.m, args.seed,
                                     **params)
    payload = instance_to_json(instance)
    if args.output:
        write_json_atomic(args.output, payload)
    else:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
        print()
    return 0


def cmd_repro_counterexample(args: argparse.Namespace) -> int:
    m1, m2 = Fraction(args.m1), Fraction(args.m2)
    run = rival_counterexample_run(m1, m2)
    instance = counterexample_instance(m1, m2)
    own = three_agent_2efx(instance)
    own_report = check_alpha_efx(own, instance, 1)
    lines = ["rival cycle-elimination run:"]
    for step, graph in enumerate(run.graphs):
        edges = sorted((i + 1, j + 1) for i, j in graph.edges)
        lines.append(f"  step {step}: envy graph {edges}")
    lines.append("  final: " + json.dumps(allocation_to_json(run.allocation)))
    lines.append(f"  envy ratio: {format_rational(run.ratio)} (= m2/3)")
    lines.append("own allocation: " + json.dumps(allocation_to_json(own)))
    lines.append(f"own EFX verdict: {own_report.verdict}")
    print("\n".join(lines))
    return 0 if run.ratio > 2 and own_report.verdict else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chorefair",
        description="Exact-arithmetic fair division of indivisible chores")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run an allocation algorithm")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--algorithm", required=True,
                       choices=["three-agent-2efx", "partial-ido-2efx",
                                "round-robin", "tefx-two-group",
                                "tefx-three-group", "exhaustive"])
    solve.add_argument("--output")
    solve.add_argument("--trace", action="store_true")
    solve.add_argument("--order", help="round-robin agent order, e.g. 2,1,3")
    solve.add_argument("--k", type=int, help="second-group size for tefx-two-group")
    solve.add_argument("--group1", help="1-based agents, e.g. 1,2")
    solve.add_argument("--group2")
    solve.add_argument("--group3")
    solve.add_argument("--criterion", choices=["efx", "alpha_efx", "tefx"])
    solve.add_argument("--alpha")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check an allocation against a criterion")
    verify.add_argument("--instance", required=True)
    verify.add_argument("--allocation", required=True)
    verify.add_argument("--criterion", required=True,
                        choices=["efx", "alpha_efx", "tefx"])
    verify.add_argument("--alpha")
    verify.set_defaults(func=cmd_verify)

    gen = sub.add_parser("gen", help="generate a seeded instance file")
    gen.add_argument("--family", required=True)
    gen.add_argument("--n", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--seed", type=int)
    gen.add_argument("--alpha")
    gen.add_argument("--k", type=int)
    gen.add_argument("--sizes", help="identical-group sizes, e.g. 2,2,1")
    gen.add_argument("--rows", type=int)
    gen.add_argument("--m1", help="counterexample parameter")
    gen.add_argument("--m2", help="counterexample parameter")
    gen.add_argument("--output")
    gen.set_defaults(func=cmd_gen)

    repro = sub.add_parser("repro-counterexample",
                           help="contrast the rival algorithm with this one")
    repro.add_argument("--m1", required=True)
    repro.add_argument("--m2", required=True)
    repro.set_defaults(func=cmd_repro_counterexample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    except (ChorefairError, ValueError, KeyError, OSError,
            json.JSONDecodeError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
