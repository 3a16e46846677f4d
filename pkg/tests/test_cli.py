import json
from fractions import Fraction

import pytest

from chorefair import (
    AdditiveOracle,
    CappedAdditiveOracle,
    Instance,
    MaxOfAdditiveOracle,
    TabulatedOracle,
    generate_instance,
)
from chorefair.cli import (
    allocation_from_json,
    allocation_to_json,
    instance_from_json,
    instance_to_json,
    main,
    oracle_from_json,
    oracle_to_json,
    parse_rational,
)
from chorefair.verify import counterexample_instance


def roundtrip(oracle, m):
    return oracle_from_json(oracle_to_json(oracle), m)


def test_parse_rational_rejects_floats():
    assert parse_rational("3/7") == Fraction(3, 7)
    assert parse_rational(5) == Fraction(5)
    with pytest.raises(ValueError):
        parse_rational(0.5)


def test_oracle_roundtrips():
    m = 3
    subsets = [frozenset(s) for s in
               [(), (0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]]
    oracles = [
        AdditiveOracle([1, Fraction(3, 2), 2]),
        CappedAdditiveOracle([1, 2, 3], Fraction(7, 2)),
        MaxOfAdditiveOracle([[1, 2, 3], [3, 1, 2]]),
        TabulatedOracle(m, {s: Fraction(len(s) * 2, 3) for s in subsets}),
    ]
    for oracle in oracles:
        back = roundtrip(oracle, m)
        assert type(back) is type(oracle)
        for s in subsets:
            assert back.cost(s) == oracle.cost(s)


def test_table_subset_keys_are_one_based():
    o = TabulatedOracle(2, {frozenset(): Fraction(0),
                            frozenset({0}): Fraction(1),
                            frozenset({1}): Fraction(2),
                            frozenset({0, 1}): Fraction(3)})
    data = oracle_to_json(o)
    assert set(data["values"]) == {"", "1", "2", "1,2"}


def test_instance_roundtrip_and_schema_check():
    inst = generate_instance("capped_additive", 3, 5, 7)
    data = instance_to_json(inst)
    back = instance_from_json(data)
    assert back.m == inst.m and back.n == inst.n
    for a in range(3):
        assert back.oracles[a].cost(frozenset({0, 2})) == \
            inst.oracles[a].cost(frozenset({0, 2}))
    data["schema_version"] = 99
    with pytest.raises(ValueError):
        instance_from_json(data)


def test_allocation_roundtrip_is_one_based():
    inst = generate_instance("additive", 2, 4, 1)
    data = {"allocation": [[1, 3], [4]], "pool": [2]}
    alloc = allocation_from_json(data, inst.m)
    assert alloc.bundles == (frozenset({0, 2}), frozenset({3}))
    assert alloc.pool == frozenset({1})
    assert allocation_to_json(alloc) == data


def write_instance(tmp_path, inst, name="instance.json"):
    path = tmp_path / name
    path.write_text(json.dumps(instance_to_json(inst)))
    return str(path)


def test_solve_three_agent(tmp_path):
    inst = counterexample_instance(26, 12)
    inst_path = write_instance(tmp_path, inst)
    out = tmp_path / "result.json"
    code = main(["solve", "--instance", inst_path,
                 "--algorithm", "three-agent-2efx", "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["verdict"] is True
    assert payload["allocation"] == [[2, 5], [3, 4, 6], [1]]


def test_solve_round_robin_with_order_and_trace(tmp_path, capsys):
    o = AdditiveOracle([2, 3, 3, 4])
    inst_path = write_instance(tmp_path, Instance(4, 2, (o, o)))
    code = main(["solve", "--instance", inst_path, "--algorithm",
                 "round-robin", "--order", "2,1", "--trace"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["trace"][0].startswith("round 1: agent 2")


def test_solve_rejects_non_ido_instance(tmp_path):
    inst_path = write_instance(tmp_path, counterexample_instance(26, 12))
    code = main(["solve", "--instance", inst_path,
                 "--algorithm", "partial-ido-2efx"])
    assert code == 2


def test_solve_missing_file_exit_2(tmp_path):
    code = main(["solve", "--instance", str(tmp_path / "absent.json"),
                 "--algorithm", "three-agent-2efx"])
    assert code == 2


def test_verify_exit_codes(tmp_path, capsys):
    inst = counterexample_instance(26, 12)
    inst_path = write_instance(tmp_path, inst)
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"allocation": [[2, 5], [3, 4, 6], [1]],
                                "pool": []}))
    assert main(["verify", "--instance", inst_path, "--allocation", str(good),
                 "--criterion", "efx"]) == 0
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"allocation": [[2], [3, 4, 5], [1, 6]],
                               "pool": []}))
    assert main(["verify", "--instance", inst_path, "--allocation", str(bad),
                 "--criterion", "alpha_efx", "--alpha", "2"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["witnesses"]
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["verify", "--instance", inst_path, "--allocation",
                 str(broken), "--criterion", "efx"]) == 2


def test_gen_reproducible_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "--family", "additive_ratio", "--n", "3", "--m", "8",
            "--seed", "5", "--alpha", "3"]
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_counterexample_and_invalid_params(tmp_path, capsys):
    assert main(["gen", "--family", "counterexample", "--m1", "26",
                 "--m2", "12"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["agents"][0]["costs"][3] == "1/2"
    assert main(["gen", "--family", "counterexample", "--m1", "10",
                 "--m2", "7"]) == 2
    assert main(["gen", "--family", "no-such-family", "--n", "2", "--m", "4",
                 "--seed", "0"]) == 2


def test_repro_counterexample_exit_codes(capsys):
    assert main(["repro-counterexample", "--m1", "26", "--m2", "12"]) == 0
    out = capsys.readouterr().out
    assert "envy ratio: 4" in out
    assert "own EFX verdict: True" in out
    assert main(["repro-counterexample", "--m1", "bad", "--m2", "12"]) == 2


def test_output_written_atomically(tmp_path):
    out = tmp_path / "inst.json"
    assert main(["gen", "--family", "additive", "--n", "2", "--m", "3",
                 "--seed", "1", "--output", str(out)]) == 0
    leftovers = [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]
    assert not leftovers
    json.loads(out.read_text())
