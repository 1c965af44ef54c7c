import json

import pytest

from mlsm.cli import (
    instance_from_doc,
    instance_to_doc,
    main,
    matching_from_doc,
    matching_to_doc,
)
from mlsm.reductions import gen_random


@pytest.fixture
def ex1_file(tmp_path, ex1):
    path = tmp_path / "ex1.json"
    path.write_text(json.dumps(instance_to_doc(ex1)))
    return str(path)


@pytest.fixture
def m1_file(tmp_path, ex1, m1):
    path = tmp_path / "m1.json"
    path.write_text(json.dumps(matching_to_doc(ex1, m1)))
    return str(path)


@pytest.fixture
def m2_file(tmp_path, ex1, m2):
    path = tmp_path / "m2.json"
    path.write_text(json.dumps(matching_to_doc(ex1, m2)))
    return str(path)


def test_instance_roundtrip(ex1):
    assert instance_from_doc(instance_to_doc(ex1)) == ex1
    for seed in range(10):
        inst = gen_random(6, 3, 0.4, symmetric=seed % 2 == 0, seed=seed)
        named = instance_from_doc(instance_to_doc(inst))
        assert named.approvals == inst.approvals


def test_matching_roundtrip(ex1, m1):
    assert matching_from_doc(ex1, matching_to_doc(ex1, m1)) == m1


def test_check_stable_exit_zero(ex1_file, m1_file, capsys):
    code = main(["check", ex1_file, m1_file, "--base", "weak", "--agg", "all"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["stable"] is True
    assert doc["elapsed_ms"] >= 0


def test_check_unstable_exit_one_with_witness(ex1_file, m2_file, capsys):
    code = main(
        ["check", ex1_file, m2_file, "--base", "strong", "--agg", "pair", "--alpha", "1"]
    )
    assert code == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["violating_pair"] == ["a", "b"]
    assert doc["blocking_layers"] == [1, 2, 3]


def test_check_strong_individual_exits_two(ex1_file, m1_file, capsys):
    code = main(
        ["check", ex1_file, m1_file, "--base", "strong", "--agg", "individual", "--alpha", "1"]
    )
    assert code == 2
    err = capsys.readouterr().err
    assert "strong individual" in err


def test_solve_exists(tmp_path, ex2, capsys):
    path = tmp_path / "ex2.json"
    path.write_text(json.dumps(instance_to_doc(ex2)))
    code = main(
        ["solve", str(path), "--base", "super", "--agg", "global", "--alpha", "2"]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exists"] is True
    assert sorted(map(sorted, doc["matching"])) == [["a1", "a2"], ["a3", "a4"]]
    assert doc["witness_layers"] == [1, 2]


def test_solve_output_reverifies_through_check(tmp_path, ex2, capsys):
    inst_path = tmp_path / "ex2.json"
    inst_path.write_text(json.dumps(instance_to_doc(ex2)))
    assert main(
        ["solve", str(inst_path), "--base", "super", "--agg", "all"]
    ) == 0
    doc = json.loads(capsys.readouterr().out)
    matching_path = tmp_path / "found.json"
    matching_path.write_text(json.dumps({"pairs": doc["matching"]}))
    assert main(
        ["check", str(inst_path), str(matching_path), "--base", "super", "--agg", "all"]
    ) == 0


def test_solve_not_exists(tmp_path, triangle, capsys):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps(instance_to_doc(triangle)))
    code = main(["solve", str(path), "--base", "strong", "--agg", "all"])
    assert code == 1


def test_solve_unknown_exit_three(tmp_path, capsys):
    inst = gen_random(30, 2, 0.3, seed=13)
    path = tmp_path / "big.json"
    path.write_text(json.dumps(instance_to_doc(inst)))
    code = main(
        ["solve", str(path), "--base", "weak", "--agg", "all", "--budget", "8"]
    )
    assert code == 3
    doc = json.loads(capsys.readouterr().out)
    assert doc["exists"] is None


def test_oracle_all_lists_fixture(ex1_file, capsys, ex1, m1):
    code = main(
        ["oracle", ex1_file, "--base", "super", "--agg", "pair", "--alpha", "2", "--all"]
    )
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert [["a", "b"], ["c", "d"]] in doc["all_matchings"]


def test_oracle_footnote_negative(tmp_path, ex2, capsys):
    path = tmp_path / "ex2.json"
    path.write_text(json.dumps(instance_to_doc(ex2)))
    code = main(
        ["oracle", str(path), "--base", "super", "--agg", "individual", "--alpha", "2"]
    )
    assert code == 1


def test_oracle_budget_exit_two(tmp_path, capsys):
    inst = gen_random(20, 1, 0.2, seed=2)
    path = tmp_path / "big.json"
    path.write_text(json.dumps(instance_to_doc(inst)))
    code = main(["oracle", str(path), "--base", "weak", "--agg", "all"])
    assert code == 2


def test_gen_random_reproducible(tmp_path, capsys):
    out1, out2 = tmp_path / "g1.json", tmp_path / "g2.json"
    for out in (out1, out2):
        assert main(
            [
                "gen", "random", "--n", "6", "--layers", "2", "--p", "0.3",
                "--symmetric", "--seed", "7", "--out", str(out),
            ]
        ) == 0
    assert out1.read_text() == out2.read_text()


def test_gen_sat_writes_instance_and_certificate(tmp_path, capsys):
    cnf = tmp_path / "tiny.cnf"
    cnf.write_text("p cnf 3 1\n1 2 3 0\n")
    out = tmp_path / "sat.json"
    assert main(["gen", "sat", "--cnf", str(cnf), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["agents"]) == 17 and len(doc["layers"]) == 2
    cert = json.loads((tmp_path / "sat.cert.json").read_text())
    assert cert["kind"] == "sat" and cert["query"]["base"] == "weak"


def test_gen_is_records_alpha(tmp_path, capsys):
    graph = tmp_path / "k3.txt"
    graph.write_text("3 3\n1 2\n2 3\n1 3\n")
    out = tmp_path / "is.json"
    assert main(["gen", "is", "--graph", str(graph), "--k", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["agents"]) == 12 and len(doc["layers"]) == 3
    cert = json.loads((tmp_path / "is.cert.json").read_text())
    assert cert["query"]["alpha"] == 2


def test_gen_degpart(tmp_path, capsys):
    graph = tmp_path / "k2.txt"
    graph.write_text("2 1\n1 2\n")
    out = tmp_path / "dp.json"
    assert main(
        ["gen", "degpart", "--graph", str(graph), "--layers", "2", "--alpha", "1",
         "--out", str(out)]
    ) == 0
    doc = json.loads(out.read_text())
    assert len(doc["agents"]) == 8


def test_bench_known_suite(capsys):
    code = main(["bench", "lattice", "--trials", "25", "--seed", "1"])
    out = capsys.readouterr().out
    assert code == 0 and out.startswith("PASS suite=lattice")


def test_bench_unknown_suite(capsys):
    assert main(["bench", "nope"]) == 2


def test_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["check", str(bad), str(bad), "--base", "weak", "--agg", "all"]) == 2


def test_alpha_out_of_range_exit_two(ex1_file, m1_file, capsys):
    code = main(
        ["check", ex1_file, m1_file, "--base", "weak", "--agg", "pair", "--alpha", "9"]
    )
    assert code == 2
    code = main(
        ["check", ex1_file, m1_file, "--base", "weak", "--agg", "pair", "--alpha", "0"]
    )
    assert code == 2


def test_missing_alpha_exit_two(ex1_file, m1_file, capsys):
    assert main(["check", ex1_file, m1_file, "--base", "weak", "--agg", "pair"]) == 2


def test_duplicate_agent_names_exit_two(tmp_path, m1_file, capsys):
    bad = tmp_path / "dup.json"
    bad.write_text(json.dumps({"agents": ["a", "a"], "layers": [{}]}))
    assert main(["check", str(bad), m1_file, "--base", "weak", "--agg", "all"]) == 2


def test_unknown_agent_in_matching_exit_two(ex1_file, tmp_path, capsys):
    bad = tmp_path / "m.json"
    bad.write_text(json.dumps({"pairs": [["a", "zz"]]}))
    assert main(["check", ex1_file, str(bad), "--base", "weak", "--agg", "all"]) == 2
