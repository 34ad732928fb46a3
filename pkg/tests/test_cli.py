import json

import pytest

from chevring.cli import main

SL2_Z4 = ["--preset", "sl2", "--p", "2", "--r", "2", "--n", "1"]


def run(capsys, *args):
    status = main(list(args))
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines() if x.strip()]
    return status, lines


def test_order(capsys):
    status, lines = run(capsys, "order", *SL2_Z4, "--enumerate")
    assert status == 0
    assert "config" in lines[0] and "footer" in lines[-1]
    orders = {rec["mode"]: rec["order"] for rec in lines[1:-1]}
    assert set(orders.values()) == {48}


def test_decompose_bruhat(capsys):
    status, lines = run(capsys, "decompose", *SL2_Z4, "--mode", "bruhat", "--element", "[[2,1],[3,0]]")
    assert status == 0
    rec = lines[1]
    assert rec["w"] == "s1"
    assert rec["u"] == [[[1], [2]], [[0], [1]]]


def test_inner_product(capsys):
    status, lines = run(capsys, "inner-product", *SL2_Z4, "--theta", "reg", "--theta-prime", "reg",
                        "--w-twist", "id", "--w-twist-prime", "id")
    assert status == 0
    rec = lines[1]
    assert rec["count"] == 2
    assert sorted(x["w"] for x in rec["witnesses"]) == ["1", "s1"]


def test_commutator(capsys):
    status, lines = run(capsys, "commutator", *SL2_Z4, "--x", "1", "--y", "2")
    assert status == 0
    assert lines[1]["agrees"] is True


def test_sigma_counts(capsys):
    status, lines = run(capsys, "sigma", *SL2_Z4)
    assert status == 0
    assert lines[1]["sigma"] == 80


def test_chars_regular(capsys):
    status, lines = run(capsys, "chars", *SL2_Z4, "--regular")
    assert status == 0
    assert len(lines) == 3


def test_tori(capsys):
    status, lines = run(capsys, "tori", *SL2_Z4)
    assert status == 0
    assert sorted(rec["order"] for rec in lines[1:-1]) == [2, 6]


def test_bad_element_is_usage_error(capsys):
    status, _ = run(capsys, "decompose", *SL2_Z4, "--element", "[[3,0],[0,1]]")
    assert status == 2


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_budget_exceeded_status(capsys):
    status, lines = run(capsys, "order", "--preset", "sl3", "--p", "2", "--r", "2", "--enumerate",
                        "--budget", "100")
    assert status == 3
    assert "note" in lines[-1]["footer"]


def test_verify_failure_status(capsys):
    status, lines = run(capsys, "verify", "--preset", "sl3", "--p", "2", "--r", "2",
                        "--suite", "chevalley-expansion", "--inject", "structure_constant")
    assert status == 1
    assert lines[1]["outcome"] == "fail"


def test_verify_pass_and_output_file(capsys, tmp_path):
    out = tmp_path / "sigma.jsonl"
    status, _ = run(capsys, "sigma", *SL2_Z4, "--output", str(out))
    assert status == 0
    assert out.exists()
    status, lines = run(capsys, "verify", *SL2_Z4, "--suite", "iwahori-unique")
    assert status == 0 and lines[1]["outcome"] == "pass"
