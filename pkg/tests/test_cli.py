"""CLI behavior: exit codes, deterministic outputs, expression parsing,
and the documented file formats."""

import json
from pathlib import Path

import pytest

from selfsim.cli import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VERIFY_FAILED,
    ElementExpr,
    ExprError,
    eval_expr,
    main,
    parse_expr,
)
from selfsim.instances import load_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- expression parsing -------------------------------------------------------


def test_parse_expr_words():
    e = parse_expr("u x0^-1 u^2")
    assert e.terms == (("u", 1), ("x0", -1), ("u", 2))
    assert e.render() == "u x0^-1 u^2"


def test_parse_expr_drops_zero_exponents():
    assert parse_expr("u^0 x0").terms == (("x0", 1),)


def test_parse_expr_rejects_garbage():
    with pytest.raises(ExprError):
        parse_expr("u^^2")
    with pytest.raises(ExprError):
        parse_expr("3bad")
    with pytest.raises(ExprError):
        parse_expr("")
    with pytest.raises(ExprError):
        parse_expr("{not json")


def test_expr_round_trip_reparses_to_equal_element():
    inst = load_config(CONFIGS / "lamplighter_p2_n2.json")
    for text in ("u x0^-1 u^2", "x1^3 u", "u*u*x0^-2", "e"):
        expr = parse_expr(text)
        round_tripped = parse_expr(expr.render())
        assert eval_expr(inst, expr) == eval_expr(inst, round_tripped)


def test_eval_expr_unknown_generator():
    inst = load_config(CONFIGS / "lamplighter_p2_n1.json")
    with pytest.raises(ExprError):
        eval_expr(inst, parse_expr("z9"))


def test_affine_literal():
    inst = load_config(CONFIGS / "affine_n3_p2.json")
    e = eval_expr(inst, parse_expr('{"v": [[1], [], []], "b": [[[1],[],[]],[[],[1],[]],[[],[],[1]]]}'))
    assert e == inst.generators()["t1"]


def test_borel_literal():
    inst = load_config(CONFIGS / "borel_m2_p2.json")
    lit = '{"n": [[[], [1]], [[], []]], "d": [{"c": 1, "exps": [0, 0]}, {"c": 1, "exps": [0, 0]}]}'
    e = eval_expr(inst, parse_expr(lit))
    assert e == inst.generators()["u1"]


def test_wreath_rejects_literals():
    inst = load_config(CONFIGS / "wreath_base_p2_d2.json")
    with pytest.raises(ExprError):
        eval_expr(inst, ElementExpr(literal={"r": []}))


# -- build ---------------------------------------------------------------------


def test_build_lamplighter(capsys):
    code, out, _ = run(capsys, "build", str(CONFIGS / "lamplighter_p2_n1.json"))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["degree"] == 2
    assert data["transversal"] == ["e", "u"]
    assert data["validation"]["ok"] is True


def test_build_borel_m3(capsys):
    code, out, _ = run(capsys, "build", str(CONFIGS / "borel_m3_p2.json"))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["degree"] == 16
    assert data["transversal_size"] == 16


def test_build_invalid_config_exits_1(capsys):
    code, out, err = run(capsys, "build", str(CONFIGS / "invalid_lamplighter.json"))
    assert code == EXIT_INVALID
    assert "x-1" in err


def test_build_missing_file_exits_3(capsys):
    code, _, err = run(capsys, "build", str(CONFIGS / "nope.json"))
    assert code == EXIT_PARSE


# -- decompose -----------------------------------------------------------------


def test_decompose_u_p3(capsys):
    code, out, _ = run(capsys, "decompose", str(CONFIGS / "lamplighter_p3_n2.json"), "u")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["perm"] == [1, 2, 0]
    assert data["cycles"] == "(0 1 2)"
    assert data["states"] == ["e", "e", "e"]


def test_decompose_x0_inverse(capsys):
    code, out, _ = run(
        capsys, "decompose", str(CONFIGS / "lamplighter_p2_n1.json"), "x0^-1"
    )
    data = json.loads(out)
    assert data["states"][0] == "x0^-1"
    assert "u" in data["states"][1]


def test_decompose_identity_portrait(capsys):
    code, out, _ = run(
        capsys,
        "decompose",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "e",
        "--depth",
        "3",
    )
    data = json.loads(out)
    node = data["portrait"]
    assert node[0] == [0, 1]
    assert node[1][0][0] == [0, 1]


def test_decompose_parse_error_exit_3(capsys):
    code, _, err = run(
        capsys, "decompose", str(CONFIGS / "lamplighter_p2_n1.json"), "zz^"
    )
    assert code == EXIT_PARSE


# -- automaton ------------------------------------------------------------------


def test_automaton_json_round_trip(tmp_path, capsys):
    out_file = tmp_path / "lamp.json"
    code, _, _ = run(
        capsys,
        "automaton",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "x0^-1",
        "--cap",
        "8",
        "--format",
        "json",
        "-o",
        str(out_file),
    )
    assert code == EXIT_OK
    from selfsim.engine import automaton_from_json, export_automaton

    blob = out_file.read_bytes()
    assert export_automaton(automaton_from_json(blob), "json") == blob
    data = json.loads(blob)
    assert len(data["states"]) == 2


def test_automaton_dot_stdout(capsys):
    code, out, _ = run(
        capsys,
        "automaton",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "x0^-1",
        "--cap",
        "8",
    )
    assert code == EXIT_OK
    assert out.startswith("digraph")
    assert "0|1" in out


def test_bad_cap_and_depth_exit_3(capsys):
    code, _, _ = run(
        capsys,
        "automaton",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "u",
        "--cap",
        "0",
    )
    assert code == EXIT_PARSE
    code, _, _ = run(
        capsys,
        "decompose",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "u",
        "--depth",
        "-2",
    )
    assert code == EXIT_PARSE


def test_automaton_cap_exceeded_reported(capsys):
    code, out, _ = run(
        capsys,
        "automaton",
        str(CONFIGS / "wreath_base_p2_d2.json"),
        "a x1",
        "--cap",
        "4",
        "--format",
        "json",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["cap_exceeded"] is True
    assert data["visited"] <= 4


def test_automaton_borel_diagonal_generator(capsys):
    # both spellings of the diagonal generator name are accepted
    for name in ("x1s1", "x1_1"):
        code, out, _ = run(
            capsys,
            "automaton",
            str(CONFIGS / "borel_m2_p2.json"),
            name,
            "--cap",
            "8",
            "--format",
            "json",
        )
        assert code == EXIT_OK
        data = json.loads(out)
        assert "cap_exceeded" not in data
        assert len(data["states"]) <= 8


def test_automaton_outputs_deterministic(capsys):
    args = (
        "automaton",
        str(CONFIGS / "lamplighter_p2_n2.json"),
        "x1^-1",
        "--cap",
        "16",
        "--format",
        "json",
    )
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


# -- verify -----------------------------------------------------------------------


def test_verify_core_lamplighter(capsys):
    code, out, _ = run(
        capsys, "verify", str(CONFIGS / "lamplighter_p2_n1.json"), "--suite", "core"
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["passed"] is True
    names = {c["name"] for c in data["checks"]}
    assert "transversal_valid" in names and "product_rule" in names


def test_verify_family_suite_requires_family(capsys):
    code, _, err = run(
        capsys, "verify", str(CONFIGS / "affine_n3_p2.json"), "--suite", "lamplighter"
    )
    assert code == EXIT_INVALID


def test_verify_lamplighter_suite(capsys):
    code, out, _ = run(
        capsys,
        "verify",
        str(CONFIGS / "lamplighter_p2_n1.json"),
        "--suite",
        "lamplighter",
    )
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["passed"] is True
    assert any(c["name"] == "classical_two_state_machine" for c in data["checks"])


def test_verify_seeded_runs_are_reproducible(capsys):
    args = ("verify", str(CONFIGS / "lamplighter_p2_n2.json"), "--suite", "tame", "--seed", "7")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


# -- tame -------------------------------------------------------------------------


def test_tame_reports(capsys):
    code, out, _ = run(capsys, "tame", str(CONFIGS / "lamplighter_p2_n1.json"))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["tame_degree"] == 1
    assert data["finitely_presented"] is False
    code, out, _ = run(capsys, "tame", str(CONFIGS / "lamplighter_p2_n2.json"))
    data = json.loads(out)
    assert data["tame_degree"] == 2 and data["finitely_presented"] is True


def test_tame_unsupported_family(capsys):
    code, _, err = run(capsys, "tame", str(CONFIGS / "affine_n3_p2.json"))
    assert code == EXIT_INVALID
    assert "lamplighter" in err
