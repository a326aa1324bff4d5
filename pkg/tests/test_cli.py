import json

import pytest

from app import TOOL_NAME, __version__
from app.cli import main
from app.services.cocycle_service import AbelianCocycle, FiniteAbelianGroup


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_model_list(capsys):
    code, payload = run_json(capsys, "model", "list")
    assert code == 0
    names = {row["name"] for row in payload}
    assert {"triplet", "virasoro", "family_A", "osp"} <= names


def test_text_output_has_header(capsys):
    code, out = run(capsys, "extend", "--model", "triplet")
    assert code == 0
    assert out.splitlines()[0] == f"{TOOL_NAME} {__version__}"
    assert "IntegerGradedSVOA_WrongStatistics" in out


def test_extend_json(capsys):
    code, payload = run_json(capsys, "extend", "--model", "triplet", "--p", "2")
    assert code == 0
    assert payload["parity"] == "IntegerGradedSVOA_WrongStatistics"
    assert payload["sectors"] == ["X1+", "X1-"]


def test_extend_reports_property_violation(capsys):
    code, payload = run_json(capsys, "extend", "--model", "virasoro")
    assert code == 2
    assert payload["parity"] == "undetermined"
    code, _ = run(capsys, "extend", "--model", "virasoro", "--strict")
    assert code == 2


def test_extend_family_model_uses_family_current(capsys):
    code, payload = run_json(capsys, "extend", "--model", "osp")
    assert code == 0
    assert payload["current"] == "L1:phi1,4"


def test_lift_single_module(capsys):
    code, payload = run_json(capsys, "lift", "--model", "triplet", "--module", "X2+")
    assert code == 0
    assert payload["lifts"] is False
    assert payload["phase"] == "1/2"


def test_lift_sweep(capsys):
    code, payload = run_json(capsys, "lift", "--model", "triplet")
    assert code == 0
    assert [d["module"] for d in payload if d["lifts"]] == ["X1+", "X1-", "P1+", "P1-"]


def test_induce_with_loewy(capsys):
    code, payload = run_json(capsys, "induce", "--model", "triplet", "--module", "P1+")
    assert code == 0
    assert payload["induced"]["iso_key"] == "P1+"
    assert len(payload["loewy"]["nodes"]) == 4


def test_induce_non_lifting_module_is_an_input_error(capsys):
    code, _ = run(capsys, "induce", "--model", "triplet", "--module", "X2+")
    assert code == 1


def test_unknown_module_is_an_input_error(capsys):
    code, _ = run(capsys, "lift", "--model", "triplet", "--module", "X9+")
    assert code == 1


def test_usage_errors_exit_with_one(capsys):
    assert main(["frobnicate"]) == 1
    assert main([]) == 1
    assert main(["extend", "--p", "two"]) == 1
    assert main(["extend"]) == 1


def test_family_compare(capsys):
    code, payload = run_json(capsys, "family", "C", "--p", "2", "--compare-paper")
    assert code == 0
    assert payload["parity_matches"] is True
    assert payload["divergences"] == []
    assert payload["report"]["parity"] == "IntegerGradedVOA"


def test_family_compare_lists_divergences(capsys):
    code, out = run(capsys, "family", "A", "--p", "3", "--compare-paper")
    assert code == 0
    assert "divergences from printed lists" in out
    assert "X1+:L0" in out


def test_family_without_compare(capsys):
    code, payload = run_json(capsys, "family", "n4")
    assert code == 0
    assert payload["report"]["parity"] == "VOSA"


def test_dump_then_validate(capsys, write_json):
    code, document = run_json(capsys, "model", "dump", "--name", "triplet", "--p", "3")
    assert code == 0
    path = write_json("triplet3.json", document)
    code, payload = run_json(capsys, "validate", "--file", path)
    assert code == 0
    assert payload["ok"]

    document["labels"][1]["weight"] = "1/3"
    code, payload = run_json(capsys, "validate", "--file", write_json("broken.json", document))
    assert code == 2
    assert "current-weight" in [v["code"] for v in payload["violations"]]


def test_validate_structure_violation_exits_with_one(capsys, write_json):
    document = {"labels": [{"name": "a", "weight": "0"}], "vacuum": "b"}
    code, payload = run_json(capsys, "validate", "--file", write_json("novac.json", document))
    assert code == 1
    assert payload["violations"][0]["code"] == "missing-vacuum"


def test_validate_unreadable_file(capsys, tmp_path):
    code, _ = run(capsys, "validate", "--file", str(tmp_path / "missing.json"))
    assert code == 1


def test_cocycle_enumerate(capsys):
    code, payload = run_json(capsys, "cocycle", "enumerate", "--group", "Z2", "--values", "4")
    assert code == 0
    assert payload["count"] == 4
    assert len(payload["classes"]) == 4
    assert len(payload["cocycles"]) == 4


def test_cocycle_guard(capsys):
    code, _ = run(capsys, "cocycle", "enumerate", "--group", "Z5", "--values", "2")
    assert code == 1


def test_cocycle_verify_file(capsys, write_json):
    group = FiniteAbelianGroup(cyclic_orders=[2])
    broken = AbelianCocycle.trivial(group, 4).to_dict()
    broken["Omega"]["1,1"] = "1/4"
    code, payload = run_json(capsys, "cocycle", "verify", "--file", write_json("c.json", broken))
    assert code == 2
    assert payload["ok"] is False


def test_cocycle_quadratic_and_pullback(capsys):
    code, payload = run_json(capsys, "cocycle", "quadratic", "--group", "Z2", "--values", "4", "--index", "1")
    assert code == 0
    assert set(payload["q"]) == {"0", "1"}
    code, payload = run_json(capsys, "cocycle", "pullback", "--group", "Z2", "--values", "4", "--index", "1")
    assert code == 0
    assert payload == {"pullback": True}


def test_cocycle_index_out_of_range(capsys):
    code, _ = run(capsys, "cocycle", "quadratic", "--group", "Z2", "--values", "4", "--index", "9")
    assert code == 1


def test_cocycle_equiv_and_monodromy(capsys):
    code, payload = run_json(capsys, "cocycle", "equiv", "--group", "Z2", "--values", "4")
    assert code == 0
    assert len(payload["classes"]) == 4
    code, payload = run_json(capsys, "cocycle", "monodromy", "--group", "Z2", "--values", "4")
    assert code == 0
    assert payload["ok"] and payload["tables_checked"] == 4


@pytest.mark.parametrize("argv", [["model", "list"], ["cocycle", "enumerate", "--group", "Z2", "--values", "2"]])
def test_text_mode_renders_tables(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 0
    assert out.startswith(TOOL_NAME)
