from fractions import Fraction

import pytest

from app.errors import InsufficientDataError, ModelInputError, OrbitTruncationError, UnknownLabelError
from app.services.fusion_service import (
    FusionModel, LoewyDiagram, SimpleCurrent, SimpleLabel, detect_simple_currents,
    detect_simple_currents_in_model, dump_model, load_model_document, load_model_file, orbit,
    qdim_power_check, raw_monodromy, validate_model, with_label_weights
)
from app.services.library_service import affine_sl2, virasoro_minimal
from app.services.scalar_service import Phase
from tests.conftest import two_label_model


def codes(report):
    return [v.code for v in report.violations]


def test_triplet_model_is_consistent(triplet2):
    report = validate_model(triplet2)
    assert report.ok, report.violations
    assert triplet2.weight("X2+") == Fraction(-1, 8)
    assert triplet2.current("X1-").weight == 1


def test_virasoro_weights(vir35):
    assert [vir35.weight(f"phi1,{s}") for s in range(1, 5)] == [0, Fraction(-1, 20), Fraction(1, 5), Fraction(3, 4)]
    assert validate_model(vir35).ok


def test_raw_monodromy_is_not_reduced(vir35):
    current = vir35.current()
    assert raw_monodromy(vir35, current, "phi1,4") == Fraction(-3, 2)
    assert raw_monodromy(vir35, current, "phi1,3") == -1


def test_missing_vacuum_stops_validation():
    model = FusionModel(labels=[SimpleLabel(name="a", weight=0)], vacuum="b")
    assert codes(validate_model(model)) == ["missing-vacuum"]


def test_duplicate_labels():
    model = FusionModel(labels=[SimpleLabel(name="a", weight=0), SimpleLabel(name="a", weight=1)], vacuum="a")
    assert codes(validate_model(model)) == ["duplicate-label"]


def test_vacuum_weight_is_a_property_violation():
    model = FusionModel(labels=[SimpleLabel(name="a", weight=1)], vacuum="a")
    report = validate_model(model)
    assert codes(report) == ["vacuum-weight"]
    assert report.has_property_violations


def test_action_must_be_a_permutation():
    model = FusionModel(
        labels=[SimpleLabel(name="a", weight=0), SimpleLabel(name="b", weight=Fraction(1, 2))],
        vacuum="a",
        currents=[SimpleCurrent(name="b", order=2, weight=Fraction(1, 2), action={"a": "b"})],
    )
    assert codes(validate_model(model)) == ["action-not-permutation"]


def test_action_order_mismatch():
    model = FusionModel(
        labels=[SimpleLabel(name=x, weight=0) for x in "abc"],
        vacuum="a",
        currents=[SimpleCurrent(name="b", order=3, weight=0, action={"a": "b", "b": "a", "c": "c"})],
    )
    report = validate_model(model)
    mismatch = [v for v in report.violations if v.code == "action-order-mismatch"]
    assert mismatch and mismatch[0].message.startswith("action order mismatch")


def test_declared_order_below_action_order_is_reported():
    model = FusionModel(
        labels=[SimpleLabel(name=x, weight=0) for x in "abcd"],
        vacuum="a",
        currents=[SimpleCurrent(name="b", order=2, weight=0,
                                action={"a": "b", "b": "c", "c": "d", "d": "a"})],
    )
    report = validate_model(model)
    mismatch = [v for v in report.violations if v.code == "action-order-mismatch"]
    assert mismatch and mismatch[0].kind == "property"
    assert "vacuum orbit length 4" in mismatch[0].message

    with pytest.raises(ModelInputError, match="action order mismatch"):
        orbit(model, model.current("b"), "a")


def test_lambda_order_violation():
    report = validate_model(two_label_model(Fraction(1, 3)))
    violations = [v for v in report.violations if v.code == "lambda-order"]
    assert violations
    assert "λ^N = 1" in violations[0].message


def test_corrupted_current_weight(triplet2):
    report = validate_model(with_label_weights(triplet2, {"X1-": Fraction(1, 3)}))
    assert "current-weight" in codes(report)
    assert report.has_property_violations


def test_loewy_diagram_accepts_pairs_and_detects_cycles():
    diagram = LoewyDiagram(nodes=[[0, "a"], [1, "b"]], edges=[[0, 1]])
    assert diagram.label_of(1) == "b"
    assert diagram.is_acyclic()
    assert not LoewyDiagram(nodes=[[0, "a"], [1, "b"]], edges=[[0, 1], [1, 0]]).is_acyclic()
    with pytest.raises(UnknownLabelError):
        diagram.label_of(5)


def test_detect_simple_currents_ising_like():
    rows = {
        ("1", "1"): ["1"], ("1", "s"): ["s"], ("1", "e"): ["e"],
        ("s", "1"): ["s"], ("s", "s"): ["1", "e"], ("s", "e"): ["s"],
        ("e", "1"): ["e"], ("e", "s"): ["s"], ("e", "e"): ["1"],
    }
    assert detect_simple_currents(["1", "s", "e"], rows) == ["1", "e"]
    del rows[("s", "e")]
    with pytest.raises(InsufficientDataError, match="insufficient data"):
        detect_simple_currents(["1", "s", "e"], rows)


def test_detect_simple_currents_in_builtin_models():
    assert detect_simple_currents_in_model(affine_sl2(1)) == ["L0", "L1"]
    assert detect_simple_currents_in_model(virasoro_minimal(3, 5)) == ["phi1,1", "phi1,4"]


def test_finite_orbit_and_fixed_point(triplet2):
    result = orbit(triplet2, triplet2.current(), "X2+")
    assert result.elements == ["X2+", "X2-"]
    assert not result.fixed_point

    sl2 = affine_sl2(2)
    fixed = orbit(sl2, sl2.current(), "L1")
    assert fixed.elements == ["L1"]
    assert fixed.fixed_point


def test_infinite_orbit_truncation(chain):
    current = chain.current("w1")
    short = orbit(chain, current, "w0", bound=3)
    assert short.elements == ["w0", "w1", "w2"]
    assert short.truncated
    with pytest.raises(OrbitTruncationError, match="truncation exceeded"):
        orbit(chain, current, "w0", bound=3, strict=True)

    full = orbit(chain, current, "w0")
    assert full.elements == [f"w{j}" for j in range(8)]
    assert not full.truncated


def test_chain_model_is_consistent(chain):
    assert validate_model(chain).ok


def test_unknown_current_lists_available(triplet2):
    with pytest.raises(UnknownLabelError, match="available: X1-"):
        triplet2.current("J")


def test_default_current_requires_one():
    model = FusionModel(labels=[SimpleLabel(name="a", weight=0)], vacuum="a")
    with pytest.raises(InsufficientDataError):
        model.default_current()


def test_qdim_power_check(triplet2):
    assert qdim_power_check(triplet2, triplet2.current()).ok
    bad = two_label_model(Fraction(1, 2), qdim=Phase(Fraction(1, 4)))
    assert not qdim_power_check(bad, bad.current()).ok


def test_document_round_trip(triplet2):
    document = dump_model(triplet2)
    assert document["currents"][0]["ope"] == {"d": "1", "order": 3}
    loaded = load_model_document(document)
    assert dump_model(loaded) == document
    assert validate_model(loaded).ok


def test_infinite_order_serializes_as_string(chain):
    document = dump_model(chain)
    assert document["currents"][0]["order"] == "infinite"
    assert load_model_document(document).current("w1").order is None


def test_document_schema_errors(triplet2):
    document = dump_model(triplet2)
    del document["vacuum"]
    with pytest.raises(ModelInputError, match="schema"):
        load_model_document(document)

    document = dump_model(triplet2)
    document["labels"][0]["weight"] = 0.5
    with pytest.raises(ModelInputError, match="schema"):
        load_model_document(document)


def test_document_semantic_errors(triplet2):
    document = dump_model(triplet2)
    document["labels"][1]["weight"] = "1/0"
    with pytest.raises(ModelInputError, match="Invalid model document"):
        load_model_document(document)


def test_load_model_file_errors(tmp_path):
    with pytest.raises(ModelInputError, match="Cannot read"):
        load_model_file(str(tmp_path / "missing.json"))
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ModelInputError, match="not valid JSON"):
        load_model_file(str(broken))
