from fractions import Fraction

import pytest

from app.errors import ModelInputError, ParameterRangeError, UnknownLabelError
from app.services.extension_service import ParityClass
from app.services.fusion_service import validate_model
from app.services.library_service import (
    FAMILY_BUILDERS, MODEL_BUILDERS, PrintedExpectations, affine_sl2, build_family, build_model,
    compare_family, glued_module, lattice_rank1, tensor_model, triplet, triplet_weight,
    virasoro_central_charge, virasoro_minimal
)
from app.services.lifting_service import identify_lifts
from app.services.scalar_service import Phase


def test_triplet_data():
    assert triplet_weight(2, 2, "+") == Fraction(-1, 8)
    model = triplet(3)
    assert model.current("X1-").weight == Fraction(7, 4)
    assert model.current("X1-").ope.order == 5
    assert triplet(2).central_charge == -2


def test_virasoro_data():
    assert virasoro_central_charge(3, 5) == Fraction(-3, 5)
    assert virasoro_minimal(3, 7).current().weight == Fraction(5, 4)
    assert virasoro_minimal(4, 5).label_names == ["phi1,1", "phi1,4"]


def test_lattice_currents():
    model = lattice_rank1(3)
    assert [c.name for c in model.currents] == ["v3", "v1"]
    assert model.current("v1").order == 6
    assert model.weight("v5") == Fraction(1, 12)


@pytest.mark.parametrize("name", list(MODEL_BUILDERS))
def test_builtin_models_are_consistent(name):
    report = validate_model(build_model(name))
    assert report.ok, report.violations


@pytest.mark.parametrize("family", list(FAMILY_BUILDERS))
def test_family_models_are_consistent(family):
    setup = build_family(family)
    report = validate_model(setup.model)
    assert report.ok, report.violations[:3]
    assert setup.current.weight == setup.printed.current_weight


@pytest.mark.parametrize("builder,args", [
    (triplet, (1,)), (virasoro_minimal, (3, 6)), (affine_sl2, (0,)), (lattice_rank1, (0,)),
])
def test_parameter_ranges(builder, args):
    with pytest.raises(ParameterRangeError):
        builder(*args)


def test_family_parameter_ranges():
    with pytest.raises(ParameterRangeError):
        build_family("A", p=2)
    with pytest.raises(ParameterRangeError):
        build_family("B", p=6)
    with pytest.raises(ParameterRangeError):
        build_family("wsuper", r=1)


def test_unknown_names():
    with pytest.raises(UnknownLabelError, match="available"):
        build_model("nope")
    with pytest.raises(UnknownLabelError):
        build_family("Z")


def test_family_models_are_reachable_by_name():
    assert build_model("family_A", p=4).name == "family_A(4)"


def test_tensor_product_structure():
    model = tensor_model(triplet(2), triplet(2))
    assert len(model.labels) == 16
    assert len(model.indecomposables) == 20
    assert model.weight("X2+:X2-") == Fraction(1, 4)
    diagram = model.indecomposable("P1+:P1+").loewy
    assert len(diagram.nodes) == 16
    assert len(diagram.edges) == 32
    assert diagram.is_acyclic()
    assert [f.name for f in model.factors] == ["triplet(2)", "triplet(2)"]


def test_glued_module_shape():
    module = glued_module(3, 1, 2, "+", "-")
    assert module.name == "Q1,2+-"
    assert len(module.loewy.nodes) == 8
    assert len(module.loewy.edges) == 16
    assert module.loewy.is_acyclic()
    assert module.images == {"X1-:X1-": "Q1,2-+"}


@pytest.mark.parametrize("family,params,parity", [
    ("A", {"p": 3}, ParityClass.IntegerGradedVOA),
    ("A", {"p": 4}, ParityClass.IntegerGradedSVOA_WrongStatistics),
    ("B", {"p": 4}, ParityClass.IntegerGradedSVOA_WrongStatistics),
    ("B", {"p": 5}, ParityClass.IntegerGradedSVOA_WrongStatistics),
    ("C", {"p": 2}, ParityClass.IntegerGradedVOA),
    ("C", {"p": 3}, ParityClass.VOSA),
    ("osp", {}, ParityClass.IntegerGradedSVOA_WrongStatistics),
    ("n4", {}, ParityClass.VOSA),
    ("wsuper", {"r": 2}, ParityClass.VOSA),
    ("wsuper", {"r": 3}, ParityClass.IntegerGradedSVOA_WrongStatistics),
])
def test_family_parities(family, params, parity):
    comparison = compare_family(build_family(family, **params))
    assert comparison.report.parity == parity
    assert comparison.parity_matches


@pytest.mark.parametrize("family,params", [("C", {"p": 2}), ("osp", {})])
def test_printed_lists_agree_for_small_parameters(family, params):
    comparison = compare_family(build_family(family, **params))
    assert comparison.divergences == []


def test_odd_family_a_vacuum_diverges_from_printed_list():
    comparison = compare_family(build_family("A", p=3))
    assert comparison.vacuum_lifts
    vacuum = [d for d in comparison.divergences if d.module == "X1+:L0"]
    assert vacuum and vacuum[0].derived and not vacuum[0].printed


def test_osp_lifts():
    comparison = compare_family(build_family("osp"))
    assert comparison.derived_simple_lifts == ["L0:phi1,1", "L0:phi1,3", "L1:phi1,2", "L1:phi1,4"]


def test_family_c_glued_modules_are_reported_separately():
    comparison = compare_family(build_family("C", p=2))
    assert sorted(comparison.glued_lifts) == ["Q1,1++", "Q1,1+-", "Q1,1-+", "Q1,1--"]
    assert not any(name.startswith("Q") for name in comparison.derived_indecomposable_lifts)


def test_printed_list_with_unknown_module_is_rejected():
    setup = build_family("osp")
    broken = setup.model_copy(update={"printed": PrintedExpectations(simple_lifts=["L7:phi1,1"])})
    with pytest.raises(ModelInputError):
        compare_family(broken)


def kac_weight(p: int, q: int, r: int, s: int) -> Fraction:
    """h_{r,s} = ((q r - p s)^2 - (q - p)^2) / (4 p q)."""
    return Fraction((q * r - p * s) ** 2 - (q - p) ** 2, 4 * p * q)


@pytest.mark.parametrize("p", [2, 3, 4, 5])
def test_triplet_weight_table(p):
    # X_s^+ = h_{1,s}, X_s^- = h_{2,s} pada tabel Kac (1, p)
    model = triplet(p)
    for s in range(1, p + 1):
        assert model.weight(f"X{s}+") == kac_weight(1, p, 1, s)
        assert model.weight(f"X{s}-") == kac_weight(1, p, 2, s)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_affine_sl2_weight_table(k):
    model = affine_sl2(k)
    assert [model.weight(f"L{t}") for t in range(k + 1)] == [
        Fraction(t * (t + 2), 4 * (k + 2)) for t in range(k + 1)]


@pytest.mark.parametrize("v", [4, 5, 7])
def test_virasoro_weight_table(v):
    model = virasoro_minimal(3, v)
    for s in range(1, v):
        assert model.weight(f"phi1,{s}") == kac_weight(3, v, 1, s)


@pytest.mark.parametrize("model,label,weight", [
    (triplet(2), "X2+", Fraction(-1, 8)),
    (triplet(2), "X2-", Fraction(3, 8)),
    (triplet(3), "X3+", Fraction(-1, 3)),
    (triplet(4), "X2+", Fraction(-5, 16)),
    (triplet(5), "X5-", Fraction(9, 20)),
    (affine_sl2(1), "L1", Fraction(1, 4)),
    (affine_sl2(2), "L1", Fraction(3, 16)),
    (affine_sl2(3), "L3", Fraction(3, 4)),
    (virasoro_minimal(3, 4), "phi1,2", Fraction(1, 16)),
    (virasoro_minimal(3, 4), "phi1,3", Fraction(1, 2)),
    (virasoro_minimal(3, 5), "phi1,4", Fraction(3, 4)),
    (virasoro_minimal(3, 7), "phi1,6", Fraction(5, 4)),
])
def test_golden_weights(model, label, weight):
    assert model.weight(label) == weight


@pytest.mark.parametrize("p", [1, 2, 3, 5])
def test_lattice_weights_are_minimal_norms(p):
    model = lattice_rank1(p)
    for j in range(2 * p):
        h = model.weight(f"v{j}")
        assert (h - Fraction(j * j, 4 * p)).denominator == 1
        assert h == Fraction(min(j, 2 * p - j) ** 2, 4 * p)


@pytest.mark.parametrize("r", range(2, 9))
def test_walgebra_candidate_current_data(r):
    setup = build_family("walgebra", r=r)
    assert setup.current.weight == Fraction(r, 2)
    assert setup.current.qdim == Phase(Fraction(r % 2, 2))
    comparison = compare_family(setup)
    assert comparison.report.parity.is_commutative
    assert comparison.parity_matches


def test_osp_lifts_form_two_classes():
    setup = build_family("osp")
    lifted = compare_family(setup).derived_simple_lifts
    assert len(lifted) == 4 and len(setup.model.labels) == 8
    classes = []
    for name in lifted:
        for members in classes:
            if identify_lifts(setup.model, setup.current, members[0], name):
                members.append(name)
                break
        else:
            classes.append([name])
    assert sorted(sorted(members) for members in classes) == [
        ["L0:phi1,1", "L1:phi1,4"], ["L0:phi1,3", "L1:phi1,2"]]


@pytest.mark.parametrize("family,p", [("A", 4), ("A", 6), ("B", 4), ("C", 4), ("C", 6)])
def test_printed_lists_agree_for_even_p(family, p):
    comparison = compare_family(build_family(family, p=p))
    assert comparison.divergences == []
    assert comparison.vacuum_lifts


@pytest.mark.parametrize("family,p", [("A", 3), ("A", 5), ("B", 5), ("C", 3), ("C", 5)])
def test_printed_lists_diverge_for_odd_p(family, p):
    comparison = compare_family(build_family(family, p=p))
    assert comparison.divergences
    assert comparison.vacuum_lifts
    vacuum = comparison.report.sectors[0]
    assert vacuum in comparison.derived_simple_lifts
