import numpy as np
import pytest

from app.errors import EnumerationGuardError, ModelInputError
from app.services.cocycle_service import (
    AbelianCocycle, FiniteAbelianGroup, coboundary_classes, coboundary_equivalent, diagonalize,
    enumerate_cocycles, key_identity_Z2, monodromy_suite_for_table, monodromy_theorem_suite,
    pullback_check, quadratic_form, verify
)
from app.services.scalar_service import Phase

Z2 = FiniteAbelianGroup(cyclic_orders=[2])
Z3 = FiniteAbelianGroup(cyclic_orders=[3])
Z4 = FiniteAbelianGroup(cyclic_orders=[4])


def bicharacter(group: FiniteAbelianGroup, scale: int, values: int) -> AbelianCocycle:
    """F = 1 dan Omega(a, b) = e^{2 pi i scale a b / values} pada grup siklik."""
    a, b = np.indices((group.order, group.order))
    n = group.order
    return AbelianCocycle(group, values, np.zeros((n, n, n), dtype=np.int64), scale * a * b)


def test_group_parsing():
    assert FiniteAbelianGroup.parse("Z2xZ2") == FiniteAbelianGroup.parse("2,2")
    group = FiniteAbelianGroup.parse("Z2xZ3")
    assert group.order == 6
    assert str(group) == "Z2xZ3"
    assert group.label(group.parse_element("1.2")) == "1.2"
    with pytest.raises(ModelInputError):
        FiniteAbelianGroup.parse("Q8")
    with pytest.raises(ValueError):
        FiniteAbelianGroup(cyclic_orders=[0])


def test_group_tables():
    assert Z4.multiples(1) == [0, 1, 2, 3]
    assert Z4.multiples(2) == [0, 2]
    assert Z4.doubled() == [0, 2]
    assert list(Z4.neg_table) == [0, 3, 2, 1]


def test_z2_cocycles_with_fourth_roots():
    space = enumerate_cocycles(Z2, 4)
    assert len(space) == 4
    assert space[0] == AbelianCocycle.trivial(Z2, 4)
    assert sorted(str(c.phase_Omega(1, 1)) for c in space) == ["0", "1/2", "1/4", "3/4"]
    for cocycle in space:
        assert verify(cocycle).ok
        assert key_identity_Z2(cocycle).ok
    assert len(coboundary_classes(list(space))) == 4


def test_z2_cocycles_with_signs():
    assert len(enumerate_cocycles(Z2, 2)) == 2


def test_trivial_group_has_one_cocycle():
    assert len(enumerate_cocycles(FiniteAbelianGroup(cyclic_orders=[1]), 4)) == 1


def test_verify_reports_first_counterexample():
    broken = AbelianCocycle(Z2, 4, np.zeros((2, 2, 2), dtype=np.int64), np.array([[0, 0], [0, 1]]))
    report = verify(broken)
    assert not report.ok
    assert report.check("pentagon").ok
    assert report.check("hexagon1").counterexample == ["1", "1", "1"]
    assert not key_identity_Z2(broken).ok


def test_normalization_is_checked():
    F = np.zeros((2, 2, 2), dtype=np.int64)
    F[0, 1, 1] = 1
    report = verify(AbelianCocycle(Z2, 2, F, np.zeros((2, 2), dtype=np.int64)))
    assert not report.check("normalization_F").ok


def test_key_identity_is_for_z2_only():
    with pytest.raises(ModelInputError):
        key_identity_Z2(AbelianCocycle.trivial(Z3, 3))


def test_bicharacter_cocycles_and_pullback():
    odd = bicharacter(Z4, 1, 4)
    even = bicharacter(Z4, 2, 4)
    assert verify(odd).ok and verify(even).ok
    assert not pullback_check(odd)
    assert pullback_check(even)
    assert pullback_check(AbelianCocycle.trivial(Z4, 8))


def test_quadratic_form_of_bicharacter():
    form = quadratic_form(bicharacter(Z4, 1, 4))
    assert form.ok
    assert form.q["1"] == Phase("1/4")
    assert form.B["1,1"] == Phase("1/2")


def test_quadratic_form_of_every_z3_cocycle():
    for cocycle in enumerate_cocycles(Z3, 3):
        assert verify(cocycle).ok
        assert quadratic_form(cocycle).ok
        assert monodromy_theorem_suite(cocycle).ok


def test_monodromy_suite_flags_asymmetric_table():
    report = monodromy_suite_for_table(Z2, np.array([[0, 1], [0, 0]]), 2)
    failed = {item.name for item in report.items if not item.ok}
    assert {"unit", "symmetry"} <= failed


def test_cohomologous_cocycles_are_found():
    space = enumerate_cocycles(Z3, 3)
    classes = coboundary_classes(list(space))
    assert len(classes) < len(space)
    big = next(members for members in classes if len(members) > 1)
    witness = coboundary_equivalent(space[big[0]], space[big[1]])
    assert witness is not None
    assert set(witness.b) == {f"{i},{j}" for i in range(3) for j in range(3)}


def test_distinct_braidings_are_not_cohomologous():
    space = enumerate_cocycles(Z2, 4)
    assert coboundary_equivalent(space[0], space[1]) is None
    same = coboundary_equivalent(space[1], space[1])
    assert same is not None and all(phase.is_identity() for phase in same.b.values())


def test_cohomology_needs_same_group():
    with pytest.raises(ModelInputError):
        coboundary_equivalent(AbelianCocycle.trivial(Z2), AbelianCocycle.trivial(Z3))


def test_enumeration_guards():
    with pytest.raises(EnumerationGuardError, match="size guard exceeded"):
        enumerate_cocycles(FiniteAbelianGroup(cyclic_orders=[5]), 2)
    with pytest.raises(EnumerationGuardError):
        enumerate_cocycles(Z2, 64)
    with pytest.raises(EnumerationGuardError):
        coboundary_equivalent(AbelianCocycle.trivial(Z4), AbelianCocycle.trivial(Z4))
    with pytest.raises(ModelInputError):
        enumerate_cocycles(Z2, 0)


def test_braiding_representatives_are_distinct():
    space = enumerate_cocycles(Z4, 4)
    representatives = space.braiding_representatives()
    tables = {rep.Omega.tobytes() for rep in representatives}
    assert len(tables) == len(representatives)
    assert all(verify(rep).ok for rep in representatives)


def test_document_round_trip_and_rescaling():
    cocycle = enumerate_cocycles(Z2, 4)[1]
    assert AbelianCocycle.from_dict(cocycle.to_dict()) == cocycle
    assert cocycle.rescaled(8) == cocycle
    with pytest.raises(ModelInputError):
        cocycle.rescaled(6)


def test_malformed_cocycle_documents():
    with pytest.raises(ModelInputError):
        AbelianCocycle.from_dict({"values": 2})
    with pytest.raises(ModelInputError):
        AbelianCocycle.from_dict({"group": [2], "values": 2, "Omega": {"1,1": "1/4"}})
    with pytest.raises(ModelInputError):
        AbelianCocycle.from_dict({"group": [2], "values": 2, "Omega": {"1": "1/2"}})


def test_diagonalize_preserves_determinant():
    D, T = diagonalize([[2, 4], [6, 8]], 2)
    assert D[0][1] == 0 and D[1][0] == 0
    assert abs(D[0][0] * D[1][1]) == 8
    assert abs(T[0][0] * T[1][1] - T[0][1] * T[1][0]) == 1


@pytest.mark.parametrize("group", [Z2, Z3, Z4], ids=str)
def test_monodromy_suite_on_every_braiding_with_eighth_roots(group):
    # suite hanya bergantung pada Omega, jadi satu wakil per tabel Omega sudah mencakup seluruh ruang
    space = enumerate_cocycles(group, 8)
    representatives = space.braiding_representatives(limit=1 << 14)
    assert len({rep.Omega.tobytes() for rep in representatives}) == len(representatives)
    assert len(representatives) <= len(space)
    failures = [rep for rep in representatives if not monodromy_theorem_suite(rep).ok]
    assert failures == []
