import json
from fractions import Fraction

import pytest

from app.services.fusion_service import FusionModel, IndecomposableModule, SimpleCurrent, SimpleLabel
from app.services.library_service import triplet, virasoro_minimal
from app.services.scalar_service import Phase


@pytest.fixture
def triplet2() -> FusionModel:
    return triplet(2)


@pytest.fixture
def vir35() -> FusionModel:
    return virasoro_minimal(3, 5)


def chain_model(length: int = 8) -> FusionModel:
    """Orbit orde tak hingga yang dipotong: w_j berbobot j^2/2, J = w1 menggeser j -> j+1."""
    labels = [SimpleLabel(name=f"w{j}", weight=Fraction(j * j, 2)) for j in range(length)]
    current = SimpleCurrent(
        name="w1", order="infinite", weight=Fraction(1, 2), qdim=Phase(0),
        action={f"w{j}": f"w{j + 1}" for j in range(length - 1)},
    )
    modules = [
        IndecomposableModule(name="M", weight_coset=0, subquotient_of=["w0", "w2"]),
        IndecomposableModule(name="N", weight_coset=0, images={"w1": "N2"}),
        IndecomposableModule(name="N2", weight_coset=Fraction(1, 2)),
    ]
    return FusionModel(name="chain", labels=labels, vacuum="w0", currents=[current], indecomposables=modules)


@pytest.fixture
def chain() -> FusionModel:
    return chain_model()


def two_label_model(weight, qdim=None, braiding=None, ope=None) -> FusionModel:
    """Vacuum V dan current J berorde 2."""
    return FusionModel(
        name="pair",
        labels=[SimpleLabel(name="V", weight=0, qdim=Phase(0)), SimpleLabel(name="J", weight=weight, qdim=qdim)],
        vacuum="V",
        currents=[SimpleCurrent(name="J", order=2, weight=weight, qdim=qdim, braiding=braiding, ope=ope,
                                action={"V": "J", "J": "V"})],
    )


@pytest.fixture
def write_json(tmp_path):
    def write(name: str, data) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return write
