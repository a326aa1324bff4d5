# app/services/lifting_service.py
import logging
from enum import Enum
from typing import List, Optional, Sequence

from joblib import Parallel, delayed
from pydantic import AliasChoices, Field

from .. import config
from ..errors import ModelInputError, NotLiftingError, UnknownLabelError
from ..schemas import CheckResult, LabModel
from .fusion_service import (
    TENSOR_SEPARATOR, FusionModel, LoewyDiagram, LoewyNode, SimpleCurrent, orbit, raw_monodromy
)
from .scalar_service import Phase, PhaseField

logger = logging.getLogger(__name__)

INDUCED_SEPARATOR = "⊕"


class LiftRoute(str, Enum):
    Simple = "Simple"
    IndecomposableFiniteOrder = "IndecomposableFiniteOrder"
    SubquotientOfSimples = "SubquotientOfSimples"


class LiftDecision(LabModel):
    module: str
    current: str
    phase: PhaseField = Field(validation_alias=AliasChoices("phase", "monodromy_phase"))
    lifts: bool
    route: LiftRoute
    flagged: bool = False
    notes: List[str] = []

    @property
    def monodromy_phase(self) -> Phase:
        return self.phase


class InducedModule(LabModel):
    base: str
    current: str
    sectors: List[str]
    simple: bool
    iso_key: str
    fixed_point: bool = False
    truncated: bool = False
    notes: List[str] = []


def _resolve_current(model: FusionModel, current) -> SimpleCurrent:
    if isinstance(current, SimpleCurrent):
        return current
    return model.current(current)


def _subquotient_phase(model: FusionModel, current: SimpleCurrent, factors: Sequence[str]) -> Phase:
    total = Phase(0)
    for name in factors:
        total = total * Phase(raw_monodromy(model, current, name))
    return total


def monodromy_phase(model: FusionModel, current, name: str) -> Phase:
    """Fase e^{2 pi i (h_{J x X} - h_J - h_X)}; untuk indecomposable dipakai representatif koset."""
    current = _resolve_current(model, current)
    if model.is_simple(name):
        return Phase(raw_monodromy(model, current, name))
    module = model.indecomposable(name)
    if current.name in module.images:
        return Phase(raw_monodromy(model, current, name))
    if module.subquotient_of:
        return _subquotient_phase(model, current, module.subquotient_of)
    raise UnknownLabelError(
        f"Module '{name}' has neither an image under '{current.name}' nor a subquotient declaration")


def lifts(model: FusionModel, current, name: str) -> LiftDecision:
    current = _resolve_current(model, current)
    if model.is_simple(name):
        phase = monodromy_phase(model, current, name)
        return LiftDecision(module=name, current=current.name, phase=phase,
                            lifts=phase.is_identity(), route=LiftRoute.Simple)

    module = model.indecomposable(name)
    notes: List[str] = []
    flagged = False
    has_image = current.name in module.images

    if current.is_finite and has_image:
        route = LiftRoute.IndecomposableFiniteOrder
        phase = Phase(raw_monodromy(model, current, name))
        if module.subquotient_of:
            other = _subquotient_phase(model, current, module.subquotient_of)
            if other != phase:
                flagged = True
                notes.append(f"subquotient phase {other} disagrees with coset phase {phase}")
    elif module.subquotient_of:
        route = LiftRoute.SubquotientOfSimples
        phase = _subquotient_phase(model, current, module.subquotient_of)
        notes.append(f"phase from product of simples: {', '.join(module.subquotient_of)}")
    elif has_image:
        # orde tak hingga tanpa deklarasi subquotient
        route = LiftRoute.IndecomposableFiniteOrder
        phase = Phase(raw_monodromy(model, current, name))
        flagged = True
        notes.append("infinite-order current: module is not declared a subquotient of a product of simples, "
                     "lifting hypotheses not established")
    else:
        raise UnknownLabelError(
            f"Module '{name}' has neither an image under '{current.name}' nor a subquotient declaration")

    if not module.attested_bounded_jordan:
        flagged = True
        notes.append("bounded Jordan block size is not attested for this module")
    if flagged:
        logger.warning(f"Lift decision for '{name}' under '{current.name}' is flagged: {'; '.join(notes)}")
    return LiftDecision(module=name, current=current.name, phase=phase, lifts=phase.is_identity(),
                        route=route, flagged=flagged, notes=notes)


def order_consistency_phase(order: int, phase: Phase) -> CheckResult:
    if (phase ** order).is_identity():
        return CheckResult.passed()
    return CheckResult.failed(f"phase {phase} has order {phase.order()} which does not divide {order}")


def order_consistency(model: FusionModel, current, name: str) -> CheckResult:
    """lambda^N = 1 untuk current orde hingga N."""
    current = _resolve_current(model, current)
    if not current.is_finite:
        raise ModelInputError(f"Current '{current.name}' has infinite order")
    return order_consistency_phase(current.order, monodromy_phase(model, current, name))


def induce(model: FusionModel, current, name: str) -> InducedModule:
    """F(X) = sum_i J^i x X; kelas isomorfisma diwakili elemen orbit terkecil secara leksikografis."""
    current = _resolve_current(model, current)
    decision = lifts(model, current, name)
    if not decision.lifts:
        raise NotLiftingError(f"module does not lift: '{name}' has monodromy phase {decision.phase}")

    result = orbit(model, current, name)
    notes = list(decision.notes)
    if result.fixed_point:
        notes.append("fixed-point orbit: J x W is isomorphic to W, the induced module need not be simple")
    if result.truncated:
        notes.append("orbit truncated: iso_key is taken over the listed prefix only")
    simple = model.is_simple(name) and not result.fixed_point and not result.truncated
    return InducedModule(base=name, current=current.name, sectors=result.elements, simple=simple,
                         iso_key=min(result.elements), fixed_point=result.fixed_point,
                         truncated=result.truncated, notes=notes)


def identify_lifts(model: FusionModel, current, first: str, second: str) -> bool:
    current = _resolve_current(model, current)
    return induce(model, current, first).iso_key == induce(model, current, second).iso_key


def induce_loewy(model: FusionModel, current, diagram: LoewyDiagram,
                 ambient: Optional[str] = None) -> LoewyDiagram:
    """Induksi diagram Loewy node demi node; edge tidak berubah karena F eksak."""
    current = _resolve_current(model, current)
    if ambient is not None:
        decision = lifts(model, current, ambient)
        if not decision.lifts:
            raise NotLiftingError(f"module does not lift: '{ambient}' has monodromy phase {decision.phase}")
    nodes = []
    for node in diagram.nodes:
        if not model.is_simple(node.label):
            raise UnknownLabelError(f"Loewy node {node.id} references unknown simple '{node.label}'")
        components = orbit(model, current, node.label).elements
        nodes.append(LoewyNode(id=node.id, label=INDUCED_SEPARATOR.join(components), components=components))
    return LoewyDiagram(nodes=nodes, edges=list(diagram.edges))


def induce_module_loewy(model: FusionModel, current, name: str) -> LoewyDiagram:
    module = model.indecomposable(name)
    if module.loewy is None:
        raise ModelInputError(f"Module '{name}' has no Loewy diagram")
    return induce_loewy(model, current, module.loewy, ambient=name)


def phase_additivity_check(model: FusionModel, current, components: Sequence[str]) -> CheckResult:
    """Fase produk tensor sama dengan jumlah fase komponen (dihitung pada model faktor)."""
    current = _resolve_current(model, current)
    if not model.factors:
        raise ModelInputError(f"Model '{model.name}' is not a tensor product")
    current_parts = current.name.split(TENSOR_SEPARATOR)
    if len(components) != len(model.factors) or len(current_parts) != len(model.factors):
        raise ModelInputError(
            f"Expected {len(model.factors)} component labels for '{model.name}', got {len(components)}")

    product = monodromy_phase(model, current, TENSOR_SEPARATOR.join(components))
    total = Phase(0)
    for factor, part, label in zip(model.factors, current_parts, components):
        total = total * monodromy_phase(factor, part, label)
    if product == total:
        return CheckResult.passed()
    return CheckResult.failed(
        f"phase of {TENSOR_SEPARATOR.join(components)} is {product}, componentwise sum is {total}")


def composition_factor_check(model: FusionModel, current, name: str) -> CheckResult:
    """Setiap faktor komposisi pada diagram Loewy mewarisi fase monodromi modulnya."""
    current = _resolve_current(model, current)
    module = model.indecomposable(name)
    if module.loewy is None:
        return CheckResult.passed("no Loewy diagram")
    expected = monodromy_phase(model, current, name)
    for node in module.loewy.nodes:
        phase = monodromy_phase(model, current, node.label)
        if phase != expected:
            return CheckResult.failed(
                f"factor '{node.label}' has phase {phase}, module '{name}' has {expected}", index=node.id)
    return CheckResult.passed()


def sweep_lifts(model: FusionModel, current, modules: Optional[Sequence[str]] = None,
                n_jobs: Optional[int] = None) -> List[LiftDecision]:
    """LiftDecision untuk semua modul (simple lalu indecomposable), paralel dengan joblib."""
    current = _resolve_current(model, current)
    names = list(modules) if modules is not None else model.module_names
    n_jobs = n_jobs or config.N_JOBS
    if n_jobs == 1:
        decisions = [lifts(model, current, name) for name in names]
    else:
        decisions = Parallel(n_jobs=n_jobs)(delayed(lifts)(model, current, name) for name in names)
    lifted = sum(1 for d in decisions if d.lifts)
    logger.info(f"Lift sweep over {len(names)} module(s) of '{model.name}': {lifted} lift.")
    return decisions


def lifting_simples(model: FusionModel, current) -> List[str]:
    current = _resolve_current(model, current)
    return [name for name in model.label_names if monodromy_phase(model, current, name).is_identity()]
