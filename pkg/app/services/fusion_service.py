# app/services/fusion_service.py
import json
import logging
from collections import Counter, deque
from functools import lru_cache
from pathlib import Path
from fractions import Fraction
from math import lcm
from typing import Annotated, Dict, List, Mapping, Optional, Sequence, Tuple

import jsonschema
from pydantic import (
    BeforeValidator, Field, PlainSerializer, PrivateAttr, ValidationError, WithJsonSchema,
    field_validator
)

from ..errors import (
    InsufficientDataError, ModelInputError, OrbitTruncationError, UnknownLabelError
)
from ..schemas import CheckResult, LabModel, Violation
from .. import config
from .scalar_service import Phase, PhaseField, RationalField

logger = logging.getLogger(__name__)

# Pemisah label pada model hasil tensor, misalnya "X1-:L2"
TENSOR_SEPARATOR = ":"


def _parse_order(value):
    if value is None or value == "infinite":
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ModelInputError(f"Current order must be a positive integer or 'infinite', got {value!r}")
    return value


OrderField = Annotated[
    Optional[int],
    BeforeValidator(_parse_order),
    PlainSerializer(lambda v: "infinite" if v is None else v),
    WithJsonSchema({"oneOf": [{"type": "integer", "minimum": 1}, {"const": "infinite"}]}),
]


class SimpleLabel(LabModel):
    name: str
    weight: RationalField
    qdim: Optional[PhaseField] = None


class LoewyNode(LabModel):
    id: int
    label: str
    components: Optional[List[str]] = None


class LoewyDiagram(LabModel):
    nodes: List[LoewyNode]
    edges: List[Tuple[int, int]] = []

    @field_validator("nodes", mode="before")
    @classmethod
    def _accept_pairs(cls, value):
        # Node boleh ditulis sebagai pasangan [id, label]
        if isinstance(value, list):
            return [
                {"id": item[0], "label": item[1]} if isinstance(item, (list, tuple)) else item
                for item in value
            ]
        return value

    def label_of(self, node_id: int) -> str:
        for node in self.nodes:
            if node.id == node_id:
                return node.label
        raise UnknownLabelError(f"Loewy diagram has no node with id {node_id}")

    def composition_factors(self) -> List[str]:
        return [node.label for node in self.nodes]

    def is_acyclic(self) -> bool:
        """Cek DAG dengan algoritma Kahn."""
        ids = {node.id for node in self.nodes}
        indegree = {i: 0 for i in ids}
        successors: Dict[int, List[int]] = {i: [] for i in ids}
        for source, target in self.edges:
            if source not in ids or target not in ids:
                return False
            successors[source].append(target)
            indegree[target] += 1
        queue = deque(i for i, d in indegree.items() if d == 0)
        visited = 0
        while queue:
            node = queue.popleft()
            visited += 1
            for nxt in successors[node]:
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    queue.append(nxt)
        return visited == len(ids)


class OpeData(LabModel):
    """Bobot terendah d dari current self-dual dan orde leading OPE-nya."""
    d: RationalField
    order: int


class SimpleCurrent(LabModel):
    name: str
    order: OrderField
    weight: RationalField
    qdim: Optional[PhaseField] = None
    action: Dict[str, str]
    braiding: Optional[PhaseField] = None
    ope: Optional[OpeData] = None
    truncation: Optional[int] = None

    @property
    def is_finite(self) -> bool:
        return self.order is not None


class IndecomposableModule(LabModel):
    name: str
    weight_coset: RationalField
    images: Dict[str, str] = {}
    loewy: Optional[LoewyDiagram] = None
    subquotient_of: Optional[List[str]] = None
    attested_bounded_jordan: bool = True


class FusionRule(LabModel):
    a: str
    b: str
    products: List[str]


class FusionModel(LabModel):
    name: str = "custom"
    labels: List[SimpleLabel]
    vacuum: str
    currents: List[SimpleCurrent] = []
    indecomposables: List[IndecomposableModule] = []
    central_charge: Optional[RationalField] = None
    fusion_rules: List[FusionRule] = []
    # Model komponen dari tensor product; tidak ikut diserialisasi
    factors: List["FusionModel"] = Field(default_factory=list, exclude=True)

    _labels: Dict[str, SimpleLabel] = PrivateAttr(default_factory=dict)
    _currents: Dict[str, SimpleCurrent] = PrivateAttr(default_factory=dict)
    _indecomposables: Dict[str, IndecomposableModule] = PrivateAttr(default_factory=dict)

    def model_post_init(self, __context) -> None:
        self._labels = {label.name: label for label in self.labels}
        self._currents = {current.name: current for current in self.currents}
        self._indecomposables = {module.name: module for module in self.indecomposables}

    @property
    def label_names(self) -> List[str]:
        return [label.name for label in self.labels]

    @property
    def module_names(self) -> List[str]:
        return self.label_names + [module.name for module in self.indecomposables]

    def has_label(self, name: str) -> bool:
        return name in self._labels

    def is_simple(self, name: str) -> bool:
        return name in self._labels

    def has_module(self, name: str) -> bool:
        return name in self._labels or name in self._indecomposables

    def label(self, name: str) -> SimpleLabel:
        try:
            return self._labels[name]
        except KeyError:
            raise UnknownLabelError(f"Unknown simple label '{name}' in model '{self.name}'") from None

    def weight(self, name: str) -> Fraction:
        return self.label(name).weight

    def qdim(self, name: str) -> Optional[Phase]:
        return self.label(name).qdim

    def current(self, name: Optional[str] = None) -> SimpleCurrent:
        if name is None:
            return self.default_current()
        try:
            return self._currents[name]
        except KeyError:
            available = ", ".join(self._currents) or "none"
            raise UnknownLabelError(
                f"Unknown current '{name}' in model '{self.name}' (available: {available})"
            ) from None

    def default_current(self) -> SimpleCurrent:
        if not self.currents:
            raise InsufficientDataError(f"Model '{self.name}' declares no simple currents")
        return self.currents[0]

    def indecomposable(self, name: str) -> IndecomposableModule:
        try:
            return self._indecomposables[name]
        except KeyError:
            raise UnknownLabelError(f"Unknown module '{name}' in model '{self.name}'") from None

    def module_weight(self, name: str) -> Fraction:
        """Bobot simple, atau representatif koset untuk indecomposable."""
        if name in self._labels:
            return self._labels[name].weight
        return self.indecomposable(name).weight_coset

    def image(self, current: SimpleCurrent, name: str) -> str:
        """Label J x X, untuk simple lewat action, untuk indecomposable lewat images."""
        if name in self._labels:
            if name not in current.action:
                raise UnknownLabelError(f"Current '{current.name}' has no action on '{name}'")
            return current.action[name]
        module = self.indecomposable(name)
        if current.name not in module.images:
            raise UnknownLabelError(
                f"Indecomposable '{name}' has no recorded image under current '{current.name}'"
            )
        return module.images[current.name]


class ValidationReport(LabModel):
    model: str
    violations: List[Violation] = []

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def has_property_violations(self) -> bool:
        return any(v.kind == "property" for v in self.violations)


class Orbit(LabModel):
    current: str
    start: str
    elements: List[str]
    fixed_point: bool = False
    truncated: bool = False


def with_label_weights(model: FusionModel, overrides: Mapping[str, Fraction]) -> FusionModel:
    """Salinan model dengan bobot label tertentu diganti (dipakai untuk data uji yang dirusak)."""
    labels = [
        SimpleLabel(name=label.name, weight=overrides.get(label.name, label.weight), qdim=label.qdim)
        for label in model.labels
    ]
    return FusionModel(
        name=model.name,
        labels=labels,
        vacuum=model.vacuum,
        currents=model.currents,
        indecomposables=model.indecomposables,
        central_charge=model.central_charge,
        fusion_rules=model.fusion_rules,
        factors=model.factors,
    )


def raw_monodromy(model: FusionModel, current: SimpleCurrent, name: str) -> Fraction:
    """h_{J x X} - h_J - h_X (belum direduksi mod 1)."""
    image = model.image(current, name)
    if not model.has_module(image):
        raise UnknownLabelError(f"Image '{image}' of '{name}' under '{current.name}' is not a known module")
    return model.module_weight(image) - current.weight - model.module_weight(name)


def _permutation_order(action: Mapping[str, str], labels: Sequence[str]) -> int:
    seen = set()
    order = 1
    for start in labels:
        if start in seen:
            continue
        length = 0
        node = start
        while node not in seen:
            seen.add(node)
            node = action[node]
            length += 1
        order = lcm(order, length)
    return order


def _validate_current(model: FusionModel, current: SimpleCurrent) -> List[Violation]:
    violations: List[Violation] = []
    names = model.label_names
    known = set(names)

    unknown = sorted({k for k in current.action if k not in known} | {v for v in current.action.values() if v not in known})
    if unknown:
        violations.append(Violation(
            code="unknown-label", kind="structure",
            message=f"Current '{current.name}' action references unknown labels: {', '.join(unknown)}"))
        return violations

    if current.is_finite:
        if set(current.action) != known or set(current.action.values()) != known:
            violations.append(Violation(
                code="action-not-permutation", kind="structure",
                message=f"Action of current '{current.name}' is not a permutation of the labels"))
            return violations
        perm_order = _permutation_order(current.action, names)
        # orbit() menolak orbit yang lebih panjang dari order; di sini cukup ikuti permutasinya
        orbit_length, node = 1, current.action[model.vacuum]
        while node != model.vacuum:
            orbit_length += 1
            node = current.action[node]
        if current.order % perm_order != 0 or orbit_length != current.order:
            violations.append(Violation(
                code="action-order-mismatch", kind="property",
                message=(f"action order mismatch: current '{current.name}' declares order {current.order}, "
                         f"action has order {perm_order} and vacuum orbit length {orbit_length}")))
    else:
        if len(set(current.action.values())) != len(current.action):
            violations.append(Violation(
                code="action-not-injective", kind="structure",
                message=f"Action of infinite-order current '{current.name}' is not injective"))
            return violations
        node, seen = model.vacuum, set()
        while node in current.action and node not in seen:
            seen.add(node)
            node = current.action[node]
        if node in seen:
            violations.append(Violation(
                code="action-order-mismatch", kind="property",
                message=f"action order mismatch: infinite-order current '{current.name}' cycles back to the vacuum"))

    generator = current.action.get(model.vacuum)
    if generator != current.name:
        violations.append(Violation(
            code="current-name", kind="structure",
            message=f"Current '{current.name}' must be named after J x vacuum = '{generator}'"))
    elif model.weight(generator) != current.weight:
        violations.append(Violation(
            code="current-weight", kind="property",
            message=f"Current '{current.name}' weight {current.weight} differs from label weight {model.weight(generator)}"))
    elif current.qdim is not None and model.qdim(generator) is not None and model.qdim(generator) != current.qdim:
        violations.append(Violation(
            code="current-qdim", kind="property",
            message=f"Current '{current.name}' qdim {current.qdim} differs from label qdim {model.qdim(generator)}"))

    if current.is_finite:
        for name in names:
            phase = raw_monodromy(model, current, name)
            if (current.order * phase).denominator != 1:
                violations.append(Violation(
                    code="lambda-order", kind="property",
                    message=(f"monodromy of '{current.name}' with '{name}' is e^(2 pi i {phase}); "
                             f"violates λ^N = 1 for N = {current.order}")))

    for module in model.indecomposables:
        if current.name not in module.images:
            continue
        target = module.images[current.name]
        if not model.has_module(target) or model.is_simple(target):
            violations.append(Violation(
                code="unknown-image", kind="structure",
                message=f"Image '{target}' of '{module.name}' under '{current.name}' is not a known indecomposable"))
            continue
        if current.is_finite:
            phase = raw_monodromy(model, current, module.name)
            if (current.order * phase).denominator != 1:
                violations.append(Violation(
                    code="lambda-order", kind="property",
                    message=(f"monodromy of '{current.name}' with '{module.name}' is e^(2 pi i {phase}); "
                             f"violates λ^N = 1 for N = {current.order}")))
    return violations


def _validate_indecomposable(model: FusionModel, module: IndecomposableModule) -> List[Violation]:
    violations: List[Violation] = []
    if module.subquotient_of:
        missing = [x for x in module.subquotient_of if not model.is_simple(x)]
        if missing:
            violations.append(Violation(
                code="unknown-label", kind="structure",
                message=f"'{module.name}' declares subquotient of unknown simples: {', '.join(missing)}"))
    if module.loewy is None:
        return violations
    ids = [node.id for node in module.loewy.nodes]
    if len(set(ids)) != len(ids):
        violations.append(Violation(
            code="loewy-node-id", kind="structure",
            message=f"Loewy diagram of '{module.name}' has duplicate node ids"))
    missing = sorted({node.label for node in module.loewy.nodes if not model.is_simple(node.label)})
    if missing:
        violations.append(Violation(
            code="loewy-label", kind="structure",
            message=f"Loewy diagram of '{module.name}' references unknown simples: {', '.join(missing)}"))
        return violations
    if not module.loewy.is_acyclic():
        violations.append(Violation(
            code="loewy-cycle", kind="structure",
            message=f"Loewy diagram of '{module.name}' has a directed cycle or dangling edge"))
    for label in sorted(set(module.loewy.composition_factors())):
        if (model.weight(label) - module.weight_coset).denominator != 1:
            violations.append(Violation(
                code="weight-coset", kind="property",
                message=(f"Composition factor '{label}' of '{module.name}' has weight {model.weight(label)} "
                         f"outside the coset {module.weight_coset} + Z")))
    return violations


def validate_model(model: FusionModel) -> ValidationReport:
    """Mengumpulkan semua pelanggaran invariant model; tidak melempar exception."""
    violations: List[Violation] = []
    names = model.label_names
    duplicates = sorted(name for name, count in Counter(names).items() if count > 1)
    if duplicates:
        violations.append(Violation(
            code="duplicate-label", kind="structure",
            message=f"Duplicate label names: {', '.join(duplicates)}"))
        return ValidationReport(model=model.name, violations=violations)

    if not model.has_label(model.vacuum):
        violations.append(Violation(
            code="missing-vacuum", kind="structure",
            message=f"Vacuum '{model.vacuum}' is not among the labels"))
        return ValidationReport(model=model.name, violations=violations)

    vacuum = model.label(model.vacuum)
    if vacuum.weight != 0:
        violations.append(Violation(
            code="vacuum-weight", kind="property",
            message=f"Vacuum '{vacuum.name}' must have weight 0, got {vacuum.weight}"))
    if vacuum.qdim is not None and not vacuum.qdim.is_identity():
        violations.append(Violation(
            code="vacuum-qdim", kind="property",
            message=f"Vacuum '{vacuum.name}' must have qdim 1, got phase {vacuum.qdim}"))

    module_names = [module.name for module in model.indecomposables]
    clashes = sorted(set(module_names) & set(names)) + sorted(
        name for name, count in Counter(module_names).items() if count > 1)
    if clashes:
        violations.append(Violation(
            code="duplicate-module", kind="structure",
            message=f"Indecomposable names clash or repeat: {', '.join(clashes)}"))

    for rule in model.fusion_rules:
        refs = [rule.a, rule.b] + list(rule.products)
        unknown = sorted({r for r in refs if not model.has_label(r)})
        if unknown:
            violations.append(Violation(
                code="unknown-label", kind="structure",
                message=f"Fusion rule {rule.a} x {rule.b} references unknown labels: {', '.join(unknown)}"))

    for current in model.currents:
        violations.extend(_validate_current(model, current))
    for module in model.indecomposables:
        violations.extend(_validate_indecomposable(model, module))

    if violations:
        logger.info(f"Model '{model.name}' has {len(violations)} violation(s).")
    return ValidationReport(model=model.name, violations=violations)


def detect_simple_currents(labels: Sequence[str],
                           fusion_rows: Mapping[Tuple[str, str], Sequence[str]]) -> List[str]:
    """Label a adalah simple current jika b -> a x b selalu satu simple dan bijektif."""
    currents = []
    for a in labels:
        products = []
        for b in labels:
            if (a, b) not in fusion_rows:
                raise InsufficientDataError(f"insufficient data: no fusion row for {a} x {b}")
            products.append(list(fusion_rows[(a, b)]))
        if all(len(row) == 1 for row in products) and len({row[0] for row in products}) == len(labels):
            currents.append(a)
    return currents


def detect_simple_currents_in_model(model: FusionModel) -> List[str]:
    rows = {(rule.a, rule.b): rule.products for rule in model.fusion_rules}
    return detect_simple_currents(model.label_names, rows)


def orbit(model: FusionModel, current: SimpleCurrent, start: str,
          bound: Optional[int] = None, strict: bool = False) -> Orbit:
    """Daftar [x, J x, J^2 x, ...] sampai pengulangan pertama (atau sampai batas untuk orde tak hingga)."""
    if not model.has_module(start):
        raise UnknownLabelError(f"Unknown module '{start}' in model '{model.name}'")

    if current.is_finite:
        elements = [start]
        node = model.image(current, start)
        while node != start:
            if node in elements:
                raise ModelInputError(f"Current '{current.name}' does not act as a permutation on '{start}'")
            if len(elements) >= current.order:
                raise ModelInputError(
                    f"action order mismatch: orbit of '{start}' under '{current.name}' "
                    f"is longer than the declared order {current.order}")
            elements.append(node)
            node = model.image(current, node)
        fixed_point = len(elements) < current.order
        if fixed_point:
            logger.warning(f"Orbit of '{start}' under '{current.name}' has a fixed point (length {len(elements)} < {current.order}).")
        return Orbit(current=current.name, start=start, elements=elements, fixed_point=fixed_point)

    limit = bound or current.truncation or config.ORBIT_TRUNCATION
    elements = [start]
    truncated = False
    fixed_point = False
    while True:
        try:
            node = model.image(current, elements[-1])
        except UnknownLabelError:
            break
        if node in elements:
            fixed_point = True
            break
        if len(elements) >= limit:
            truncated = True
            break
        elements.append(node)
    if truncated and strict:
        raise OrbitTruncationError(
            f"truncation exceeded: orbit of '{start}' under infinite-order '{current.name}' is longer than {limit}")
    return Orbit(current=current.name, start=start, elements=elements,
                 fixed_point=fixed_point, truncated=truncated)


def sector_labels(model: FusionModel, current: SimpleCurrent, bound: Optional[int] = None) -> Orbit:
    """Sektor J^0, J^1, ... sebagai orbit vacuum."""
    return orbit(model, current, model.vacuum, bound=bound)


def qdim_power_check(model: FusionModel, current: SimpleCurrent) -> CheckResult:
    """qdim(J^a) qdim(J^b) = qdim(J^{a+b}) pada sektor yang qdim-nya diketahui; termasuk qdim(J) qdim(J^-1) = 1."""
    sectors = sector_labels(model, current).elements
    known: Dict[int, Phase] = {}
    for k, label in enumerate(sectors):
        value = model.qdim(label)
        if k == 0 and value is None:
            value = Phase(0)
        if k == 1 and current.qdim is not None:
            value = current.qdim
        if value is not None:
            known[k] = value
    n = len(sectors)
    for a in known:
        for b in known:
            if not current.is_finite and a + b >= n:
                continue
            c = (a + b) % n if current.is_finite else a + b
            if c in known and known[a] * known[b] != known[c]:
                return CheckResult.failed(
                    f"qdim(J^{a}) qdim(J^{b}) = {known[a] * known[b]} but qdim(J^{c}) = {known[c]}", index=a)
    return CheckResult.passed(f"checked {len(known)} sector(s) with known qdim")


# --- Dokumen JSON model --------------------------------------------------------------------------

SCHEMA_PATH = Path(__file__).resolve().parent.parent / "resources" / "fusion_model.schema.json"


@lru_cache(maxsize=1)
def model_schema() -> dict:
    with open(SCHEMA_PATH, encoding="utf-8") as schema_file:
        return json.load(schema_file)


def load_model_document(data: dict) -> FusionModel:
    """Validasi struktural (jsonschema) lalu semantik (pydantic)."""
    try:
        jsonschema.validate(instance=data, schema=model_schema())
    except jsonschema.ValidationError as e:
        location = "/".join(str(part) for part in e.absolute_path) or "<root>"
        raise ModelInputError(f"Model document does not match the schema at {location}: {e.message}") from e
    try:
        return FusionModel.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        location = "/".join(str(part) for part in first.get("loc", ()))
        raise ModelInputError(f"Invalid model document at {location}: {first.get('msg')}") from e


def load_model_file(path: str) -> FusionModel:
    try:
        with open(path, encoding="utf-8") as model_file:
            data = json.load(model_file)
    except OSError as e:
        raise ModelInputError(f"Cannot read model file '{path}': {e}") from e
    except json.JSONDecodeError as e:
        raise ModelInputError(f"Model file '{path}' is not valid JSON: {e}") from e
    return load_model_document(data)


def dump_model(model: FusionModel) -> dict:
    return model.model_dump(mode="json")
