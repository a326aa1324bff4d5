# app/services/library_service.py
import itertools
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import ModelInputError, ParameterRangeError, UnknownLabelError
from ..schemas import LabModel
from .extension_service import ExtensionReport, ParityClass, build_extension
from .fusion_service import (
    TENSOR_SEPARATOR, FusionModel, FusionRule, IndecomposableModule, LoewyDiagram, LoewyNode,
    OpeData, SimpleCurrent, SimpleLabel
)
from .lifting_service import sweep_lifts
from .scalar_service import Phase, RationalField

logger = logging.getLogger(__name__)

PLUS, MINUS = "+", "-"


def _flip(sign: str) -> str:
    return MINUS if sign == PLUS else PLUS


def _sign_phase(sign: int) -> Phase:
    return Phase.from_sign(sign)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ParameterRangeError(message)


def _su2_fusion_range(hmax: int, a: int, b: int) -> range:
    """Kanal fusi a x b untuk label 1-based 1..hmax (SU(2) level hmax - 1)."""
    return range(abs(a - b) + 1, min(a + b - 1, 2 * hmax + 1 - a - b) + 1, 2)


# --- Building blocks -----------------------------------------------------------------------------

def triplet_weight(p: int, s: int, sign: str) -> Fraction:
    shift = p - s if sign == PLUS else 2 * p - s
    return Fraction(shift ** 2 - (p - 1) ** 2, 4 * p)


def triplet_loewy(p: int, s: int, sign: str) -> LoewyDiagram:
    """P_s^e: X_s^e -> 2 X_{p-s}^{-e} -> X_s^e."""
    head = f"X{s}{sign}"
    middle = f"X{p - s}{_flip(sign)}"
    return LoewyDiagram(
        nodes=[LoewyNode(id=0, label=head), LoewyNode(id=1, label=middle),
               LoewyNode(id=2, label=middle), LoewyNode(id=3, label=head)],
        edges=[(0, 1), (0, 2), (1, 3), (2, 3)],
    )


def triplet(p: int) -> FusionModel:
    _require(isinstance(p, int) and p >= 2, f"triplet algebra needs p >= 2, got {p}")
    qdim_current = _sign_phase(-((-1) ** p))
    labels = []
    action = {}
    for s in range(1, p + 1):
        for sign in (PLUS, MINUS):
            name = f"X{s}{sign}"
            qdim = None
            if s == 1:
                qdim = Phase(0) if sign == PLUS else qdim_current
            labels.append(SimpleLabel(name=name, weight=triplet_weight(p, s, sign), qdim=qdim))
            action[name] = f"X{s}{_flip(sign)}"

    current = SimpleCurrent(
        name="X1-", order=2, weight=triplet_weight(p, 1, MINUS), qdim=qdim_current, action=action,
        ope=OpeData(d=Fraction(3 * p - 2, 4), order=2 * p - 1),
    )
    indecomposables = [
        IndecomposableModule(
            name=f"P{s}{sign}", weight_coset=triplet_weight(p, s, sign),
            images={"X1-": f"P{s}{_flip(sign)}"}, loewy=triplet_loewy(p, s, sign),
        )
        for s in range(1, p) for sign in (PLUS, MINUS)
    ]
    return FusionModel(
        name=f"triplet({p})", labels=labels, vacuum="X1+", currents=[current],
        indecomposables=indecomposables, central_charge=1 - Fraction(6 * (p - 1) ** 2, p),
    )


def virasoro_weight(v: int, s: int) -> Fraction:
    """h(phi_{1,s}) untuk Vir(3, v)."""
    return Fraction((v - 3 * s) ** 2 - (v - 3) ** 2, 12 * v)


def virasoro_central_charge(u: int, v: int) -> Fraction:
    return 1 - Fraction(6 * (u - v) ** 2, u * v)


def virasoro_current_pair(u: int, v: int) -> FusionModel:
    """Vacuum dan J_{u,v} saja: bobot (u-2)(v-2)/4, qdim (-1)^{u+v+1}."""
    _require(u >= 3 and v >= 3, f"Virasoro parameters must exceed two, got ({u}, {v})")
    vacuum, name = "phi1,1", f"phi1,{v - 1}"
    weight = Fraction((u - 2) * (v - 2), 4)
    qdim = _sign_phase((-1) ** (u + v + 1))
    return FusionModel(
        name=f"vir_pair({u},{v})",
        labels=[SimpleLabel(name=vacuum, weight=0, qdim=Phase(0)),
                SimpleLabel(name=name, weight=weight, qdim=qdim)],
        vacuum=vacuum,
        currents=[SimpleCurrent(name=name, order=2, weight=weight, qdim=qdim,
                                action={vacuum: name, name: vacuum})],
        central_charge=virasoro_central_charge(u, v),
    )


def virasoro_minimal(u: int, v: int) -> FusionModel:
    _require(u >= 3 and v >= 3, f"Virasoro parameters must exceed two, got ({u}, {v})")
    _require(gcd(u, v) == 1, f"Virasoro parameters must be coprime, got ({u}, {v})")
    if u != 3:
        return virasoro_current_pair(u, v).model_copy(update={"name": f"vir({u},{v})"})

    current_name = f"phi1,{v - 1}"
    qdim = _sign_phase((-1) ** (u + v + 1))
    labels = [
        SimpleLabel(name=f"phi1,{s}", weight=virasoro_weight(v, s),
                    qdim=Phase(0) if s == 1 else (qdim if s == v - 1 else None))
        for s in range(1, v)
    ]
    current = SimpleCurrent(
        name=current_name, order=2, weight=virasoro_weight(v, v - 1), qdim=qdim,
        action={f"phi1,{s}": f"phi1,{v - s}" for s in range(1, v)},
    )
    rules = [
        FusionRule(a=f"phi1,{a}", b=f"phi1,{b}",
                   products=[f"phi1,{c}" for c in _su2_fusion_range(v - 1, a, b)])
        for a in range(1, v) for b in range(1, v)
    ]
    return FusionModel(
        name=f"vir(3,{v})", labels=labels, vacuum="phi1,1", currents=[current],
        central_charge=virasoro_central_charge(u, v), fusion_rules=rules,
    )


def affine_sl2_weight(k: int, t: int) -> Fraction:
    return Fraction(t * (t + 2), 4 * (k + 2))


def affine_sl2(k: int) -> FusionModel:
    _require(isinstance(k, int) and k >= 1, f"affine sl2 level must be >= 1, got {k}")
    # unitary: simple current berdimensi kuantum 1
    labels = [
        SimpleLabel(name=f"L{t}", weight=affine_sl2_weight(k, t),
                    qdim=Phase(0) if t in (0, k) else None)
        for t in range(k + 1)
    ]
    current = SimpleCurrent(
        name=f"L{k}", order=2, weight=Fraction(k, 4), qdim=Phase(0),
        action={f"L{t}": f"L{k - t}" for t in range(k + 1)},
    )
    rules = [
        FusionRule(a=f"L{a - 1}", b=f"L{b - 1}",
                   products=[f"L{c - 1}" for c in _su2_fusion_range(k + 1, a, b)])
        for a in range(1, k + 2) for b in range(1, k + 2)
    ]
    return FusionModel(
        name=f"sl2({k})", labels=labels, vacuum="L0", currents=[current],
        central_charge=Fraction(3 * k, k + 2), fusion_rules=rules,
    )


def lattice_weight(p: int, j: int) -> Fraction:
    shortest = min(j, 2 * p - j)
    return Fraction(shortest ** 2, 4 * p)


def lattice_rank1(p: int) -> FusionModel:
    """
    V_{sqrt(2p) Z}: 2p modul v_j, semuanya simple current, hukum grup Z_{2p}.
    Bobot v_j memakai norma minimal min(j, 2p-j)^2 / 4p, sama dengan j^2 / 4p modulo Z.
    """
    _require(isinstance(p, int) and p >= 1, f"lattice parameter must be >= 1, got {p}")
    n = 2 * p
    labels = [SimpleLabel(name=f"v{j}", weight=lattice_weight(p, j), qdim=Phase(0)) for j in range(n)]

    def shift_current(step: int) -> SimpleCurrent:
        return SimpleCurrent(
            name=f"v{step}", order=n // gcd(n, step), weight=lattice_weight(p, step), qdim=Phase(0),
            action={f"v{j}": f"v{(j + step) % n}" for j in range(n)},
        )

    currents = [shift_current(p)]
    if p > 1:
        currents.append(shift_current(1))
    rules = [FusionRule(a=f"v{a}", b=f"v{b}", products=[f"v{(a + b) % n}"])
             for a in range(n) for b in range(n)]
    return FusionModel(
        name=f"lattice({p})", labels=labels, vacuum="v0", currents=currents,
        central_charge=Fraction(1), fusion_rules=rules,
    )


def trivial_model() -> FusionModel:
    return FusionModel(
        name="trivial",
        labels=[SimpleLabel(name="V", weight=0, qdim=Phase(0))],
        vacuum="V",
        currents=[SimpleCurrent(name="V", order=1, weight=0, qdim=Phase(0), action={"V": "V"})],
        central_charge=Fraction(0),
        fusion_rules=[FusionRule(a="V", b="V", products=["V"])],
    )


def affine_sl2_minus_half() -> FusionModel:
    """Fixture dua label untuk L_{-1/2}(sl2): vacuum dan sektor beta-gamma berbobot 1/2."""
    qdim = _sign_phase(-1)
    return FusionModel(
        name="sl2(-1/2)",
        labels=[SimpleLabel(name="BG0", weight=0, qdim=Phase(0)),
                SimpleLabel(name="BG1", weight=Fraction(1, 2), qdim=qdim)],
        vacuum="BG0",
        currents=[SimpleCurrent(name="BG1", order=2, weight=Fraction(1, 2), qdim=qdim,
                                action={"BG0": "BG1", "BG1": "BG0"})],
        central_charge=Fraction(-1),
    )


# --- Tensor product ------------------------------------------------------------------------------

def _join(*names: str) -> str:
    return TENSOR_SEPARATOR.join(names)


def _product_qdim(a: Optional[Phase], b: Optional[Phase]) -> Optional[Phase]:
    if a is None or b is None:
        return None
    return a * b


def _as_diagram(model: FusionModel, name: str) -> Optional[LoewyDiagram]:
    if model.is_simple(name):
        return LoewyDiagram(nodes=[LoewyNode(id=0, label=name)])
    return model.indecomposable(name).loewy


def _product_loewy(A: FusionModel, first: str, B: FusionModel, second: str) -> Optional[LoewyDiagram]:
    """Diagram Loewy hasil kali; faktor simple diperlakukan sebagai diagram satu node."""
    left, right = _as_diagram(A, first), _as_diagram(B, second)
    if left is None or right is None:
        return None
    width = len(right.nodes)
    position = {node.id: i for i, node in enumerate(right.nodes)}
    left_position = {node.id: i for i, node in enumerate(left.nodes)}
    nodes = [
        LoewyNode(id=i * width + j, label=_join(a.label, b.label))
        for i, a in enumerate(left.nodes) for j, b in enumerate(right.nodes)
    ]
    edges = []
    for source, target in left.edges:
        for j in range(width):
            edges.append((left_position[source] * width + j, left_position[target] * width + j))
    for source, target in right.edges:
        for i in range(len(left.nodes)):
            edges.append((i * width + position[source], i * width + position[target]))
    return LoewyDiagram(nodes=nodes, edges=edges)


def tensor_model(A: FusionModel, B: FusionModel) -> FusionModel:
    """Produk tensor: bobot dijumlahkan, qdim dikalikan, current berpasangan bertindak per komponen."""
    labels = [
        SimpleLabel(name=_join(a.name, b.name), weight=a.weight + b.weight,
                    qdim=_product_qdim(a.qdim, b.qdim))
        for a in A.labels for b in B.labels
    ]

    currents = []
    for ja, jb in itertools.product(A.currents, B.currents):
        order = None if ja.order is None or jb.order is None else lcm(ja.order, jb.order)
        action = {_join(x, y): _join(ja.action[x], jb.action[y])
                  for x in ja.action for y in jb.action}
        braiding = None
        if ja.braiding is not None and jb.braiding is not None:
            braiding = ja.braiding * jb.braiding
        truncation = min((t for t in (ja.truncation, jb.truncation) if t is not None), default=None)
        currents.append(SimpleCurrent(
            name=_join(ja.name, jb.name), order=order, weight=ja.weight + jb.weight,
            qdim=_product_qdim(ja.qdim, jb.qdim), action=action, braiding=braiding,
            truncation=truncation,
        ))

    def product_module(first: str, second: str) -> IndecomposableModule:
        a_indec = None if A.is_simple(first) else A.indecomposable(first)
        b_indec = None if B.is_simple(second) else B.indecomposable(second)
        images = {}
        for ja, jb in itertools.product(A.currents, B.currents):
            try:
                images[_join(ja.name, jb.name)] = _join(A.image(ja, first), B.image(jb, second))
            except UnknownLabelError:
                continue
        return IndecomposableModule(
            name=_join(first, second),
            weight_coset=A.module_weight(first) + B.module_weight(second),
            images=images,
            loewy=_product_loewy(A, first, B, second),
            attested_bounded_jordan=(a_indec is None or a_indec.attested_bounded_jordan)
            and (b_indec is None or b_indec.attested_bounded_jordan),
        )

    indecomposables = [product_module(p.name, b.name) for p in A.indecomposables for b in B.labels]
    indecomposables += [product_module(a.name, p.name) for a in A.labels for p in B.indecomposables]
    indecomposables += [product_module(p.name, q.name) for p in A.indecomposables for q in B.indecomposables]

    rules = []
    if A.fusion_rules and B.fusion_rules:
        for ra, rb in itertools.product(A.fusion_rules, B.fusion_rules):
            rules.append(FusionRule(
                a=_join(ra.a, rb.a), b=_join(ra.b, rb.b),
                products=[_join(x, y) for x in ra.products for y in rb.products],
            ))

    central_charge = None
    if A.central_charge is not None and B.central_charge is not None:
        central_charge = A.central_charge + B.central_charge

    return FusionModel(
        name=f"{A.name} x {B.name}", labels=labels, vacuum=_join(A.vacuum, B.vacuum),
        currents=currents, indecomposables=indecomposables, central_charge=central_charge,
        fusion_rules=rules, factors=(A.factors or [A]) + (B.factors or [B]),
    )


# --- Families ------------------------------------------------------------------------------------

class PrintedExpectations(LabModel):
    parity: Optional[ParityClass] = None
    commutative: Optional[bool] = None
    current_weight: Optional[RationalField] = None
    simple_lifts: Optional[List[str]] = None
    indecomposable_lifts: Optional[List[str]] = None


class FamilySetup(LabModel):
    family: str
    parameters: Dict[str, int] = {}
    model: FusionModel
    current: SimpleCurrent
    printed: Optional[PrintedExpectations] = None


class Divergence(LabModel):
    module: str
    kind: str  # "simple" atau "indecomposable"
    derived: bool
    printed: bool


class FamilyComparison(LabModel):
    family: str
    parameters: Dict[str, int] = {}
    report: ExtensionReport
    expected_parity: Optional[ParityClass] = None
    parity_matches: Optional[bool] = None
    derived_simple_lifts: List[str]
    derived_indecomposable_lifts: List[str]
    printed_simple_lifts: Optional[List[str]] = None
    printed_indecomposable_lifts: Optional[List[str]] = None
    glued_lifts: List[str] = []
    divergences: List[Divergence] = []
    vacuum_lifts: bool


def _printed_A(p: int) -> Tuple[List[str], List[str]]:
    # s - t tidak kongruen p (mod 2); sektor minus memakai L(t Lambda_0 + (p-2-t) Lambda_1)
    simples, indecs = [], []
    for s in range(1, p + 1):
        for t in range(0, p - 1):
            if (s - t - p) % 2 != 0:
                simples += [_join(f"X{s}+", f"L{t}"), _join(f"X{s}-", f"L{p - 2 - t}")]
                if s <= p - 1:
                    indecs += [_join(f"P{s}+", f"L{t}"), _join(f"P{s}-", f"L{p - 2 - t}")]
    return simples, indecs


def _printed_B(p: int) -> Tuple[List[str], List[str]]:
    simples, indecs = [], []
    for s in range(1, p + 1):
        for t in range(1, p):
            if (s - t - p) % 2 == 0:
                simples += [_join(f"X{s}+", f"phi1,{t}"), _join(f"X{s}-", f"phi1,{p - t}")]
                if s <= p - 1:
                    indecs += [_join(f"P{s}+", f"phi1,{t}"), _join(f"P{s}-", f"phi1,{p - t}")]
    return simples, indecs


def _printed_C(p: int) -> Tuple[List[str], List[str]]:
    simples, indecs = [], []
    for s in range(1, p + 1):
        for t in range(1, p + 1):
            pairs = []
            if (s + t - p) % 2 == 0:
                pairs += [(PLUS, PLUS), (MINUS, MINUS)]
            if (s - t) % 2 == 0:
                pairs += [(PLUS, MINUS), (MINUS, PLUS)]
            for e, d in pairs:
                simples.append(_join(f"X{s}{e}", f"X{t}{d}"))
                if s <= p - 1:
                    indecs.append(_join(f"P{s}{e}", f"X{t}{d}"))
                if t <= p - 1:
                    indecs.append(_join(f"X{s}{e}", f"P{t}{d}"))
                if s <= p - 1 and t <= p - 1:
                    indecs.append(_join(f"P{s}{e}", f"P{t}{d}"))
    return simples, indecs


def glued_module(p: int, s: int, t: int, first: str, second: str) -> IndecomposableModule:
    """
    Modul W(p) x W(p) yang bukan produk tensor dua indecomposable: 8 node, 8 panah tensorand kiri
    dan 8 panah tensorand kanan.
    """
    _require(1 <= s <= p - 1 and 1 <= t <= p - 1, f"glued module needs 1 <= s, t <= p - 1, got ({s}, {t})")
    A, B = f"X{s}{first}", f"X{p - s}{_flip(first)}"
    C, D = f"X{t}{second}", f"X{p - t}{_flip(second)}"
    labels = [_join(B, D), _join(A, C), _join(B, D), _join(A, C),
              _join(A, D), _join(A, D), _join(B, C), _join(B, C)]
    left_edges = [(0, 4), (4, 2), (0, 5), (5, 2), (1, 6), (6, 3), (1, 7), (7, 3)]
    right_edges = [(0, 7), (6, 2), (1, 5), (5, 3), (0, 6), (1, 4), (4, 3), (7, 2)]
    return IndecomposableModule(
        name=f"Q{s},{t}{first}{second}",
        weight_coset=triplet_weight(p, s, first) + triplet_weight(p, t, second),
        images={"X1-:X1-": f"Q{s},{t}{_flip(first)}{_flip(second)}"},
        loewy=LoewyDiagram(nodes=[LoewyNode(id=i, label=label) for i, label in enumerate(labels)],
                           edges=left_edges + right_edges),
    )


def _with_indecomposables(model: FusionModel, extra: List[IndecomposableModule]) -> FusionModel:
    return FusionModel(
        name=model.name, labels=model.labels, vacuum=model.vacuum, currents=model.currents,
        indecomposables=list(model.indecomposables) + extra, central_charge=model.central_charge,
        fusion_rules=model.fusion_rules, factors=model.factors,
    )


def family_A(p: int) -> FamilySetup:
    _require(isinstance(p, int) and p >= 3, f"family A needs p >= 3, got {p}")
    model = tensor_model(triplet(p), affine_sl2(p - 2)).model_copy(update={"name": f"family_A({p})"})
    simples, indecs = _printed_A(p)
    parity = ParityClass.IntegerGradedVOA if p % 2 else ParityClass.IntegerGradedSVOA_WrongStatistics
    return FamilySetup(
        family="A", parameters={"p": p}, model=model, current=model.current(_join("X1-", f"L{p - 2}")),
        printed=PrintedExpectations(parity=parity, current_weight=Fraction(p - 1),
                                    simple_lifts=simples, indecomposable_lifts=indecs),
    )


def family_B(p: int) -> FamilySetup:
    _require(isinstance(p, int) and p >= 4 and p % 3 != 0, f"family B needs p >= 4 coprime to 3, got {p}")
    model = tensor_model(triplet(p), virasoro_minimal(3, p)).model_copy(update={"name": f"family_B({p})"})
    simples, indecs = _printed_B(p)
    return FamilySetup(
        family="B", parameters={"p": p}, model=model, current=model.current(_join("X1-", f"phi1,{p - 1}")),
        printed=PrintedExpectations(parity=ParityClass.IntegerGradedSVOA_WrongStatistics,
                                    current_weight=Fraction(p - 1),
                                    simple_lifts=simples, indecomposable_lifts=indecs),
    )


def family_C(p: int) -> FamilySetup:
    _require(isinstance(p, int) and p >= 2, f"family C needs p >= 2, got {p}")
    glued = [glued_module(p, s, t, e, d)
             for s in range(1, p) for t in range(1, p) for e in (PLUS, MINUS) for d in (PLUS, MINUS)]
    model = _with_indecomposables(tensor_model(triplet(p), triplet(p)), glued)
    model = model.model_copy(update={"name": f"family_C({p})"})
    simples, indecs = _printed_C(p)
    parity = ParityClass.IntegerGradedVOA if p % 2 == 0 else ParityClass.VOSA
    return FamilySetup(
        family="C", parameters={"p": p}, model=model, current=model.current("X1-:X1-"),
        printed=PrintedExpectations(parity=parity, current_weight=Fraction(3 * p - 2, 2),
                                    simple_lifts=simples, indecomposable_lifts=indecs),
    )


def osp_level1() -> FamilySetup:
    """L_1(sl2) x Vir(3,5) dengan current L(Lambda_1) x phi_{1,4}."""
    model = tensor_model(affine_sl2(1), virasoro_minimal(3, 5)).model_copy(update={"name": "osp(1)"})
    printed = PrintedExpectations(
        parity=ParityClass.IntegerGradedSVOA_WrongStatistics, current_weight=Fraction(1),
        simple_lifts=["L0:phi1,1", "L0:phi1,3", "L1:phi1,2", "L1:phi1,4"],
    )
    return FamilySetup(family="osp", model=model, current=model.current("L1:phi1,4"), printed=printed)


def n4_c_minus3() -> FamilySetup:
    model = tensor_model(triplet(2), affine_sl2_minus_half()).model_copy(update={"name": "n4(-3)"})
    printed = PrintedExpectations(parity=ParityClass.VOSA, current_weight=Fraction(3, 2))
    return FamilySetup(family="n4", model=model, current=model.current("X1-:BG1"), printed=printed)


def _virasoro_for(v: int) -> FusionModel:
    if gcd(3, v) == 1:
        return virasoro_minimal(3, v)
    logger.info(f"Vir(3,{v}) is not a minimal model; using the current pair only.")
    return virasoro_current_pair(3, v)


def walgebra_candidate(r: int) -> FamilySetup:
    """Vir(3, 2+r) x V_{sqrt(2r) Z}: dua medan berbobot r/2, ekstensi selalu komutatif."""
    _require(isinstance(r, int) and r >= 2, f"W-algebra candidate needs r >= 2, got {r}")
    vir = _virasoro_for(2 + r)
    model = tensor_model(vir, lattice_rank1(r)).model_copy(update={"name": f"walgebra({r})"})
    printed = PrintedExpectations(commutative=True, current_weight=Fraction(r, 2))
    return FamilySetup(family="walgebra", parameters={"r": r}, model=model,
                       current=model.current(_join(f"phi1,{r + 1}", f"v{r}")), printed=printed)


def wsuper_candidate(r: int) -> FamilySetup:
    """Vir(3, 2+r) x V_{sqrt(2(r+2)) Z}: current berbobot (r+1)/2 dengan c = -1."""
    _require(isinstance(r, int) and r >= 2, f"super W-algebra candidate needs r >= 2, got {r}")
    vir = _virasoro_for(2 + r)
    model = tensor_model(vir, lattice_rank1(r + 2)).model_copy(update={"name": f"wsuper({r})"})
    parity = ParityClass.IntegerGradedSVOA_WrongStatistics if r % 2 else ParityClass.VOSA
    printed = PrintedExpectations(parity=parity, commutative=False, current_weight=Fraction(r + 1, 2))
    return FamilySetup(family="wsuper", parameters={"r": r}, model=model,
                       current=model.current(_join(f"phi1,{r + 1}", f"v{r + 2}")), printed=printed)


def compare_family(setup: FamilySetup) -> FamilyComparison:
    """Bandingkan himpunan lift hasil perhitungan fase dengan daftar tercetak."""
    model, current = setup.model, setup.current
    report = build_extension(model, current)
    decisions = sweep_lifts(model, current)
    lifted = {d.module for d in decisions if d.lifts}

    def is_glued(name: str) -> bool:
        return name.startswith("Q")

    derived_simples = [name for name in model.label_names if name in lifted]
    derived_indecs = [m.name for m in model.indecomposables if m.name in lifted and not is_glued(m.name)]
    glued = [m.name for m in model.indecomposables if m.name in lifted and is_glued(m.name)]

    printed = setup.printed or PrintedExpectations()
    divergences: List[Divergence] = []
    for kind, universe, derived, expected in (
        ("simple", model.label_names, derived_simples, printed.simple_lifts),
        ("indecomposable", [m.name for m in model.indecomposables if not is_glued(m.name)],
         derived_indecs, printed.indecomposable_lifts),
    ):
        if expected is None:
            continue
        derived_set, expected_set = set(derived), set(expected)
        unknown = expected_set - set(universe)
        if unknown:
            raise ModelInputError(f"Printed list names unknown modules: {', '.join(sorted(unknown))}")
        for name in universe:
            if (name in derived_set) != (name in expected_set):
                divergences.append(Divergence(module=name, kind=kind, derived=name in derived_set,
                                              printed=name in expected_set))

    parity_matches = None
    if printed.parity is not None:
        parity_matches = report.parity == printed.parity
    elif printed.commutative is not None and report.determined:
        parity_matches = report.parity.is_commutative == printed.commutative

    if divergences:
        logger.warning(f"Family {setup.family} {setup.parameters}: {len(divergences)} divergence(s) from the printed lists.")
    return FamilyComparison(
        family=setup.family, parameters=setup.parameters, report=report, expected_parity=printed.parity,
        parity_matches=parity_matches, derived_simple_lifts=derived_simples,
        derived_indecomposable_lifts=derived_indecs, printed_simple_lifts=printed.simple_lifts,
        printed_indecomposable_lifts=printed.indecomposable_lifts, glued_lifts=glued,
        divergences=divergences, vacuum_lifts=model.vacuum in lifted,
    )


# --- Registry ------------------------------------------------------------------------------------

# nama -> (konstruktor, parameter beserta default)
MODEL_BUILDERS: Dict[str, Tuple[Callable[..., FusionModel], Dict[str, int]]] = {
    "triplet": (triplet, {"p": 2}),
    "virasoro": (virasoro_minimal, {"u": 3, "v": 5}),
    "affine_sl2": (affine_sl2, {"k": 1}),
    "lattice": (lattice_rank1, {"p": 1}),
    "sl2_minus_half": (affine_sl2_minus_half, {}),
    "trivial": (trivial_model, {}),
}

FAMILY_BUILDERS: Dict[str, Tuple[Callable[..., FamilySetup], Dict[str, int]]] = {
    "A": (family_A, {"p": 3}),
    "B": (family_B, {"p": 4}),
    "C": (family_C, {"p": 2}),
    "osp": (osp_level1, {}),
    "n4": (n4_c_minus3, {}),
    "walgebra": (walgebra_candidate, {"r": 2}),
    "wsuper": (wsuper_candidate, {"r": 2}),
}

# family juga tersedia sebagai model bernama family_X
FAMILY_MODEL_NAMES = {
    "family_A": "A", "family_B": "B", "family_C": "C",
    "osp": "osp", "n4": "n4", "walgebra": "walgebra", "wsuper": "wsuper",
}


def builtin_names() -> List[str]:
    return list(MODEL_BUILDERS) + list(FAMILY_MODEL_NAMES)


def _call(builder: Callable, defaults: Dict[str, int], params: Dict[str, Optional[int]]):
    arguments = {key: params.get(key) if params.get(key) is not None else default
                 for key, default in defaults.items()}
    return builder(**arguments)


def build_family(name: str, **params: Optional[int]) -> FamilySetup:
    if name not in FAMILY_BUILDERS:
        raise UnknownLabelError(f"Unknown family '{name}' (available: {', '.join(FAMILY_BUILDERS)})")
    builder, defaults = FAMILY_BUILDERS[name]
    return _call(builder, defaults, params)


def build_model(name: str, **params: Optional[int]) -> FusionModel:
    if name in MODEL_BUILDERS:
        builder, defaults = MODEL_BUILDERS[name]
        return _call(builder, defaults, params)
    if name in FAMILY_MODEL_NAMES:
        return build_family(FAMILY_MODEL_NAMES[name], **params).model
    raise UnknownLabelError(f"Unknown model '{name}' (available: {', '.join(builtin_names())})")
