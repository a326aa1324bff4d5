# app/services/extension_service.py
import logging
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import List, Literal, Optional, Sequence, Tuple, Union

from ..errors import ModelInputError, PropertyViolation, RibbonDataRequiredError
from ..schemas import CheckResult, LabModel, Violation
from .fusion_service import FusionModel, SimpleCurrent, sector_labels
from .scalar_service import Phase, PhaseField, RationalField, phase_from_weight

logger = logging.getLogger(__name__)

UNDETERMINED = "undetermined"

# Route penentuan c_{J,J}, urut menurut prioritas
ROUTE_EXPLICIT = "explicit"
ROUTE_SPIN_STATISTICS = "spin-statistics"
ROUTE_OPE_ORDER = "ope-order"


class ParityClass(str, Enum):
    IntegerGradedVOA = "IntegerGradedVOA"
    HalfIntegerGradedVOA_WrongStatistics = "HalfIntegerGradedVOA_WrongStatistics"
    VOSA = "VOSA"
    IntegerGradedSVOA_WrongStatistics = "IntegerGradedSVOA_WrongStatistics"

    @property
    def theta_sign(self) -> int:
        if self in (ParityClass.IntegerGradedVOA, ParityClass.IntegerGradedSVOA_WrongStatistics):
            return 1
        return -1

    @property
    def c_sign(self) -> int:
        return -1 if self.is_super else 1

    @property
    def is_super(self) -> bool:
        return self in (ParityClass.VOSA, ParityClass.IntegerGradedSVOA_WrongStatistics)

    @property
    def is_commutative(self) -> bool:
        return not self.is_super

    @property
    def wrong_statistics(self) -> bool:
        return self in (ParityClass.HalfIntegerGradedVOA_WrongStatistics,
                        ParityClass.IntegerGradedSVOA_WrongStatistics)


_PARITY_TABLE = {
    (1, 1): ParityClass.IntegerGradedVOA,
    (-1, 1): ParityClass.HalfIntegerGradedVOA_WrongStatistics,
    (-1, -1): ParityClass.VOSA,
    (1, -1): ParityClass.IntegerGradedSVOA_WrongStatistics,
}


class ExtensionReport(LabModel):
    current: str
    grading_group: str
    sectors: List[str]
    sector_weights: List[RationalField]
    sector_parities: List[Literal["even", "odd"]]
    even_part: List[str]
    theta_sign: Optional[int] = None
    braiding_c: Optional[PhaseField] = None
    qdim_J: Optional[PhaseField] = None
    parity: Union[ParityClass, Literal["undetermined"]] = UNDETERMINED
    route: Optional[str] = None
    truncated: bool = False
    diagnostics: List[str] = []
    violations: List[Violation] = []

    @property
    def determined(self) -> bool:
        return isinstance(self.parity, ParityClass)


def twist_sign_pattern(weights: Sequence[Fraction], cyclic: bool = True) -> CheckResult:
    """
    Cek hipotesis grading: setiap h_{J^k} di (1/2)Z dan tanda twist J^{k+2} sama dengan J^k.
    Untuk orde hingga indeks dibaca mod N; cyclic=False untuk prefix orbit orde tak hingga.
    """
    if not weights:
        raise ModelInputError("Empty weight list")
    if weights[0] != 0:
        return CheckResult.failed(f"h_J^0 must be 0, got {weights[0]}", index=0)
    for k, h in enumerate(weights):
        if (2 * h).denominator != 1:
            return CheckResult.failed(f"theta of J^{k} is not +-1 (h = {h})", index=k)

    signs = [phase_from_weight(h).as_sign() for h in weights]
    n = len(signs)
    notes = []
    if cyclic and n % 2 == 1 and n > 1:
        notes.append(f"odd order {n}: wrap-around forces every sector to share the vacuum twist sign")
    limit = n if cyclic else n - 2
    for k in range(max(limit, 0)):
        if signs[(k + 2) % n] != signs[k]:
            return CheckResult.failed(
                f"twist signs of J^{k} and J^{(k + 2) % n} differ", index=k, notes=notes)
    return CheckResult.passed(notes=notes)


def braiding_from_spin_statistics(h_J: Fraction, qdim_J: Optional[Phase]) -> Phase:
    """c_{J,J} = e^{2 pi i h_J} / qdim(J)."""
    if qdim_J is None:
        raise RibbonDataRequiredError("ribbon data required: qdim of the current is not declared")
    return phase_from_weight(h_J) / qdim_J


def qdim_from_ope_order(d: Fraction, n_ope: int) -> Tuple[Phase, Phase]:
    """(qdim, c) = ((-1)^N e^{-4 pi i d}, (-1)^N e^{-2 pi i d}) dari bobot terendah d dan orde OPE N."""
    sign = Phase.from_sign(-1 if n_ope % 2 else 1)
    qdim = sign * Phase(-2 * Fraction(d))
    c = sign * Phase(-Fraction(d))
    return qdim, c


def balancing_check(h_J: Fraction, c: Phase) -> CheckResult:
    value = c ** 2 * Phase(2 * Fraction(h_J))
    if value.is_identity():
        return CheckResult.passed()
    return CheckResult.failed(f"c^2 e^(4 pi i h) = e^(2 pi i {value}) != 1 for h = {h_J}, c = {c}")


def spin_statistics_check(h_J: Fraction, c: Phase, qdim_J: Phase) -> CheckResult:
    value = c * qdim_J
    if value == phase_from_weight(h_J):
        return CheckResult.passed()
    return CheckResult.failed(f"c qdim = e^(2 pi i {value}) but theta = e^(2 pi i {phase_from_weight(h_J)})")


def classify_extension(theta_sign: int, c_sign: int) -> ParityClass:
    try:
        return _PARITY_TABLE[(theta_sign, c_sign)]
    except KeyError:
        raise ModelInputError(f"Signs must be +1 or -1, got theta={theta_sign}, c={c_sign}") from None


def _even_indices(n: int, finite: bool) -> List[int]:
    # 2G pada Z_N: kelipatan gcd(2, N)
    step = gcd(2, n) if finite else 2
    return [k for k in range(n) if k % step == 0]


def _resolve_braiding(current: SimpleCurrent,
                      diagnostics: List[str],
                      violations: List[Violation]) -> Tuple[Optional[Phase], Optional[Phase], Optional[str]]:
    qdim = current.qdim
    if current.ope is not None:
        ope_qdim, ope_c = qdim_from_ope_order(current.ope.d, current.ope.order)
        if qdim is not None and qdim != ope_qdim:
            violations.append(Violation(
                code="ope-qdim", kind="property",
                message=f"declared qdim {qdim} differs from OPE-order qdim {ope_qdim}"))
    else:
        ope_qdim, ope_c = None, None

    if current.braiding is not None:
        diagnostics.append(f"c_JJ = {current.braiding} taken from explicit braiding data")
        return current.braiding, qdim or ope_qdim, ROUTE_EXPLICIT
    if qdim is not None:
        c = braiding_from_spin_statistics(current.weight, qdim)
        diagnostics.append(f"c_JJ = {c} from spin-statistics with qdim {qdim}")
        return c, qdim, ROUTE_SPIN_STATISTICS
    if ope_c is not None:
        diagnostics.append(
            f"c_JJ = {ope_c} from OPE order {current.ope.order} and lowest weight {current.ope.d}")
        return ope_c, ope_qdim, ROUTE_OPE_ORDER
    diagnostics.append("no braiding, qdim or OPE data: c_JJ cannot be determined")
    return None, None, None


def build_extension(model: FusionModel, current: Optional[Union[str, SimpleCurrent]] = None,
                    bound: Optional[int] = None) -> ExtensionReport:
    """Laporan lengkap untuk V_e = sum_j J^j."""
    if not isinstance(current, SimpleCurrent):
        current = model.current(current)

    diagnostics: List[str] = []
    violations: List[Violation] = []
    orbit = sector_labels(model, current, bound=bound)
    sectors = orbit.elements
    weights = [model.weight(label) for label in sectors]
    finite = current.is_finite

    if finite:
        grading_group = f"Z_{current.order}"
    else:
        grading_group = "Z"
        diagnostics.append(f"infinite order: sector list truncated to {len(sectors)} term(s)")
    if orbit.fixed_point:
        diagnostics.append("vacuum orbit is shorter than the current order")

    even = set(_even_indices(len(sectors), finite))
    parities = ["even" if k in even else "odd" for k in range(len(sectors))]
    report_args = dict(
        current=current.name,
        grading_group=grading_group,
        sectors=sectors,
        sector_weights=weights,
        sector_parities=parities,
        even_part=[label for k, label in enumerate(sectors) if k in even],
        truncated=orbit.truncated,
    )

    pattern = twist_sign_pattern(weights, cyclic=finite)
    diagnostics.extend(pattern.notes)
    if pattern.notes:
        logger.warning(f"Current '{current.name}': {'; '.join(pattern.notes)}")
    if not pattern.ok:
        violations.append(Violation(code="twist-sign-pattern", kind="property", message=pattern.message))
        logger.info(f"Extension by '{current.name}' fails the twist sign pattern: {pattern.message}")
        return ExtensionReport(**report_args, diagnostics=diagnostics, violations=violations)

    theta = phase_from_weight(current.weight)
    theta_sign = theta.as_sign()
    c, qdim, route = _resolve_braiding(current, diagnostics, violations)
    if c is None:
        return ExtensionReport(**report_args, theta_sign=theta_sign, diagnostics=diagnostics,
                               violations=violations)

    balance = balancing_check(current.weight, c)
    if not balance.ok:
        violations.append(Violation(code="balancing", kind="property", message=balance.message))
    if route == ROUTE_EXPLICIT and qdim is not None:
        spin = spin_statistics_check(current.weight, c, qdim)
        if not spin.ok:
            violations.append(Violation(code="spin-statistics", kind="property", message=spin.message))

    parity: Union[ParityClass, str] = UNDETERMINED
    if c.is_sign():
        parity = classify_extension(theta_sign, c.as_sign())
    else:
        diagnostics.append(f"c_JJ = {c} is not a sign; the parity classes only cover c = +-1")
        violations.append(Violation(
            code="braiding-not-sign", kind="property", message=f"c_JJ = {c} is not +-1"))

    logger.info(f"Extension by '{current.name}' in '{model.name}': parity {getattr(parity, 'value', parity)} via {route}.")
    return ExtensionReport(**report_args, theta_sign=theta_sign, braiding_c=c, qdim_J=qdim,
                           parity=parity, route=route, diagnostics=diagnostics, violations=violations)


def require_consistent(report: ExtensionReport) -> ExtensionReport:
    if report.violations:
        codes = ", ".join(v.code for v in report.violations)
        raise PropertyViolation(f"extension by '{report.current}' violates: {codes}")
    return report
