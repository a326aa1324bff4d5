# app/services/scalar_service.py
import re
import logging
from fractions import Fraction
from typing import Annotated, Union

from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema

from ..errors import ModelInputError

logger = logging.getLogger(__name__)

# Rational di seluruh artifact adalah Fraction (selalu tereduksi, penyebut > 0)
Rational = Fraction

RATIONAL_PATTERN = re.compile(r'^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$')


def parse_rational(value: Union[str, int, Fraction]) -> Fraction:
    """Parsing "num/den", "n", int atau Fraction. Float ditolak (tidak ada floating point)."""
    if isinstance(value, bool):
        raise ModelInputError(f"Boolean is not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = RATIONAL_PATTERN.match(value)
        if not match:
            raise ModelInputError(f"Not an exact rational literal: '{value}'")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise ModelInputError(f"Zero denominator in '{value}'")
        return Fraction(numerator, denominator)
    raise ModelInputError(f"Unsupported rational input of type {type(value).__name__}: {value!r}")


def format_rational(q: Fraction) -> str:
    """Format kanonik: "n" untuk bilangan bulat, "num/den" selainnya."""
    return str(Fraction(q))


class Phase:
    """
    Bilangan kompleks satuan e^{2 pi i q}, disimpan sebagai q mod 1 di [0, 1).
    Kesamaan bersifat struktural, jadi tes "x in Z" menjadi tes nol yang eksak.
    """
    __slots__ = ("_q",)

    def __init__(self, q: Union[str, int, Fraction] = 0):
        self._q = parse_rational(q) % 1

    @classmethod
    def from_sign(cls, sign: int) -> "Phase":
        if sign == 1:
            return cls(0)
        if sign == -1:
            return cls(Fraction(1, 2))
        raise ModelInputError(f"Sign must be +1 or -1, got {sign}")

    @property
    def q(self) -> Fraction:
        return self._q

    def __mul__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self._q + other._q)

    def __truediv__(self, other: "Phase") -> "Phase":
        if not isinstance(other, Phase):
            return NotImplemented
        return Phase(self._q - other._q)

    def __pow__(self, n: int) -> "Phase":
        return Phase(self._q * n)

    def inverse(self) -> "Phase":
        return Phase(-self._q)

    def order(self) -> int:
        return self._q.denominator

    def is_identity(self) -> bool:
        return self._q == 0

    def is_sign(self) -> bool:
        return self._q in (0, Fraction(1, 2))

    def as_sign(self) -> int:
        if self._q == 0:
            return 1
        if self._q == Fraction(1, 2):
            return -1
        raise ModelInputError(f"Phase {self} is not a sign")

    def __eq__(self, other) -> bool:
        return isinstance(other, Phase) and self._q == other._q

    def __hash__(self) -> int:
        return hash(("Phase", self._q))

    def __lt__(self, other: "Phase") -> bool:
        return self._q < other._q

    def __repr__(self) -> str:
        return f"Phase({format_rational(self._q)})"

    def __str__(self) -> str:
        return format_rational(self._q)


def parse_phase(value) -> Phase:
    if isinstance(value, Phase):
        return value
    return Phase(parse_rational(value))


def format_phase(value: Phase) -> str:
    return format_rational(value.q)


# Tipe anotasi untuk field pydantic; serialisasi sebagai string "num/den"
RationalField = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

PhaseField = Annotated[
    Phase,
    BeforeValidator(parse_phase),
    PlainSerializer(format_phase, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


def phase_from_weight(h: Fraction) -> Phase:
    """Twist theta = e^{2 pi i h} untuk bobot konformal h."""
    return Phase(h)


def phase_pow(x: Phase, n: int) -> Phase:
    return x ** n
