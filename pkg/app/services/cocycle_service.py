# app/services/cocycle_service.py
import itertools
import json
import logging
import re
from collections import deque
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm, prod
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import PrivateAttr, field_validator

from .. import config
from ..errors import EnumerationGuardError, ModelInputError
from ..schemas import LabModel
from .scalar_service import Phase, PhaseField, parse_phase

logger = logging.getLogger(__name__)

GROUP_PATTERN = re.compile(r'^Z(\d+)$')


class FiniteAbelianGroup(LabModel):
    """G = Z_{n1} x ... x Z_{nr}; elemen berupa tuple, diurutkan leksikografis."""
    cyclic_orders: List[int]

    _elements: List[Tuple[int, ...]] = PrivateAttr(default_factory=list)
    _index: Dict[Tuple[int, ...], int] = PrivateAttr(default_factory=dict)
    _add: np.ndarray = PrivateAttr(default=None)
    _neg: np.ndarray = PrivateAttr(default=None)

    @field_validator("cyclic_orders")
    @classmethod
    def _check_orders(cls, value):
        if not value or any(n < 1 for n in value):
            raise ModelInputError(f"Cyclic orders must be positive integers, got {value}")
        return value

    def model_post_init(self, __context) -> None:
        self._elements = list(itertools.product(*[range(n) for n in self.cyclic_orders]))
        self._index = {element: i for i, element in enumerate(self._elements)}
        size = len(self._elements)
        add = np.zeros((size, size), dtype=np.int64)
        neg = np.zeros(size, dtype=np.int64)
        for i, a in enumerate(self._elements):
            neg[i] = self._index[tuple((-x) % n for x, n in zip(a, self.cyclic_orders))]
            for j, b in enumerate(self._elements):
                add[i, j] = self._index[tuple((x + y) % n for x, y, n in zip(a, b, self.cyclic_orders))]
        self._add = add
        self._neg = neg

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """'Z4', 'Z2xZ2' atau '2,2'."""
        cleaned = text.strip().replace(" ", "")
        if re.fullmatch(r'\d+(,\d+)*', cleaned):
            return cls(cyclic_orders=[int(n) for n in cleaned.split(",")])
        orders = []
        for part in re.split(r'[x×]', cleaned):
            match = GROUP_PATTERN.match(part)
            if not match:
                raise ModelInputError(f"Cannot parse group '{text}' (expected e.g. Z2, Z4, Z2xZ2)")
            orders.append(int(match.group(1)))
        return cls(cyclic_orders=orders)

    @property
    def order(self) -> int:
        return prod(self.cyclic_orders)

    @property
    def elements(self) -> List[Tuple[int, ...]]:
        return list(self._elements)

    @property
    def add_table(self) -> np.ndarray:
        return self._add

    @property
    def neg_table(self) -> np.ndarray:
        return self._neg

    def index(self, element: Tuple[int, ...]) -> int:
        try:
            return self._index[tuple(element)]
        except KeyError:
            raise ModelInputError(f"{element} is not an element of {self}") from None

    def label(self, i: int) -> str:
        return ".".join(str(x) for x in self._elements[i])

    def parse_element(self, text: str) -> int:
        try:
            return self.index(tuple(int(x) for x in text.strip().split(".")))
        except ValueError:
            raise ModelInputError(f"Cannot parse group element '{text}'") from None

    def multiples(self, i: int) -> List[int]:
        """Subgrup siklik yang dibangkitkan elemen ke-i."""
        result, node = [0], i
        while node != 0:
            result.append(node)
            node = int(self._add[node, i])
        return result

    def doubled(self) -> List[int]:
        """Indeks elemen subgrup 2G."""
        return sorted({int(self._add[i, i]) for i in range(self.order)})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteAbelianGroup):
            return NotImplemented
        return self.cyclic_orders == other.cyclic_orders

    def __hash__(self) -> int:
        return hash(tuple(self.cyclic_orders))

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.cyclic_orders)


class AbelianCocycle:
    """
    Pasangan (F, Omega) dengan nilai di akar satuan ke-m, disimpan sebagai eksponen mod m:
    F[i,j,k] = e berarti F(i,j,k) = e^{2 pi i e/m}.
    """
    __slots__ = ("group", "values", "F", "Omega")

    def __init__(self, group: FiniteAbelianGroup, values: int, F: np.ndarray, Omega: np.ndarray):
        n = group.order
        if F.shape != (n, n, n) or Omega.shape != (n, n):
            raise ModelInputError(f"Cocycle tables must have shapes {(n, n, n)} and {(n, n)}")
        self.group = group
        self.values = values
        self.F = np.asarray(F, dtype=np.int64) % values
        self.Omega = np.asarray(Omega, dtype=np.int64) % values

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup, values: int = 1) -> "AbelianCocycle":
        n = group.order
        return cls(group, values, np.zeros((n, n, n), dtype=np.int64), np.zeros((n, n), dtype=np.int64))

    def phase_F(self, i: int, j: int, k: int) -> Phase:
        return Phase(Fraction(int(self.F[i, j, k]), self.values))

    def phase_Omega(self, i: int, j: int) -> Phase:
        return Phase(Fraction(int(self.Omega[i, j]), self.values))

    def monodromy(self) -> np.ndarray:
        """M(a,b) = Omega(a,b) Omega(b,a)."""
        return (self.Omega + self.Omega.T) % self.values

    def rescaled(self, values: int) -> "AbelianCocycle":
        if values % self.values:
            raise ModelInputError(f"Cannot rescale values {self.values} to {values}")
        factor = values // self.values
        return AbelianCocycle(self.group, values, self.F * factor, self.Omega * factor)

    def to_dict(self) -> dict:
        g, n = self.group, self.group.order
        return {
            "group": list(g.cyclic_orders),
            "values": self.values,
            "F": {f"{g.label(i)},{g.label(j)},{g.label(k)}": str(self.phase_F(i, j, k))
                  for i, j, k in itertools.product(range(n), repeat=3)},
            "Omega": {f"{g.label(i)},{g.label(j)}": str(self.phase_Omega(i, j))
                      for i, j in itertools.product(range(n), repeat=2)},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AbelianCocycle":
        try:
            group = FiniteAbelianGroup(cyclic_orders=data["group"])
            raw_F = {key: parse_phase(value) for key, value in data.get("F", {}).items()}
            raw_Omega = {key: parse_phase(value) for key, value in data.get("Omega", {}).items()}
        except (KeyError, TypeError) as e:
            raise ModelInputError(f"Malformed cocycle document: {e}") from e
        values = data.get("values") or lcm(1, *[p.order() for p in list(raw_F.values()) + list(raw_Omega.values())])
        n = group.order
        F = np.zeros((n, n, n), dtype=np.int64)
        Omega = np.zeros((n, n), dtype=np.int64)

        def exponent(phase: Phase) -> int:
            scaled = phase.q * values
            if scaled.denominator != 1:
                raise ModelInputError(f"Phase {phase} is not a {values}-th root of unity")
            return int(scaled)

        for key, phase in raw_F.items():
            parts = key.split(",")
            if len(parts) != 3:
                raise ModelInputError(f"F key '{key}' must name three elements")
            F[tuple(group.parse_element(p) for p in parts)] = exponent(phase)
        for key, phase in raw_Omega.items():
            parts = key.split(",")
            if len(parts) != 2:
                raise ModelInputError(f"Omega key '{key}' must name two elements")
            Omega[tuple(group.parse_element(p) for p in parts)] = exponent(phase)
        return cls(group, values, F, Omega)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbelianCocycle):
            return NotImplemented
        if self.group.cyclic_orders != other.group.cyclic_orders:
            return False
        m = lcm(self.values, other.values)
        a, b = self.rescaled(m), other.rescaled(m)
        return bool(np.array_equal(a.F, b.F) and np.array_equal(a.Omega, b.Omega))

    def __hash__(self) -> int:
        return hash((tuple(self.group.cyclic_orders), self.F.tobytes(), self.Omega.tobytes(), self.values))

    def __repr__(self) -> str:
        return f"AbelianCocycle({self.group}, values={self.values})"


class IdentityCheck(LabModel):
    name: str
    ok: bool
    counterexample: Optional[List[str]] = None


class CocycleReport(LabModel):
    group: str
    values: int
    checks: List[IdentityCheck]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)

    def check(self, name: str) -> IdentityCheck:
        return next(c for c in self.checks if c.name == name)


class QuadraticForm(LabModel):
    q: Dict[str, PhaseField]
    B: Dict[str, PhaseField]
    checks: List[IdentityCheck]

    @property
    def ok(self) -> bool:
        return all(check.ok for check in self.checks)


class MonodromySuiteReport(LabModel):
    group: str
    values: int
    items: List[IdentityCheck]
    tables_checked: int = 1

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)


class CoboundaryWitness(LabModel):
    group: str
    values: int
    b: Dict[str, PhaseField]


def _first_failure(name: str, group: FiniteAbelianGroup, failures: np.ndarray) -> IdentityCheck:
    hits = np.argwhere(failures)
    if len(hits) == 0:
        return IdentityCheck(name=name, ok=True)
    return IdentityCheck(name=name, ok=False, counterexample=[group.label(int(i)) for i in hits[0]])


def verify(cocycle: AbelianCocycle) -> CocycleReport:
    """Normalisasi, pentagon dan kedua hexagon, diperiksa untuk semua argumen."""
    g, m = cocycle.group, cocycle.values
    A, F, W = g.add_table, cocycle.F, cocycle.Omega
    n = g.order

    I, J, K = np.indices((n, n, n))
    zero_arg = (I == 0) | (J == 0) | (K == 0)
    normal_F = zero_arg & (F != 0)
    Ia, Ja = np.indices((n, n))
    normal_W = ((Ia == 0) | (Ja == 0)) & (W != 0)

    I4, J4, K4, L4 = np.indices((n, n, n, n))
    pentagon = (F[I4, J4, K4] + F[I4, A[J4, K4], L4] + F[J4, K4, L4]
                - F[A[I4, J4], K4, L4] - F[I4, J4, A[K4, L4]]) % m
    hexagon1 = (-F[I, J, K] + W[I, A[J, K]] - F[J, K, I]
                - W[I, J] + F[J, I, K] - W[I, K]) % m
    hexagon2 = (F[I, J, K] + W[A[I, J], K] + F[K, I, J]
                - W[J, K] - F[I, K, J] - W[I, K]) % m

    checks = [
        _first_failure("normalization_F", g, normal_F),
        _first_failure("normalization_Omega", g, normal_W),
        _first_failure("pentagon", g, pentagon != 0),
        _first_failure("hexagon1", g, hexagon1 != 0),
        _first_failure("hexagon2", g, hexagon2 != 0),
    ]
    return CocycleReport(group=str(g), values=m, checks=checks)


def key_identity_Z2(cocycle: AbelianCocycle) -> IdentityCheck:
    """F(1,1,1) = Omega(1,1)^2 pada Z2."""
    if cocycle.group.cyclic_orders != [2]:
        raise ModelInputError(f"key identity is stated for Z2 only, got {cocycle.group}")
    ok = cocycle.phase_F(1, 1, 1) == cocycle.phase_Omega(1, 1) ** 2
    return IdentityCheck(name="F(1,1,1)=Omega(1,1)^2", ok=ok, counterexample=None if ok else ["1", "1", "1"])


def quadratic_form(cocycle: AbelianCocycle) -> QuadraticForm:
    """q(i) = Omega(i,i) dan B(i,j) = Omega(i,j) Omega(j,i), beserta identitas yang harus dipenuhi."""
    g, m = cocycle.group, cocycle.values
    A, neg, n = g.add_table, g.neg_table, g.order
    q = np.diagonal(cocycle.Omega).copy()
    B = cocycle.monodromy()

    I, J, K = np.indices((n, n, n))
    bimultiplicative = (B[A[I, J], K] - B[I, K] - B[J, K]) % m != 0
    Ia, Ja = np.indices((n, n))
    quadratic = (q[A[Ia, Ja]] - q[Ia] - q[Ja] - B[Ia, Ja]) % m != 0
    even = (q[neg] - q) % m != 0

    def as_phase(e) -> Phase:
        return Phase(Fraction(int(e), m))

    return QuadraticForm(
        q={g.label(i): as_phase(q[i]) for i in range(n)},
        B={f"{g.label(i)},{g.label(j)}": as_phase(B[i, j]) for i in range(n) for j in range(n)},
        checks=[
            _first_failure("bimultiplicativity", g, bimultiplicative),
            _first_failure("quadratic", g, quadratic),
            _first_failure("q(i)=q(-i)", g, even),
        ],
    )


def monodromy_suite_for_table(group: FiniteAbelianGroup, M: np.ndarray, values: int) -> MonodromySuiteReport:
    """Spesialisasi skalar dari sifat-sifat monodromi pada kategori pointed."""
    A, neg, n = group.add_table, group.neg_table, group.order
    M = np.asarray(M, dtype=np.int64) % values
    trivial = M == 0
    I, J, K = np.indices((n, n, n))

    unit = ~trivial[0, :] | ~trivial[:, 0]
    symmetry = M != M.T
    right_additive = trivial[I, K] & (M[I, A[J, K]] != M[I, J])
    left_additive = trivial[J, K] & (M[A[I, J], K] != M[I, K])
    inverse = trivial & ~trivial[neg, :]
    closure = trivial[I, K] & trivial[J, K] & ~trivial[A[I, J], K]

    multiples = np.zeros((n, n, n), dtype=bool)
    for j in range(n):
        if not trivial[j, j]:
            continue
        cyclic = group.multiples(j)
        for x in cyclic:
            for y in cyclic:
                multiples[j, x, y] = not trivial[x, y]

    items = [
        _first_failure("unit", group, unit),
        _first_failure("symmetry", group, symmetry),
        _first_failure("additive_right", group, right_additive),
        _first_failure("additive_left", group, left_additive),
        _first_failure("multiples", group, multiples),
        _first_failure("inverse", group, inverse),
        _first_failure("closure", group, closure),
    ]
    return MonodromySuiteReport(group=str(group), values=values, items=items)


def monodromy_theorem_suite(cocycle: AbelianCocycle) -> MonodromySuiteReport:
    return monodromy_suite_for_table(cocycle.group, cocycle.monodromy(), cocycle.values)


def pullback_check(cocycle: AbelianCocycle, subgroup: Optional[List[int]] = None) -> bool:
    """True jika F dan Omega konstan pada koset H (default H = 2G) di setiap argumen."""
    g = cocycle.group
    A, n = g.add_table, g.order
    H = subgroup if subgroup is not None else g.doubled()
    F, W = cocycle.F, cocycle.Omega
    idx = np.arange(n)
    for h in H:
        shift = A[idx, h]
        if not (np.array_equal(F[shift, :, :], F) and np.array_equal(F[:, shift, :], F)
                and np.array_equal(F[:, :, shift], F)):
            return False
        if not (np.array_equal(W[shift, :], W) and np.array_equal(W[:, shift], W)):
            return False
    return True


# --- Sistem linear kocycle atas Z/m -------------------------------------------------------------

def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(x, y, g) dengan x a + y b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -x0, -y0, -a
    return x0, y0, a


def _unimodular(a: int, b: int) -> Tuple[int, int, int, int]:
    """Matriks [[x, y], [u, v]] berdeterminan 1 yang memetakan (a, b) ke (gcd, 0)."""
    if b % a == 0:
        return 1, 0, -(b // a), 1
    x, y, g = _xgcd(a, b)
    return x, y, -b // g, a // g


def diagonalize(rows: List[List[int]], num_cols: int) -> Tuple[List[List[int]], List[List[int]]]:
    """
    Cari D diagonal dan T unimodular dengan S A T = D untuk suatu S unimodular.
    Tanpa syarat keterbagian antar entri diagonal (bukan Smith normal form penuh).
    """
    D = [list(row) for row in rows]
    T = [[int(i == j) for j in range(num_cols)] for i in range(num_cols)]
    num_rows = len(D)

    def row_step(k: int, i: int) -> None:
        a, b = D[k][k], D[i][k]
        if b == 0:
            return
        if a == 0:
            D[k], D[i] = D[i], D[k]
            return
        x, y, u, v = _unimodular(a, b)
        rk, ri = D[k], D[i]
        D[k] = [x * p + y * r for p, r in zip(rk, ri)]
        D[i] = [u * p + v * r for p, r in zip(rk, ri)]

    def col_step(k: int, j: int) -> None:
        a, b = D[k][k], D[k][j]
        if b == 0:
            return
        if a == 0:
            for row in itertools.chain(D, T):
                row[k], row[j] = row[j], row[k]
            return
        x, y, u, v = _unimodular(a, b)
        for row in itertools.chain(D, T):
            p, r = row[k], row[j]
            row[k], row[j] = x * p + y * r, u * p + v * r

    for k in range(min(num_rows, num_cols)):
        while True:
            for i in range(k + 1, num_rows):
                row_step(k, i)
            if all(D[k][j] == 0 for j in range(k + 1, num_cols)):
                break
            for j in range(k + 1, num_cols):
                col_step(k, j)
            if all(D[i][k] == 0 for i in range(k + 1, num_rows)):
                break
    return D, T


class _Unknowns:
    """Tata letak variabel: F(a,b,c) dan Omega(a,b) untuk argumen tak nol."""

    def __init__(self, group: FiniteAbelianGroup):
        nonzero = range(1, group.order)
        self.f = {key: i for i, key in enumerate(itertools.product(nonzero, repeat=3))}
        offset = len(self.f)
        self.w = {key: offset + i for i, key in enumerate(itertools.product(nonzero, repeat=2))}
        self.size = offset + len(self.w)

    def F(self, a: int, b: int, c: int) -> Optional[int]:
        return self.f.get((a, b, c))

    def W(self, a: int, b: int) -> Optional[int]:
        return self.w.get((a, b))

    def tables(self, group: FiniteAbelianGroup, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        n = group.order
        F = np.zeros((n, n, n), dtype=np.int64)
        W = np.zeros((n, n), dtype=np.int64)
        for key, col in self.f.items():
            F[key] = x[col]
        for key, col in self.w.items():
            W[key] = x[col]
        return F, W


def _cocycle_equations(group: FiniteAbelianGroup, unknowns: _Unknowns) -> List[List[int]]:
    A, n = group.add_table, group.order
    rows = set()

    def emit(terms):
        row = [0] * unknowns.size
        for col, coef in terms:
            if col is not None:
                row[col] += coef
        if any(row):
            rows.add(tuple(row))

    F, W = unknowns.F, unknowns.W
    for i, j, k, l in itertools.product(range(n), repeat=4):
        emit([(F(i, j, k), 1), (F(i, int(A[j, k]), l), 1), (F(j, k, l), 1),
              (F(int(A[i, j]), k, l), -1), (F(i, j, int(A[k, l])), -1)])
    for i, j, k in itertools.product(range(n), repeat=3):
        emit([(F(i, j, k), -1), (W(i, int(A[j, k])), 1), (F(j, k, i), -1),
              (W(i, j), -1), (F(j, i, k), 1), (W(i, k), -1)])
        emit([(F(i, j, k), 1), (W(int(A[i, j]), k), 1), (F(k, i, j), 1),
              (W(j, k), -1), (F(i, k, j), -1), (W(i, k), -1)])
    return sorted(rows)


class CocycleSpace(Sequence):
    """
    Semua kocycle abelian ternormalisasi bernilai di akar satuan ke-m, sebagai Z/m-modul
    x = sum_i c_i g_i dengan 0 <= c_i < orders[i]. Diakses secara malas lewat indeks mixed radix.
    """

    def __init__(self, group: FiniteAbelianGroup, values: int, unknowns: _Unknowns,
                 generators: List[np.ndarray], orders: List[int]):
        self.group = group
        self.values = values
        self._unknowns = unknowns
        self.generators = generators
        self.orders = orders

    def __len__(self) -> int:
        return prod(self.orders)

    def _vector(self, index: int) -> np.ndarray:
        x = np.zeros(self._unknowns.size, dtype=np.int64)
        for generator, order in zip(self.generators, self.orders):
            index, digit = divmod(index, order)
            if digit:
                x = (x + digit * generator) % self.values
        return x

    def _cocycle(self, x: np.ndarray) -> AbelianCocycle:
        F, W = self._unknowns.tables(self.group, x)
        return AbelianCocycle(self.group, self.values, F, W)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        size = len(self)
        if index < 0:
            index += size
        if not 0 <= index < size:
            raise IndexError("cocycle index out of range")
        return self._cocycle(self._vector(index))

    def braiding_representatives(self, limit: int = 4096) -> List[AbelianCocycle]:
        """Satu kocycle untuk setiap tabel Omega yang berbeda (BFS pada proyeksi ke koordinat Omega)."""
        omega_cols = np.array(sorted(self._unknowns.w.values()), dtype=np.int64)
        start = np.zeros(self._unknowns.size, dtype=np.int64)
        seen = {start[omega_cols].tobytes(): start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for generator in self.generators:
                y = (x + generator) % self.values
                key = y[omega_cols].tobytes()
                if key not in seen:
                    if len(seen) >= limit:
                        raise EnumerationGuardError(f"more than {limit} distinct braidings on {self.group}")
                    seen[key] = y
                    queue.append(y)
        return [self._cocycle(x) for x in seen.values()]

    def __repr__(self) -> str:
        return f"CocycleSpace({self.group}, values={self.values}, size={len(self)})"


def _check_guard(group: FiniteAbelianGroup, values: int, max_group: int) -> None:
    if values < 1:
        raise ModelInputError(f"Value order must be positive, got {values}")
    if group.order > max_group or values > config.COCYCLE_MAX_VALUE_ORDER:
        raise EnumerationGuardError(
            f"size guard exceeded: |G| = {group.order} (max {max_group}), "
            f"m = {values} (max {config.COCYCLE_MAX_VALUE_ORDER})")


def enumerate_cocycles(group: FiniteAbelianGroup, values: int) -> CocycleSpace:
    """Ruang lengkap kocycle dengan nilai di akar satuan ke-m."""
    _check_guard(group, values, config.COCYCLE_MAX_GROUP_ORDER)
    unknowns = _Unknowns(group)
    generators: List[np.ndarray] = []
    orders: List[int] = []
    if unknowns.size:
        rows = _cocycle_equations(group, unknowns)
        D, T = diagonalize(rows, unknowns.size) if rows else ([], [[int(i == j) for j in range(unknowns.size)]
                                                                for i in range(unknowns.size)])
        T = np.array(T, dtype=object)
        for j in range(unknowns.size):
            d = D[j][j] if j < len(D) else 0
            order = gcd(d, values)
            if order == 1:
                continue
            column = np.array([int(v) % values for v in T[:, j]], dtype=np.int64)
            generators.append((column * (values // order)) % values)
            orders.append(order)
    space = CocycleSpace(group, values, unknowns, generators, orders)
    logger.info(f"Solved cocycle system on {group} with values {values}: {len(space)} cocycles.")
    return space


@lru_cache(maxsize=16)
def _coboundary_lookup(orders: Tuple[int, ...], values: int) -> Dict[bytes, np.ndarray]:
    """Peta (dF, dOmega) -> 2-kochain ternormalisasi pertama yang menghasilkannya."""
    group = FiniteAbelianGroup(cyclic_orders=list(orders))
    A, n = group.add_table, group.order
    free = list(itertools.product(range(1, n), repeat=2))
    choices = np.array(list(itertools.product(range(values), repeat=len(free))), dtype=np.int64)
    b = np.zeros((len(choices), n, n), dtype=np.int64)
    for col, (i, j) in enumerate(free):
        b[:, i, j] = choices[:, col]

    I, J, K = np.indices((n, n, n))
    dF = (b[:, J, K] + b[:, I, A[J, K]] - b[:, A[I, J], K] - b[:, I, J]) % values
    dW = (b - b.transpose(0, 2, 1)) % values
    lookup: Dict[bytes, np.ndarray] = {}
    for idx in range(len(choices)):
        key = dF[idx].tobytes() + dW[idx].tobytes()
        lookup.setdefault(key, b[idx])
    return lookup


def coboundary_equivalent(first: AbelianCocycle, second: AbelianCocycle,
                          values: Optional[int] = None) -> Optional[CoboundaryWitness]:
    """Cari 2-kochain b dengan F2 = F1 db dan Omega2(i,j) = Omega1(i,j) b(i,j)/b(j,i)."""
    if first.group.cyclic_orders != second.group.cyclic_orders:
        raise ModelInputError(f"Cocycles live on different groups: {first.group} and {second.group}")
    group = first.group
    m = values or lcm(first.values, second.values)
    _check_guard(group, m, config.COBOUNDARY_MAX_GROUP_ORDER)
    a, b = first.rescaled(m), second.rescaled(m)
    key = ((b.F - a.F) % m).tobytes() + ((b.Omega - a.Omega) % m).tobytes()
    cochain = _coboundary_lookup(tuple(group.cyclic_orders), m).get(key)
    if cochain is None:
        return None
    n = group.order
    return CoboundaryWitness(
        group=str(group), values=m,
        b={f"{group.label(i)},{group.label(j)}": Phase(Fraction(int(cochain[i, j]), m))
           for i in range(n) for j in range(n)},
    )


def coboundary_classes(cocycles, values: Optional[int] = None) -> List[List[int]]:
    """Partisi indeks kocycle menurut relasi kohomolog."""
    classes: List[List[int]] = []
    representatives: List[AbelianCocycle] = []
    for idx, cocycle in enumerate(cocycles):
        for members, rep in zip(classes, representatives):
            if coboundary_equivalent(rep, cocycle, values) is not None:
                members.append(idx)
                break
        else:
            classes.append([idx])
            representatives.append(cocycle)
    return classes
