# app/schemas.py
from typing import List, Optional

from pydantic import BaseModel, ConfigDict


class LabModel(BaseModel):
    """Basis model pydantic: immutable, mengizinkan Fraction dan Phase sebagai field."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True, populate_by_name=True)


class Violation(LabModel):
    code: str
    kind: str  # "structure" atau "property"
    message: str


class CheckResult(LabModel):
    """Hasil cek ok | violation, dengan indeks/elemen pertama yang gagal jika ada."""
    ok: bool
    message: str = ""
    index: Optional[int] = None
    notes: List[str] = []

    @classmethod
    def passed(cls, message: str = "", notes: Optional[List[str]] = None) -> "CheckResult":
        return cls(ok=True, message=message, notes=notes or [])

    @classmethod
    def failed(cls, message: str, index: Optional[int] = None,
               notes: Optional[List[str]] = None) -> "CheckResult":
        return cls(ok=False, message=message, index=index, notes=notes or [])
