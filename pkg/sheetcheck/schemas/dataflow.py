"""
Схемы графа зависимостей: классы ячеек и диагностика
"""
from enum import Enum
from typing import Literal

from pydantic import BaseModel

from sheetcheck.schemas.workbook import FrozenModel


class CellClass(str, Enum):
    INPUT = "Input"
    CALCULATION = "Calculation"
    OUTPUT = "Output"
    LABEL = "Label"
    EMPTY = "Empty"


DiagnosticKind = Literal[
    "parse_error",
    "unsupported_notation",
    "dangling_reference",
    "circular_dependency",
    "expansion_capped",
]


class Diagnostic(BaseModel):
    """Замечание построения графа; не мешает анализу"""
    model_config = FrozenModel

    kind: DiagnosticKind
    location: str
    detail: str
