"""
Неизменяемая модель книги: листы, ячейки, стили, имена, проверки данных
"""
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple, Union

from openpyxl.utils import get_column_letter
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

FrozenModel = ConfigDict(frozen=True, extra="forbid")

UNKNOWN_COLOR = "unknown"

LiteralValue = Union[bool, int, float, str]


class CellAddress(BaseModel):
    """Адрес ячейки: индекс листа, столбец и строка (с единицы)"""
    model_config = FrozenModel

    sheet_index: int = Field(..., ge=0)
    column: int = Field(..., ge=1)
    row: int = Field(..., ge=1)

    @property
    def coordinate(self) -> str:
        return f"{get_column_letter(self.column)}{self.row}"

    def __str__(self) -> str:
        return f"#{self.sheet_index}!{self.coordinate}"


class CellKind(str, Enum):
    EMPTY = "empty"
    NUMBER = "number"
    TEXT = "text"
    BOOLEAN = "boolean"
    ERROR = "error"
    FORMULA = "formula"


class Cell(BaseModel):
    """Ячейка книги; формулы хранятся сырым текстом"""
    model_config = FrozenModel

    address: CellAddress
    kind: CellKind
    value: Optional[LiteralValue] = None
    formula: Optional[str] = None
    is_array: bool = False
    style_id: int = Field(0, ge=0)
    comment: Optional[str] = None

    @model_validator(mode="after")
    def check_content(self) -> "Cell":
        if self.kind is CellKind.FORMULA:
            if not self.formula or not self.formula.startswith("="):
                raise ValueError("formula text must be non-empty and start with '='")
            if self.value is not None:
                raise ValueError("formula cells carry no literal value")
        else:
            if self.formula is not None:
                raise ValueError("only formula cells carry formula text")
            if self.is_array:
                raise ValueError("is_array is only valid on formula cells")
            expected = {
                CellKind.EMPTY: type(None),
                CellKind.BOOLEAN: bool,
                CellKind.TEXT: str,
                CellKind.ERROR: str,
            }
            if self.kind is CellKind.NUMBER:
                if isinstance(self.value, bool) or not isinstance(self.value, (int, float)):
                    raise ValueError("number cells need a numeric value")
            elif not isinstance(self.value, expected[self.kind]):
                raise ValueError(f"{self.kind.value} cell has value {self.value!r}")
        return self

    @property
    def is_formula(self) -> bool:
        return self.kind is CellKind.FORMULA

    @property
    def is_empty(self) -> bool:
        return self.kind is CellKind.EMPTY

    @property
    def coordinate(self) -> str:
        return self.address.coordinate


class StyleSignature(BaseModel):
    """Визуальная подпись стиля; равные подписи означают одинаковое оформление"""
    model_config = FrozenModel

    fill_color: Optional[str] = None
    font_key: Tuple[Optional[str], Optional[float], bool, bool] = (None, None, False, False)
    number_format: str = "General"
    border_key: str = ""


class PaneState(BaseModel):
    model_config = FrozenModel

    state: Literal["none", "frozen", "split"] = "none"
    rows: int = Field(0, ge=0)
    cols: int = Field(0, ge=0)

    @property
    def is_set(self) -> bool:
        return self.state != "none"


ValidationKind = Literal["list", "whole", "decimal", "custom"]


class DataValidation(BaseModel):
    """Проверка данных, привязанная к диапазону (A1, несколько через пробел)"""
    model_config = FrozenModel

    ref: str
    kind: ValidationKind
    prompt: Optional[str] = None


class Rect(BaseModel):
    """Прямоугольник ячеек; пустой прямоугольник обозначает пустой лист"""
    model_config = FrozenModel

    min_row: int = 0
    min_col: int = 0
    max_row: int = 0
    max_col: int = 0

    @classmethod
    def empty(cls) -> "Rect":
        return cls()

    @property
    def is_empty(self) -> bool:
        return self.min_row == 0

    def contains(self, row: int, column: int) -> bool:
        return (
            not self.is_empty
            and self.min_row <= row <= self.max_row
            and self.min_col <= column <= self.max_col
        )

    def intersects(self, other: "Rect") -> bool:
        if self.is_empty or other.is_empty:
            return False
        return not (
            self.max_row < other.min_row
            or other.max_row < self.min_row
            or self.max_col < other.min_col
            or other.max_col < self.min_col
        )

    @property
    def area(self) -> int:
        if self.is_empty:
            return 0
        return (self.max_row - self.min_row + 1) * (self.max_col - self.min_col + 1)


class Sheet(BaseModel):
    """Лист: разреженная карта (row, column) → Cell"""
    model_config = FrozenModel

    name: str = Field(..., min_length=1)
    cells: Dict[Tuple[int, int], Cell] = Field(default_factory=dict)
    pane_state: PaneState = PaneState()
    validations: List[DataValidation] = Field(default_factory=list)
    used_bounds: Rect = Rect()

    @model_validator(mode="after")
    def check_bounds(self) -> "Sheet":
        for (row, column), cell in self.cells.items():
            if (cell.address.row, cell.address.column) != (row, column):
                raise ValueError(f"cell key {(row, column)} does not match {cell.coordinate}")
            if not cell.is_empty and not self.used_bounds.contains(row, column):
                raise ValueError(f"{self.name}!{cell.coordinate} lies outside used bounds")
        return self

    def cell(self, row: int, column: int) -> Optional[Cell]:
        return self.cells.get((row, column))

    def non_empty_cells(self) -> List[Cell]:
        return [c for c in self.cells.values() if not c.is_empty]


class DefinedName(BaseModel):
    """Определённое имя: target содержит ссылку или константу без ведущего '='"""
    model_config = FrozenModel

    name: str = Field(..., min_length=1)
    target: str
    scope: Optional[str] = None  # None: вся книга, иначе имя листа


class Workbook(BaseModel):
    model_config = FrozenModel

    sheets: List[Sheet]
    defined_names: List[DefinedName] = Field(default_factory=list)
    style_table: List[StyleSignature] = Field(default_factory=lambda: [StyleSignature()])
    source_path: str = ""
    control_parts: List[str] = Field(default_factory=list)

    @field_validator("style_table")
    @classmethod
    def non_empty_styles(cls, v: List[StyleSignature]) -> List[StyleSignature]:
        if not v:
            raise ValueError("style table needs at least the default style")
        return v

    @model_validator(mode="after")
    def check_integrity(self) -> "Workbook":
        names = [s.name.lower() for s in self.sheets]
        if len(names) != len(set(names)):
            raise ValueError("sheet names must be unique")
        for index, sheet in enumerate(self.sheets):
            for cell in sheet.cells.values():
                if cell.address.sheet_index != index:
                    raise ValueError(f"{sheet.name}!{cell.coordinate} has sheet index "
                                     f"{cell.address.sheet_index}, expected {index}")
                if cell.style_id >= len(self.style_table):
                    raise ValueError(f"{sheet.name}!{cell.coordinate} uses unknown style "
                                     f"{cell.style_id}")
        seen = set()
        for dn in self.defined_names:
            key = (dn.scope.lower() if dn.scope else None, dn.name.upper())
            if key in seen:
                raise ValueError(f"defined name {dn.name!r} declared twice in one scope")
            seen.add(key)
            if dn.scope is not None and dn.scope.lower() not in names:
                raise ValueError(f"defined name {dn.name!r} scoped to unknown sheet {dn.scope!r}")
        # Ленивый импорт: модуль имён сам импортирует эту схему
        from sheetcheck.services.workbook.names import missing_target_sheets

        for dn in self.defined_names:
            missing = missing_target_sheets(self, dn)
            if missing:
                raise ValueError(f"defined name {dn.name!r} refers to missing sheet {missing[0]!r}")
        return self

    def sheet_index(self, name: str) -> Optional[int]:
        """Индекс листа по имени (без учёта регистра, как в Excel)"""
        lowered = name.lower()
        for index, sheet in enumerate(self.sheets):
            if sheet.name.lower() == lowered:
                return index
        return None

    def cell_at(self, address: CellAddress) -> Optional[Cell]:
        if address.sheet_index >= len(self.sheets):
            return None
        return self.sheets[address.sheet_index].cell(address.row, address.column)

    def iter_cells(self):
        for sheet in self.sheets:
            for key in sorted(sheet.cells):
                yield sheet.cells[key]

    def formula_cells(self) -> List[Cell]:
        return [c for c in self.iter_cells() if c.is_formula]

    def style_of(self, cell: Cell) -> StyleSignature:
        return self.style_table[cell.style_id]

    def lookup_name(self, name: str, sheet: Optional[str] = None) -> Optional[DefinedName]:
        """Поиск имени: сначала в области листа, затем на уровне книги"""
        upper = name.upper()
        scoped = None
        global_ = None
        for dn in self.defined_names:
            if dn.name.upper() != upper:
                continue
            if dn.scope is None:
                global_ = dn
            elif sheet is not None and dn.scope.lower() == sheet.lower():
                scoped = dn
        return scoped or global_

    def locate(self, address: CellAddress) -> str:
        """Человекочитаемый адрес 'Лист!A1'"""
        return f"{self.sheets[address.sheet_index].name}!{address.coordinate}"

    @property
    def cell_count(self) -> int:
        return sum(len(s.non_empty_cells()) for s in self.sheets)
