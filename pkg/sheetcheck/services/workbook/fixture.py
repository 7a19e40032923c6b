"""
Простой JSON-формат фикстур для тестов и отладки

{"sheets": [{"name": ..., "panes"?: ..., "validations"?: [...],
             "cells": {"A1": {"v": 5} | {"f": "=A1*2", "array"?: true,
                                         "style"?: 1, "comment"?: "..."}}}],
 "names": {"VAT": "Inputs!$B$1"}, "styles": [{"fill"?, "font"?, "numfmt"?, "border"?}]}
"""
import json
import re
from pathlib import Path
from typing import Dict, List, Optional, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from sheetcheck.exceptions import FixtureInvariantViolation, FixtureSyntax, InvalidRange
from sheetcheck.schemas.workbook import (
    UNKNOWN_COLOR,
    Cell,
    CellAddress,
    CellKind,
    DataValidation,
    DefinedName,
    PaneState,
    Sheet,
    StyleSignature,
    ValidationKind,
    Workbook,
)
from sheetcheck.services.workbook.names import sort_names
from sheetcheck.services.workbook.ranges import bounding_rect, coordinate_key, parse_sqref

logger = structlog.get_logger(__name__)

HEX_COLOR = re.compile(r"^#?([0-9A-Fa-f]{6})([0-9A-Fa-f]{2})?$")


class FixtureCell(BaseModel):
    model_config = ConfigDict(extra="forbid")

    v: Optional[Union[bool, int, float, str]] = None
    e: Optional[str] = None
    f: Optional[str] = None
    array: bool = False
    style: int = 0
    comment: Optional[str] = None


class FixturePanes(BaseModel):
    model_config = ConfigDict(extra="forbid")

    state: str = Field("frozen", pattern="^(none|frozen|split)$")
    rows: int = 0
    cols: int = 0


class FixtureValidation(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    ref: str = Field(..., alias="range")
    kind: ValidationKind
    prompt: Optional[str] = None


class FixtureSheet(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    panes: Optional[FixturePanes] = None
    validations: List[FixtureValidation] = Field(default_factory=list)
    cells: Dict[str, FixtureCell] = Field(default_factory=dict)

    @model_validator(mode="after")
    def local_validation_ranges(self) -> "FixtureSheet":
        """Диапазон проверки может ссылаться только на свой лист; квалификатор снимается"""
        for validation in self.validations:
            validation.ref = local_range(validation.ref, self.name)
        return self


def local_range(ref: str, sheet: str) -> str:
    text = ref.strip()
    if "!" in text:
        qualifier, text = text.rsplit("!", 1)
        if qualifier.startswith("'") and qualifier.endswith("'") and len(qualifier) > 1:
            qualifier = qualifier[1:-1].replace("''", "'")
        if qualifier.casefold() != sheet.casefold():
            raise ValueError(f"validation range {ref!r} points outside sheet {sheet!r}")
    if not text:
        raise ValueError(f"empty validation range on sheet {sheet!r}")
    try:
        parse_sqref(text)
    except InvalidRange as e:
        raise ValueError(str(e)) from e
    return text


class FixtureFont(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    size: Optional[float] = None
    bold: bool = False
    italic: bool = False


class FixtureStyle(BaseModel):
    model_config = ConfigDict(extra="forbid")

    fill: Optional[str] = None
    font: Optional[FixtureFont] = None
    numfmt: str = "General"
    border: str = ""


class FixtureName(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ref: str
    scope: Optional[str] = None


NameEntry = Union[str, FixtureName, List[FixtureName]]


class FixtureDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: Optional[str] = None
    sheets: List[FixtureSheet]
    names: Dict[str, NameEntry] = Field(default_factory=dict)
    styles: List[FixtureStyle] = Field(default_factory=list)
    controls: List[str] = Field(default_factory=list)


def normalize_hex_color(value: Optional[str]) -> Optional[str]:
    """'#RRGGBB' / 'RRGGBBAA' → '#RRGGBBAA'; 'unknown' сохраняется"""
    if value is None:
        return None
    if value.lower() == UNKNOWN_COLOR:
        return UNKNOWN_COLOR
    match = HEX_COLOR.match(value.strip())
    if not match:
        raise FixtureInvariantViolation(f"bad color {value!r}")
    return "#" + match.group(1).upper() + (match.group(2) or "FF").upper()


def _signature(style: FixtureStyle) -> StyleSignature:
    font = style.font or FixtureFont()
    return StyleSignature(
        fill_color=normalize_hex_color(style.fill),
        font_key=(font.name, font.size, font.bold, font.italic),
        number_format=style.numfmt,
        border_key=style.border,
    )


def _cell(sheet_index: int, coordinate: str, spec: FixtureCell) -> Cell:
    try:
        row, column = coordinate_key(coordinate)
    except ValueError as e:
        raise FixtureInvariantViolation(f"bad cell address {coordinate!r}: {e}") from e
    address = CellAddress(sheet_index=sheet_index, column=column, row=row)

    if spec.f is not None:
        kind, value = CellKind.FORMULA, None
    elif spec.e is not None:
        kind, value = CellKind.ERROR, spec.e
    elif spec.v is None:
        kind, value = CellKind.EMPTY, None
    elif isinstance(spec.v, bool):
        kind, value = CellKind.BOOLEAN, spec.v
    elif isinstance(spec.v, (int, float)):
        kind, value = CellKind.NUMBER, spec.v
    else:
        kind, value = CellKind.TEXT, spec.v

    return Cell(
        address=address,
        kind=kind,
        value=value,
        formula=spec.f,
        is_array=spec.array,
        style_id=spec.style,
        comment=spec.comment,
    )


def _names(entries: Dict[str, NameEntry]) -> List[DefinedName]:
    names = []
    for name, entry in entries.items():
        if isinstance(entry, str):
            names.append(DefinedName(name=name, target=entry))
            continue
        for item in entry if isinstance(entry, list) else [entry]:
            names.append(DefinedName(name=name, target=item.ref, scope=item.scope))
    return names


def build_workbook(document: FixtureDocument, source: str) -> Workbook:
    sheets = []
    for index, spec in enumerate(document.sheets):
        cells = {}
        for coordinate, cell_spec in spec.cells.items():
            cell = _cell(index, coordinate, cell_spec)
            key = (cell.address.row, cell.address.column)
            if key in cells:
                raise FixtureInvariantViolation(f"{spec.name}!{coordinate} declared twice")
            cells[key] = cell
        panes = spec.panes or FixturePanes(state="none")
        sheets.append(
            Sheet(
                name=spec.name,
                cells=cells,
                pane_state=PaneState(state=panes.state, rows=panes.rows, cols=panes.cols),
                validations=[
                    DataValidation(ref=v.ref, kind=v.kind, prompt=v.prompt)
                    for v in spec.validations
                ],
                used_bounds=bounding_rect(cells.values()),
            )
        )

    styles = [_signature(s) for s in document.styles] or [StyleSignature()]
    return Workbook(
        sheets=sheets,
        defined_names=sort_names(_names(document.names)),
        style_table=styles,
        source_path=document.source if document.source is not None else source,
        control_parts=document.controls,
    )


def parse_fixture(text: str, source: str = "<fixture>") -> Workbook:
    """Разбор документа фикстуры из строки"""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise FixtureSyntax(e.lineno, e.msg) from e
    try:
        document = FixtureDocument.model_validate(raw)
        return build_workbook(document, source)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        detail = f"{location}: {first['msg']}" if location else first["msg"]
        raise FixtureInvariantViolation(detail) from e


def load_fixture(path: Union[str, Path]) -> Workbook:
    path = Path(path)
    workbook = parse_fixture(path.read_text(encoding="utf-8"), source=str(path))
    logger.debug("fixture_loaded", path=str(path), sheets=len(workbook.sheets))
    return workbook


def _dump_cell(cell: Cell) -> Dict[str, object]:
    entry: Dict[str, object] = {}
    if cell.kind is CellKind.FORMULA:
        entry["f"] = cell.formula
        if cell.is_array:
            entry["array"] = True
    elif cell.kind is CellKind.ERROR:
        entry["e"] = cell.value
    elif cell.kind is not CellKind.EMPTY:
        entry["v"] = cell.value
    if cell.style_id:
        entry["style"] = cell.style_id
    if cell.comment is not None:
        entry["comment"] = cell.comment
    return entry


def _dump_style(style: StyleSignature) -> Dict[str, object]:
    name, size, bold, italic = style.font_key
    entry: Dict[str, object] = {}
    if style.fill_color is not None:
        entry["fill"] = style.fill_color
    font = {k: v for k, v in (("name", name), ("size", size)) if v is not None}
    if bold:
        font["bold"] = True
    if italic:
        font["italic"] = True
    if font:
        entry["font"] = font
    if style.number_format != "General":
        entry["numfmt"] = style.number_format
    if style.border_key:
        entry["border"] = style.border_key
    return entry


def dump_fixture(workbook: Workbook) -> str:
    """Обратная операция к load_fixture: стабильный порядок ключей"""
    sheets = []
    for sheet in workbook.sheets:
        entry: Dict[str, object] = {"name": sheet.name}
        if sheet.pane_state.is_set:
            entry["panes"] = sheet.pane_state.model_dump()
        if sheet.validations:
            entry["validations"] = [
                {k: v for k, v in (("range", d.ref), ("kind", d.kind), ("prompt", d.prompt))
                 if v is not None}
                for d in sheet.validations
            ]
        entry["cells"] = {
            sheet.cells[key].coordinate: _dump_cell(sheet.cells[key])
            for key in sorted(sheet.cells)
        }
        sheets.append(entry)

    names: Dict[str, object] = {}
    for dn in workbook.defined_names:
        item = dn.target if dn.scope is None else {"ref": dn.target, "scope": dn.scope}
        if dn.name in names:
            previous = names[dn.name]
            previous = previous if isinstance(previous, list) else [_as_scoped(previous)]
            names[dn.name] = previous + [_as_scoped(item)]
        else:
            names[dn.name] = item

    document = {
        "source": workbook.source_path,
        "sheets": sheets,
        "names": names,
        "styles": [_dump_style(s) for s in workbook.style_table],
    }
    if workbook.control_parts:
        document["controls"] = workbook.control_parts
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _as_scoped(item: object) -> Dict[str, object]:
    if isinstance(item, dict):
        return item
    return {"ref": item, "scope": None}
