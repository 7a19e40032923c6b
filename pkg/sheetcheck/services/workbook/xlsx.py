"""
Загрузка книг .xlsx/.xlsm через openpyxl

Перед разбором пакет проверяется вручную (ZIP, часть книги, XML листов), чтобы
ошибки были привязаны к конкретному листу. Диаграммы, VBA и сводные таблицы
пропускаются молча.
"""
import colorsys
import posixpath
import warnings
import zipfile
from datetime import date, datetime, time, timedelta
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union
from xml.etree import ElementTree as ET

import openpyxl
import structlog
from openpyxl.styles.colors import COLOR_INDEX
from openpyxl.utils.datetime import to_excel
from openpyxl.worksheet.formula import ArrayFormula, DataTableFormula
from pydantic import ValidationError

from sheetcheck.exceptions import (
    MalformedSheetXml,
    MissingWorkbookPart,
    NotAZipArchive,
    UnsupportedFeature,
)
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
    Workbook,
)
from sheetcheck.services.workbook.names import missing_target_sheets, sort_names
from sheetcheck.services.workbook.ranges import bounding_rect, parse_sqref

logger = structlog.get_logger(__name__)

WORKBOOK_CONTENT_TYPES = {
    "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml",
    "application/vnd.openxmlformats-officedocument.spreadsheetml.template.main+xml",
    "application/vnd.ms-excel.sheet.macroEnabled.main+xml",
    "application/vnd.ms-excel.template.macroEnabled.main+xml",
}
CONTENT_TYPES_NS = "{http://schemas.openxmlformats.org/package/2006/content-types}"
STRICT_NS = "{http://purl.oclc.org/ooxml/spreadsheetml/main}"
MAIN_NS = "{http://schemas.openxmlformats.org/spreadsheetml/2006/main}"
REL_NS = "{http://schemas.openxmlformats.org/officeDocument/2006/relationships}"
PACKAGE_REL_NS = "{http://schemas.openxmlformats.org/package/2006/relationships}"
DRAWING_NS = "{http://schemas.openxmlformats.org/drawingml/2006/main}"
WORKSHEET_REL_TYPE = (
    "http://schemas.openxmlformats.org/officeDocument/2006/relationships/worksheet"
)
CONTROL_PART_PREFIXES = ("xl/ctrlProps/", "xl/activeX/")

# Порядок цветов темы в clrScheme и порядок индексов, которыми на них ссылаются ячейки
THEME_SCHEME_ORDER = (
    "dk1", "lt1", "dk2", "lt2", "accent1", "accent2", "accent3",
    "accent4", "accent5", "accent6", "hlink", "folHlink",
)
THEME_INDEX_ORDER = (
    "lt1", "dk1", "lt2", "dk2", "accent1", "accent2", "accent3",
    "accent4", "accent5", "accent6", "hlink", "folHlink",
)

VALIDATION_KINDS = {"list": "list", "whole": "whole", "decimal": "decimal"}


# Проверка пакета

def _workbook_part(archive: zipfile.ZipFile, path: str) -> str:
    try:
        root = ET.fromstring(archive.read("[Content_Types].xml"))
    except KeyError:
        raise MissingWorkbookPart(path, "no [Content_Types].xml in package")
    except ET.ParseError as e:
        raise MissingWorkbookPart(path, f"unreadable [Content_Types].xml: {e}")

    for override in root.iter(f"{CONTENT_TYPES_NS}Override"):
        if override.get("ContentType") in WORKBOOK_CONTENT_TYPES:
            part = override.get("PartName", "").lstrip("/")
            if part in archive.namelist():
                return part
    raise MissingWorkbookPart(path)


def _sheet_parts(archive: zipfile.ZipFile, workbook_part: str) -> List[Tuple[str, str]]:
    """(имя листа, часть пакета) для рабочих листов в порядке книги"""
    try:
        root = ET.fromstring(archive.read(workbook_part))
    except ET.ParseError as e:
        raise UnsupportedFeature(f"unreadable workbook part: {e}")
    if root.tag.startswith(STRICT_NS):
        raise UnsupportedFeature("Strict Open XML workbooks are not supported")

    folder = posixpath.dirname(workbook_part)
    rels_part = posixpath.join(folder, "_rels", posixpath.basename(workbook_part) + ".rels")
    targets: Dict[str, str] = {}
    try:
        rels = ET.fromstring(archive.read(rels_part))
    except (KeyError, ET.ParseError):
        rels = None
    if rels is not None:
        for rel in rels.iter(f"{PACKAGE_REL_NS}Relationship"):
            if rel.get("Type") != WORKSHEET_REL_TYPE:
                continue
            target = rel.get("Target", "")
            if target.startswith("/"):
                resolved = target.lstrip("/")
            else:
                resolved = posixpath.normpath(posixpath.join(folder, target))
            targets[rel.get("Id", "")] = resolved

    parts = []
    for sheet in root.iter(f"{MAIN_NS}sheet"):
        rel_id = sheet.get(f"{REL_NS}id")
        if rel_id in targets:
            parts.append((sheet.get("name", ""), targets[rel_id]))
    return parts


def _check_sheet_xml(archive: zipfile.ZipFile, sheet: str, part: str) -> None:
    try:
        with archive.open(part) as stream:
            for _ in ET.iterparse(stream):
                pass
    except KeyError:
        raise MalformedSheetXml(sheet, f"part {part} is missing")
    except ET.ParseError as e:
        raise MalformedSheetXml(sheet, str(e))


# Цвета

def _argb_to_rgba(argb: str) -> str:
    # Excel игнорирует альфа-канал у заливок; приводим к непрозрачному
    return "#" + argb[-6:].upper() + "FF"


def _theme_colors(theme_xml: Optional[bytes]) -> List[Optional[str]]:
    if not theme_xml:
        return []
    try:
        root = ET.fromstring(theme_xml)
    except ET.ParseError:
        return []
    scheme = root.find(f".//{DRAWING_NS}clrScheme")
    if scheme is None:
        return []
    by_name: Dict[str, Optional[str]] = {}
    for name in THEME_SCHEME_ORDER:
        element = scheme.find(f"{DRAWING_NS}{name}")
        value = None
        if element is not None:
            srgb = element.find(f"{DRAWING_NS}srgbClr")
            sys_clr = element.find(f"{DRAWING_NS}sysClr")
            if srgb is not None:
                value = srgb.get("val")
            elif sys_clr is not None:
                value = sys_clr.get("lastClr")
        by_name[name] = value
    return [by_name.get(name) for name in THEME_INDEX_ORDER]


def apply_tint(rgb: str, tint: float) -> str:
    """Осветление/затемнение цвета темы по правилу Excel (через HLS)"""
    r, g, b = (int(rgb[i:i + 2], 16) / 255 for i in (0, 2, 4))
    h, l, s = colorsys.rgb_to_hls(r, g, b)
    if tint < 0:
        l = l * (1 + tint)
    else:
        l = l * (1 - tint) + tint
    r, g, b = colorsys.hls_to_rgb(h, l, s)
    return "".join(f"{round(c * 255):02X}" for c in (r, g, b))


class ColorResolver:
    """Приведение цветов openpyxl к '#RRGGBBAA' или 'unknown'"""

    def __init__(self, theme_xml: Optional[bytes]):
        self.theme = _theme_colors(theme_xml)

    def resolve(self, color) -> str:
        if color is None:
            return UNKNOWN_COLOR
        kind = getattr(color, "type", None)
        if kind == "rgb" and isinstance(color.rgb, str) and len(color.rgb) in (6, 8):
            return _argb_to_rgba(color.rgb)
        if kind == "indexed":
            index = color.indexed
            if 0 <= index < len(COLOR_INDEX) and len(COLOR_INDEX[index]) == 8:
                return _argb_to_rgba(COLOR_INDEX[index])
        if kind == "theme":
            index = color.theme
            if 0 <= index < len(self.theme) and self.theme[index]:
                rgb = self.theme[index]
                if color.tint:
                    rgb = apply_tint(rgb, color.tint)
                return _argb_to_rgba(rgb)
        return UNKNOWN_COLOR


# Стили

def _border_key(border) -> str:
    if border is None:
        return ""
    sides = [
        (label, getattr(getattr(border, side, None), "style", None))
        for label, side in (("l", "left"), ("r", "right"), ("t", "top"), ("b", "bottom"))
    ]
    if not any(style for _, style in sides):
        return ""
    return ";".join(f"{label}={style or ''}" for label, style in sides)


def style_signature(cell, colors: ColorResolver) -> StyleSignature:
    fill = cell.fill
    fill_color = None
    pattern = getattr(fill, "patternType", None)
    if pattern:
        fill_color = colors.resolve(fill.fgColor)
    elif fill is not None and getattr(fill, "type", None) == "gradient":
        fill_color = UNKNOWN_COLOR

    font = cell.font
    size = float(font.sz) if font is not None and font.sz is not None else None
    font_key = (
        font.name if font is not None else None,
        size,
        bool(font is not None and font.b),
        bool(font is not None and font.i),
    )
    return StyleSignature(
        fill_color=fill_color,
        font_key=font_key,
        number_format=cell.number_format or "General",
        border_key=_border_key(cell.border),
    )


class StyleTable:
    """Интернирование подписей: одинаковые стили файла → одна подпись"""

    def __init__(self, colors: ColorResolver):
        self.colors = colors
        self.signatures: List[StyleSignature] = [StyleSignature()]
        self._index: Dict[StyleSignature, int] = {StyleSignature(): 0}
        self._by_file_style: Dict[int, int] = {}

    def style_id(self, cell) -> int:
        file_style = cell.style_id
        if file_style not in self._by_file_style:
            signature = style_signature(cell, self.colors)
            if signature not in self._index:
                self._index[signature] = len(self.signatures)
                self.signatures.append(signature)
            self._by_file_style[file_style] = self._index[signature]
        return self._by_file_style[file_style]


# Ячейки

def _literal(value, epoch) -> Tuple[CellKind, object]:
    if value is None:
        return CellKind.EMPTY, None
    if isinstance(value, bool):
        return CellKind.BOOLEAN, value
    if isinstance(value, (int, float)):
        return CellKind.NUMBER, value
    if isinstance(value, (datetime, date, time, timedelta)):
        return CellKind.NUMBER, to_excel(value, epoch)
    return CellKind.TEXT, str(value)


def _formula_text(value) -> Tuple[Optional[str], bool]:
    if isinstance(value, ArrayFormula):
        text = value.text or ""
        return (text if text.startswith("=") else "=" + text), True
    if isinstance(value, DataTableFormula):
        return f"=TABLE({value.r1 or ''},{value.r2 or ''})", False
    if isinstance(value, str) and value.startswith("=") and len(value) > 1:
        return value, False
    return None, False


def _array_members(ws) -> Dict[Tuple[int, int], str]:
    """Ячейки внутри диапазонов формул массива, кроме ведущей: (row, col) → текст"""
    members: Dict[Tuple[int, int], str] = {}
    for (row, column), cell in ws._cells.items():
        if not isinstance(cell.value, ArrayFormula) or not cell.value.ref:
            continue
        text, _ = _formula_text(cell.value)
        for rect in parse_sqref(cell.value.ref):
            for r in range(rect.min_row, rect.max_row + 1):
                for c in range(rect.min_col, rect.max_col + 1):
                    if (r, c) != (row, column):
                        members[(r, c)] = text
    return members


def _cells(ws, sheet_index: int, styles: StyleTable, epoch) -> Dict[Tuple[int, int], Cell]:
    members = _array_members(ws)
    cells: Dict[Tuple[int, int], Cell] = {}
    # ws._cells: разреженное хранилище openpyxl; iter_rows создаёт пустые ячейки
    for (row, column), source in sorted(ws._cells.items()):
        comment = source.comment.text if source.comment is not None else None
        address = CellAddress(sheet_index=sheet_index, column=column, row=row)
        formula, is_array = _formula_text(source.value)
        if (row, column) in members:
            formula, is_array = members[(row, column)], True

        if formula is not None:
            kind, value = CellKind.FORMULA, None
        elif source.data_type == "e":
            kind, value = CellKind.ERROR, str(source.value)
        else:
            kind, value = _literal(source.value, epoch)

        if kind is CellKind.EMPTY and comment is None:
            continue
        cells[(row, column)] = Cell(
            address=address,
            kind=kind,
            value=value,
            formula=formula,
            is_array=is_array,
            style_id=styles.style_id(source),
            comment=comment,
        )
    return cells


def _panes(ws) -> PaneState:
    pane = ws.sheet_view.pane if ws.sheet_view is not None else None
    if pane is None:
        return PaneState()
    if pane.state in ("frozen", "frozenSplit"):
        return PaneState(state="frozen", rows=int(pane.ySplit or 0), cols=int(pane.xSplit or 0))
    return PaneState(state="split")


def _validations(ws) -> List[DataValidation]:
    result = []
    for dv in ws.data_validations.dataValidation:
        ref = str(dv.sqref)
        if not ref.strip():
            continue
        prompt = dv.prompt if dv.prompt else None
        result.append(
            DataValidation(ref=ref, kind=VALIDATION_KINDS.get(dv.type, "custom"), prompt=prompt)
        )
    return result


def _defined_names(book) -> List[DefinedName]:
    entries = [(name, dn, None) for name, dn in book.defined_names.items()]
    for ws in book.worksheets:
        entries.extend((name, dn, ws.title) for name, dn in ws.defined_names.items())
    names = []
    for name, dn, scope in entries:
        if name.startswith("_xlnm.") or dn.attr_text is None:
            continue
        names.append(DefinedName(name=name, target=dn.attr_text, scope=scope))
    return names


def load_xlsx(path: Union[str, Path]) -> Workbook:
    """Загрузка .xlsx/.xlsm в неизменяемую модель книги"""
    path = Path(path)
    source = str(path)
    if not zipfile.is_zipfile(path):
        raise NotAZipArchive(source)

    with zipfile.ZipFile(path) as archive:
        workbook_part = _workbook_part(archive, source)
        for sheet_name, part in _sheet_parts(archive, workbook_part):
            _check_sheet_xml(archive, sheet_name, part)
        control_parts = sorted(
            n for n in archive.namelist() if n.startswith(CONTROL_PART_PREFIXES)
        )

    try:
        with warnings.catch_warnings():
            # openpyxl предупреждает о расширениях, которые он не читает
            warnings.simplefilter("ignore")
            book = openpyxl.load_workbook(path, data_only=False, keep_vba=False)
    except (KeyError, ValueError, TypeError, AttributeError, IndexError, ET.ParseError) as e:
        raise UnsupportedFeature(f"cannot extract cells: {e}") from e

    styles = StyleTable(ColorResolver(getattr(book, "loaded_theme", None)))
    sheets = []
    for index, ws in enumerate(book.worksheets):
        cells = _cells(ws, index, styles, book.epoch)
        sheets.append(
            Sheet(
                name=ws.title,
                cells=cells,
                pane_state=_panes(ws),
                validations=_validations(ws),
                used_bounds=bounding_rect(cells.values()),
            )
        )
    if not sheets:
        raise MissingWorkbookPart(source, "workbook has no worksheets")

    draft = Workbook(sheets=sheets, style_table=styles.signatures, source_path=source)
    names = []
    for dn in sort_names(_defined_names(book)):
        missing = missing_target_sheets(draft, dn)
        if missing:
            logger.warning("defined_name_skipped", name=dn.name, missing_sheet=missing[0])
            continue
        names.append(dn)

    try:
        workbook = Workbook(
            sheets=sheets,
            defined_names=names,
            style_table=styles.signatures,
            source_path=source,
            control_parts=control_parts,
        )
    except ValidationError as e:
        raise UnsupportedFeature(str(e.errors()[0]["msg"])) from e

    logger.info(
        "workbook_loaded",
        path=source,
        sheets=len(workbook.sheets),
        cells=workbook.cell_count,
        styles=len(workbook.style_table),
        names=len(workbook.defined_names),
    )
    return workbook
