"""
Геометрия листа: используемый диапазон и разбор A1-диапазонов
"""
from typing import Iterable, List, Tuple

from openpyxl.utils.cell import range_boundaries

from sheetcheck.exceptions import InvalidRange
from sheetcheck.schemas.workbook import Cell, Rect, Sheet
from sheetcheck.services.formula.lexer import MAX_COLUMN, MAX_ROW


def bounding_rect(cells: Iterable[Cell]) -> Rect:
    """Наименьший прямоугольник, содержащий непустые ячейки"""
    rows: List[int] = []
    cols: List[int] = []
    for cell in cells:
        if cell.is_empty:
            continue
        rows.append(cell.address.row)
        cols.append(cell.address.column)
    if not rows:
        return Rect.empty()
    return Rect(min_row=min(rows), min_col=min(cols), max_row=max(rows), max_col=max(cols))


def used_range(sheet: Sheet) -> Rect:
    return bounding_rect(sheet.cells.values())


def parse_sqref(sqref: str) -> List[Rect]:
    """Разбор списка диапазонов через пробел ('A1:B3 D5', 'A:A', '2:4') в прямоугольники"""
    rects = []
    for part in sqref.replace(",", " ").split():
        try:
            min_col, min_row, max_col, max_row = range_boundaries(part.replace("$", ""))
        except (ValueError, TypeError) as e:
            raise InvalidRange(sqref, str(e)) from e
        # Целые столбцы и строки приходят без одной из границ
        min_col, max_col = min_col or 1, max_col or MAX_COLUMN
        min_row, max_row = min_row or 1, max_row or MAX_ROW
        rects.append(Rect(min_row=min(min_row, max_row), min_col=min(min_col, max_col),
                          max_row=max(min_row, max_row), max_col=max(min_col, max_col)))
    return rects


def sqref_contains(sqref: str, row: int, column: int) -> bool:
    return any(r.contains(row, column) for r in parse_sqref(sqref))


def coordinate_key(coordinate: str) -> Tuple[int, int]:
    """'B3' → (3, 2)"""
    min_col, min_row, _, _ = range_boundaries(coordinate.replace("$", ""))
    return min_row, min_col
