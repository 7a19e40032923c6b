"""
Цели определённых имён: разбор и разрешение относительно листа
"""
from typing import List, Optional

from sheetcheck.exceptions import FormulaError
from sheetcheck.schemas.workbook import DefinedName, Workbook
from sheetcheck.services.formula import CellRef, Node, RangeRef, parse, references


def parse_target(name: DefinedName) -> Optional[Node]:
    """Дерево цели имени или None, если текст цели не разбирается"""
    text = name.target if name.target.startswith("=") else "=" + name.target
    try:
        return parse(text)
    except FormulaError:
        return None


def default_sheet(workbook: Workbook, name: DefinedName) -> Optional[str]:
    """Лист для неквалифицированных ссылок в цели: область имени или первый лист"""
    if name.scope is not None:
        return name.scope
    return workbook.sheets[0].name if workbook.sheets else None


def is_external(sheet: Optional[str]) -> bool:
    return sheet is not None and sheet.startswith("[")


def missing_target_sheets(workbook: Workbook, name: DefinedName) -> List[str]:
    """Листы, на которые ссылается цель имени, но которых нет в книге"""
    ast = parse_target(name)
    if ast is None:
        return []
    missing = []
    for ref in references(ast):
        sheet = getattr(ref, "sheet", None)
        if isinstance(ref, (CellRef, RangeRef)) and sheet and not is_external(sheet):
            if workbook.sheet_index(sheet) is None:
                missing.append(sheet)
    return missing


def sort_names(names: List[DefinedName]) -> List[DefinedName]:
    """Канонический порядок имён: по имени, затем по области"""
    return sorted(names, key=lambda dn: (dn.name.upper(), (dn.scope or "").lower()))
