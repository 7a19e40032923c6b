"""
Загрузка книг: .xlsx/.xlsm и JSON-фикстуры
"""
from pathlib import Path
from typing import Union

from sheetcheck.exceptions import UnsupportedFeature
from sheetcheck.schemas.workbook import Workbook
from sheetcheck.services.workbook.fixture import dump_fixture, load_fixture, parse_fixture
from sheetcheck.services.workbook.ranges import parse_sqref, sqref_contains, used_range
from sheetcheck.services.workbook.xlsx import load_xlsx

XLSX_SUFFIXES = (".xlsx", ".xlsm")


def load_workbook(path: Union[str, Path]) -> Workbook:
    """Выбор загрузчика по расширению файла"""
    suffix = Path(path).suffix.lower()
    if suffix in XLSX_SUFFIXES:
        return load_xlsx(path)
    if suffix == ".json":
        return load_fixture(path)
    raise UnsupportedFeature(f"file type {suffix or '(none)'} is not supported; "
                             "use .xlsx, .xlsm or a .json fixture")


__all__ = [
    "load_workbook", "load_xlsx", "load_fixture", "parse_fixture", "dump_fixture",
    "used_range", "parse_sqref", "sqref_contains",
]
