"""
Сквозные тесты: сравнение аккуратной и небрежной книг, скорость, воспроизводимость
"""
import json
import time

import pytest

from sheetcheck.services.assessment import WorkbookAssessor
from sheetcheck.services.reporting import render_json, render_markdown
from sheetcheck.services.workbook import parse_fixture

SHEETS = 10
ROWS = 500


@pytest.fixture(scope="module")
def large_workbook():
    """10 листов по 1000 ячеек: столбец значений и столбец формул со ссылками"""
    sheets = []
    for index in range(SHEETS):
        cells = {}
        for row in range(1, ROWS + 1):
            cells[f"A{row}"] = {"v": row * 1.5}
            if index and row % 10 == 0:
                formula = f"=SUM(A{row - 9}:A{row})+'Part {index - 1}'!B{row}"
            else:
                formula = f"=ROUND(A{row}*in_rate,2)"
            cells[f"B{row}"] = {"f": formula}
        sheets.append({"name": f"Part {index}", "cells": cells})
    sheets[0]["cells"]["C1"] = {"v": 0.2}
    document = {"sheets": sheets, "names": {"in_rate": "'Part 0'!$C$1"}}
    return parse_fixture(json.dumps(document), source="large.json")


def test_clean_beats_messy(clean_workbook, messy_workbook):
    assessor = WorkbookAssessor()
    clean = assessor.assess(clean_workbook).report
    messy = assessor.assess(messy_workbook).report
    wins = [
        c.category for c, m in zip(clean.categories, messy.categories) if c.score > m.score
    ]

    assert clean.overall > messy.overall
    assert len(wins) >= 4


def test_large_workbook_is_fast(large_workbook):
    """Оценка книги на 10 000 ячеек укладывается в секунду"""
    assert large_workbook.cell_count == SHEETS * ROWS * 2 + 1

    started = time.perf_counter()
    result = WorkbookAssessor().assess(large_workbook)
    elapsed = time.perf_counter() - started

    assert elapsed < 1.0
    assert not result.graph.diagnostics
    assert result.report.question("Q25").answer == "Yes"


def test_assessment_is_deterministic(messy_workbook):
    first = WorkbookAssessor().assess(messy_workbook).report
    second = WorkbookAssessor().assess(messy_workbook).report

    assert render_json(first) == render_json(second)
    assert render_markdown(first) == render_markdown(second)
