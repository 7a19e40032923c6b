"""
Общие данные для правил: классы ячеек, разобранные формулы, блоки ввода
"""
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from sheetcheck.config import settings
from sheetcheck.schemas.analysis import AnalyzerConfig, Confidence, Evidence, Finding, VerdictKind
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import Cell, CellAddress, CellKind, Workbook
from sheetcheck.services.dataflow import DependencyGraph, Key, cell_key
from sheetcheck.services.formula import Node

# Блок ввода: связная (по сторонам) группа Input-ячеек одного листа
Block = List[Cell]


@dataclass
class AnalysisContext:
    workbook: Workbook
    graph: DependencyGraph
    classes: Dict[CellAddress, CellClass]
    config: AnalyzerConfig

    def class_of(self, cell: Cell) -> CellClass:
        return self.classes.get(cell.address, CellClass.EMPTY)

    @cached_property
    def cells_by_class(self) -> Dict[CellClass, List[Cell]]:
        grouped: Dict[CellClass, List[Cell]] = defaultdict(list)
        for cell in self.workbook.iter_cells():
            grouped[self.class_of(cell)].append(cell)
        return grouped

    def cells_of(self, *kinds: CellClass) -> List[Cell]:
        cells = [c for kind in kinds for c in self.cells_by_class.get(kind, [])]
        return sorted(cells, key=lambda c: cell_key(c.address))

    @cached_property
    def sheet_classes(self) -> List[Counter]:
        """Счётчик классов непустых ячеек для каждого листа"""
        counters = [Counter() for _ in self.workbook.sheets]
        for cell in self.workbook.iter_cells():
            kind = self.class_of(cell)
            if kind is not CellClass.EMPTY:
                counters[cell.address.sheet_index][kind] += 1
        return counters

    @cached_property
    def formulas(self) -> List[Tuple[Cell, Node]]:
        """Ячейки с успешно разобранными формулами и их деревья"""
        result = []
        for key in sorted(self.graph.asts):
            cell = self.cell(key)
            if cell is not None:
                result.append((cell, self.graph.asts[key]))
        return result

    def cell(self, key: Key) -> Optional[Cell]:
        return self.workbook.sheets[key[0]].cell(key[1], key[2])

    def sheet_name(self, sheet_index: int) -> str:
        return self.workbook.sheets[sheet_index].name

    def evidence(self, cell: Cell, note: str = "") -> Evidence:
        return Evidence(sheet=self.sheet_name(cell.address.sheet_index), cell=cell.coordinate,
                        note=note)

    def sheet_evidence(self, sheet_index: int, note: str = "") -> Evidence:
        return Evidence(sheet=self.sheet_name(sheet_index), note=note)

    @cached_property
    def input_blocks(self) -> List[Block]:
        """Максимальные связные блоки Input-ячеек в порядке первой ячейки"""
        inputs = {cell_key(c.address): c for c in self.cells_of(CellClass.INPUT)}
        seen: Set[Key] = set()
        blocks: List[Block] = []
        for key in sorted(inputs):
            if key in seen:
                continue
            block, stack = [], [key]
            seen.add(key)
            while stack:
                current = stack.pop()
                block.append(inputs[current])
                sheet, row, col = current
                for neighbour in ((sheet, row - 1, col), (sheet, row + 1, col),
                                  (sheet, row, col - 1), (sheet, row, col + 1)):
                    if neighbour in inputs and neighbour not in seen:
                        seen.add(neighbour)
                        stack.append(neighbour)
            blocks.append(sorted(block, key=lambda c: cell_key(c.address)))
        return blocks

    @cached_property
    def referenced_sheets(self) -> Set[int]:
        """Листы, хотя бы одна ячейка которых упоминается в формулах"""
        sheets = {target[0] for _, target in self.graph.cell_edges()}
        sheets.update(key[0] for key in self.graph.region_members)
        return sheets

    @cached_property
    def documentation_sheets(self) -> List[int]:
        """Листы-кандидаты в документацию: много текста, нет формул и входящих ссылок"""
        candidates = []
        for index, sheet in enumerate(self.workbook.sheets):
            cells = sheet.non_empty_cells()
            text_cells = sum(1 for c in cells if c.kind is CellKind.TEXT)
            has_formulas = any(c.is_formula for c in cells)
            if (
                text_cells >= self.config.doc_sheet_min_text_cells
                and not has_formulas
                and index not in self.referenced_sheets
            ):
                candidates.append(index)
        return candidates

    @cached_property
    def used_names(self) -> List[str]:
        """Определённые имена, через которые разрешилась хотя бы одна формула"""
        names = {dn.name for uses in self.graph.name_uses.values() for dn in uses}
        return sorted(names, key=str.upper)

    def finding(
        self,
        question_id: str,
        verdict: VerdictKind,
        *,
        credit: Optional[float] = None,
        qualifier: Optional[str] = None,
        evidence: Sequence[Evidence] = (),
        confidence: Confidence = Confidence.HIGH,
        summary: str = "",
        measure: Optional[float] = None,
    ) -> Finding:
        """Finding с типовым баллом для вердикта и усечённым списком подтверждений"""
        if credit is None and verdict is not VerdictKind.NEEDS_HUMAN:
            credit = 1.0 if verdict in (VerdictKind.YES, VerdictKind.QUALIFIED) else 0.0
        return Finding(
            question_id=question_id,
            verdict=verdict,
            qualifier=qualifier,
            credit=credit,
            evidence=list(evidence)[: settings.MAX_EVIDENCE],
            confidence=confidence,
            summary=summary,
            measure=measure,
        )

    def graded(
        self,
        question_id: str,
        fraction: float,
        passed: bool,
        **kwargs,
    ) -> Finding:
        """Вердикт по доле; в режиме continuous_credit балл равен самой доле"""
        if self.config.continuous_credit:
            verdict = VerdictKind.YES if fraction > 0 else VerdictKind.NO
            credit = fraction if fraction > 0 else 0.0
        else:
            verdict = VerdictKind.YES if passed else VerdictKind.NO
            credit = None
        return self.finding(question_id, verdict, credit=credit, measure=fraction, **kwargs)


def share(part: int, whole: int) -> float:
    return part / whole if whole else 0.0


def percent(value: float) -> str:
    return f"{value * 100:.0f}%"


def plural(count: int, word: str) -> str:
    return f"{count} {word}" if count == 1 else f"{count} {word}s"


def bounding(cells: Iterable[Cell]) -> Tuple[int, int, int, int]:
    rows = [c.address.row for c in cells]
    cols = [c.address.column for c in cells]
    return min(rows), min(cols), max(rows), max(cols)
