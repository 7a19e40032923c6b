"""
Безопасность: Q11 (нормализация констант), Q12 (выбор значений пользователем)
"""
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Set, Tuple

from sheetcheck.exceptions import FormulaError
from sheetcheck.schemas.analysis import AnalyzerConfig, Confidence, Evidence, Finding, VerdictKind
from sheetcheck.schemas.workbook import CellAddress, Workbook
from sheetcheck.services.analyzers.context import AnalysisContext, plural
from sheetcheck.services.analyzers.registry import rule
from sheetcheck.services.formula import (
    FunctionCall,
    Node,
    Paren,
    UnaryOp,
    format_number,
    node_at,
    numeric_literals,
    parse,
    signed_value,
)

Violation = Tuple[float, List[CellAddress]]


def _is_flag_argument(ast: Node, path: Tuple[int, ...], config: AnalyzerConfig) -> bool:
    """Литерал является позиционным флагом функции (третий аргумент VLOOKUP и т.п.)"""
    depth = len(path) - 1
    while depth >= 0:
        parent = node_at(ast, path[:depth])
        if isinstance(parent, FunctionCall):
            positions = config.flag_argument_positions.get(parent.name, ())
            return path[depth] + 1 in positions
        if not (isinstance(parent, Paren) or
                isinstance(parent, UnaryOp) and parent.op in ("+", "-")):
            return False
        depth -= 1
    return False


def _parsed_formulas(workbook: Workbook) -> Iterable[Tuple[CellAddress, Node]]:
    for cell in workbook.formula_cells():
        try:
            yield cell.address, parse(cell.formula)
        except FormulaError:
            continue


def detect_normalization_violations(
    workbook: Workbook,
    config: AnalyzerConfig,
    formulas: Optional[Iterable[Tuple[CellAddress, Node]]] = None,
) -> List[Violation]:
    """Числовые литералы, повторённые в нескольких формулах

    Группы по точному значению с учётом знака; исключения и флаговые аргументы
    не считаются. Порядок: по размеру группы по убыванию, затем по значению.
    """
    exemptions = set(config.literal_exemptions)
    groups: Dict[float, Set[CellAddress]] = defaultdict(set)
    for address, ast in formulas if formulas is not None else _parsed_formulas(workbook):
        for _, path in numeric_literals(ast):
            value = signed_value(ast, path)
            if value in exemptions or _is_flag_argument(ast, path, config):
                continue
            groups[value].add(address)

    violations = [
        (value, sorted(cells, key=lambda a: (a.sheet_index, a.row, a.column)))
        for value, cells in groups.items()
        if len(cells) >= config.normalization_min_repeats
    ]
    violations.sort(key=lambda item: (-len(item[1]), item[0]))
    return violations


@rule("Q11")
def normalization(ctx: AnalysisContext) -> Finding:
    violations = detect_normalization_violations(
        ctx.workbook, ctx.config, ((cell.address, ast) for cell, ast in ctx.formulas)
    )
    if not violations:
        return ctx.finding("Q11", VerdictKind.YES, confidence=Confidence.MEDIUM,
                           summary="no hardcoded constant is repeated across formulas")
    evidence = []
    for value, addresses in violations:
        for address in addresses:
            cell = ctx.workbook.cell_at(address)
            evidence.append(ctx.evidence(cell, f"literal {format_number(value)} "
                                               f"repeated in {len(addresses)} formulas"))
    values = ", ".join(format_number(v) for v, _ in violations[:5])
    return ctx.finding("Q11", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                       summary=f"{plural(len(violations), 'constant')} hardcoded repeatedly: "
                               f"{values}")


@rule("Q12")
def user_selection(ctx: AnalysisContext) -> Finding:
    lists, others = [], []
    for index, sheet in enumerate(ctx.workbook.sheets):
        for validation in sheet.validations:
            target = lists if validation.kind == "list" else others
            target.append(ctx.sheet_evidence(index, f"{validation.kind} validation on "
                                                    f"{validation.ref}"))
    controls = [
        Evidence(note=f"control part {part}") for part in ctx.workbook.control_parts
    ]
    if controls or lists:
        return ctx.finding("Q12", VerdictKind.QUALIFIED, qualifier="Controls",
                           evidence=controls + lists,
                           summary="selection controls or drop-down lists are used")
    if others:
        return ctx.finding("Q12", VerdictKind.QUALIFIED, qualifier="Validation",
                           evidence=others, summary="data validations restrict input")
    return ctx.finding("Q12", VerdictKind.NO, summary="no validations or controls found")
