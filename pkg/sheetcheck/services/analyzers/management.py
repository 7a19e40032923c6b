"""
Управление данными: Q6–Q10
"""
from collections import defaultdict
from typing import Dict, List

from sheetcheck.schemas.analysis import Confidence, Finding, VerdictKind
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import Cell, CellKind
from sheetcheck.services.analyzers.context import (
    AnalysisContext,
    bounding,
    percent,
    plural,
    share,
)
from sheetcheck.services.analyzers.registry import rule
from sheetcheck.services.dataflow import cell_key
from sheetcheck.services.formula import CellRef, ErrorLit, RangeRef, format_reference, walk
from sheetcheck.services.formula.lexer import MAX_COLUMN, MAX_ROW
from sheetcheck.services.workbook.names import is_external


@rule("Q6")
def variables_together(ctx: AnalysisContext) -> Finding:
    inputs = ctx.cells_of(CellClass.INPUT)
    if not inputs:
        return ctx.finding("Q6", VerdictKind.NA, confidence=Confidence.MEDIUM,
                           summary="the workbook has no input cells")
    clustered = sum(len(b) for b in ctx.input_blocks if len(b) >= 2)
    fraction = share(clustered, len(inputs))
    stray = [ctx.evidence(b[0], "isolated input") for b in ctx.input_blocks if len(b) == 1]
    return ctx.graded(
        "Q6", fraction, fraction >= ctx.config.variable_cluster_share,
        evidence=stray, confidence=Confidence.MEDIUM,
        summary=f"{percent(fraction)} of input cells sit in blocks of two or more",
    )


@rule("Q7")
def input_output_distinct(ctx: AnalysisContext) -> Finding:
    by_sheet: Dict[int, Dict[CellClass, List[Cell]]] = defaultdict(lambda: defaultdict(list))
    for kind in (CellClass.INPUT, CellClass.OUTPUT):
        for cell in ctx.cells_of(kind):
            by_sheet[cell.address.sheet_index][kind].append(cell)

    evidence = []
    for index in sorted(by_sheet):
        groups = by_sheet[index]
        if not groups[CellClass.INPUT] or not groups[CellClass.OUTPUT]:
            continue
        r1, c1, r2, c2 = bounding(groups[CellClass.INPUT])
        r3, c3, r4, c4 = bounding(groups[CellClass.OUTPUT])
        if not (r2 < r3 or r4 < r1 or c2 < c3 or c4 < c1):
            evidence.append(ctx.sheet_evidence(index, "input and output areas overlap"))
    if evidence:
        summary = f"inputs and outputs interleave on {plural(len(evidence), 'sheet')}"
        return ctx.finding("Q7", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                           summary=summary)
    return ctx.finding("Q7", VerdictKind.YES, confidence=Confidence.MEDIUM,
                       summary="input and output areas are disjoint on every sheet")


@rule("Q8")
def output_compact(ctx: AnalysisContext) -> Finding:
    outputs = ctx.cells_of(CellClass.OUTPUT)
    per_sheet: Dict[int, List[Cell]] = defaultdict(list)
    for cell in outputs:
        per_sheet[cell.address.sheet_index].append(cell)
    evidence = []
    for index in sorted(per_sheet):
        cells = per_sheet[index]
        r1, c1, r2, c2 = bounding(cells)
        area = (r2 - r1 + 1) * (c2 - c1 + 1)
        span = format_reference(RangeRef(CellRef(col=c1, row=r1), CellRef(col=c2, row=r2)))
        density = percent(share(len(cells), area))
        note = f"{plural(len(cells), 'output')} in {span} ({density} dense)"
        evidence.append(ctx.sheet_evidence(index, note))
    return ctx.finding("Q8", VerdictKind.NEEDS_HUMAN, evidence=evidence, confidence=Confidence.LOW,
                       summary=f"{plural(len(outputs), 'output cell')} on "
                               f"{plural(len(per_sheet), 'sheet')}")


def _range_problem(ctx: AnalysisContext, ref: RangeRef, context: str) -> str:
    start, end = ref.start, ref.end
    if start.row is not None and end.row is not None and start.row > end.row:
        return f"range {format_reference(ref)} is not normalized"
    if start.col is not None and end.col is not None and start.col > end.col:
        return f"range {format_reference(ref)} is not normalized"
    sheet = ref.sheet or context
    if is_external(sheet):
        return ""
    if ctx.workbook.sheet_index(sheet) is None:
        return f"range {format_reference(ref)} points to a missing sheet"
    for endpoint in (start, end):
        if (endpoint.row or 1) > MAX_ROW or (endpoint.col or 1) > MAX_COLUMN:
            return f"range {format_reference(ref)} exceeds the sheet grid"
    return ""


def _self_reference(ctx: AnalysisContext, cell: Cell) -> bool:
    key = cell_key(cell.address)
    graph = ctx.graph.graph
    if graph.has_edge(key, key):
        return True
    for node in graph.successors(key):
        if len(node) != 3:
            rect = ctx.graph.regions[node]
            if node[1] == key[0] and rect.contains(key[1], key[2]):
                return True
    return False


@rule("Q9")
def valid_ranges(ctx: AnalysisContext) -> Finding:
    broken_names = {
        dn.name.upper() for dn in ctx.workbook.defined_names
        if "#REF!" in dn.target.upper()
    }
    evidence = []
    for cell, ast in ctx.formulas:
        context = ctx.sheet_name(cell.address.sheet_index)
        problem = ""
        for node, _ in walk(ast):
            if isinstance(node, ErrorLit) and node.code == "#REF!":
                problem = "contains #REF!"
            elif isinstance(node, RangeRef):
                problem = _range_problem(ctx, node, context)
            if problem:
                break
        if not problem:
            uses = ctx.graph.name_uses.get(cell_key(cell.address), [])
            broken = [dn.name for dn in uses if dn.name.upper() in broken_names]
            if broken:
                problem = f"uses name {broken[0]} whose target is #REF!"
        if not problem and _self_reference(ctx, cell):
            problem = "references its own cell"
        if problem:
            evidence.append(ctx.evidence(cell, problem))

    # формулы, которые не разобрались, но явно содержат #REF!
    parsed = {cell.address for cell, _ in ctx.formulas}
    for cell in ctx.workbook.formula_cells():
        if cell.address not in parsed and "#REF!" in cell.formula.upper():
            evidence.append(ctx.evidence(cell, "contains #REF!"))

    if evidence:
        return ctx.finding("Q9", VerdictKind.NO, evidence=evidence,
                           summary=f"{plural(len(evidence), 'formula')} with invalid ranges")
    return ctx.finding("Q9", VerdictKind.YES, summary="all ranges are valid")


def _has_label_neighbour(ctx: AnalysisContext, block: List[Cell]) -> bool:
    members = {(c.address.row, c.address.column) for c in block}
    for cell in block:
        sheet = ctx.workbook.sheets[cell.address.sheet_index]
        row, col = cell.address.row, cell.address.column
        for position in ((row, col - 1), (row - 1, col)):
            if position in members:
                continue
            neighbour = sheet.cells.get(position)
            if (
                neighbour is not None
                and neighbour.kind is CellKind.TEXT
                and ctx.class_of(neighbour) is CellClass.LABEL
            ):
                return True
    return False


@rule("Q10")
def inputs_grouped(ctx: AnalysisContext) -> Finding:
    if not ctx.input_blocks:
        return ctx.finding("Q10", VerdictKind.NA, confidence=Confidence.MEDIUM,
                           summary="the workbook has no input cells")
    unlabeled = [b for b in ctx.input_blocks if not _has_label_neighbour(ctx, b)]
    if unlabeled:
        return ctx.finding(
            "Q10", VerdictKind.NO, confidence=Confidence.MEDIUM,
            evidence=[ctx.evidence(b[0], f"block of {len(b)} without a label") for b in unlabeled],
            summary=f"{plural(len(unlabeled), 'input block')} lack a label to the left or above",
        )
    return ctx.finding("Q10", VerdictKind.YES, confidence=Confidence.MEDIUM,
                       summary=f"all {plural(len(ctx.input_blocks), 'input block')} are labelled")

