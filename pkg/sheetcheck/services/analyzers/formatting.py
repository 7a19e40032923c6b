"""
Оформление: Q13–Q16
"""
from collections import Counter
from typing import Sequence, Tuple

from sheetcheck.schemas.analysis import Confidence, Finding, VerdictKind
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import Cell, StyleSignature
from sheetcheck.services.analyzers.context import AnalysisContext, percent
from sheetcheck.services.analyzers.registry import rule
from sheetcheck.services.workbook.ranges import sqref_contains


def format_consistency(
    cells: Sequence[Cell],
    styles: Sequence[StyleSignature],
    threshold: float,
) -> Tuple[float, VerdictKind]:
    """Доля самой частой подписи стиля среди ячеек и вердикт по порогу"""
    if not cells:
        return 0.0, VerdictKind.NA
    counts = Counter(styles[c.style_id] for c in cells)
    dominant_share = max(counts.values()) / len(cells)
    verdict = VerdictKind.YES if dominant_share >= threshold else VerdictKind.NO
    return dominant_share, verdict


def _consistency(ctx: AnalysisContext, question_id: str, title: str,
                 *kinds: CellClass) -> Finding:
    cells = ctx.cells_of(*kinds)
    styles = ctx.workbook.style_table
    dominant_share, verdict = format_consistency(
        cells, styles, ctx.config.format_consistency_threshold
    )
    if verdict is VerdictKind.NA:
        return ctx.finding(question_id, VerdictKind.NA, confidence=Confidence.MEDIUM,
                           summary=f"the workbook has no {title} cells")
    counts = Counter(styles[c.style_id] for c in cells)
    top = max(counts.values())
    # при равенстве частот побеждает подпись, встреченная раньше
    dominant = next(styles[c.style_id] for c in cells if counts[styles[c.style_id]] == top)
    off_style = [ctx.evidence(c, "formatted differently") for c in cells
                 if styles[c.style_id] != dominant]
    return ctx.graded(
        question_id, dominant_share, verdict is VerdictKind.YES,
        evidence=off_style, confidence=Confidence.MEDIUM,
        summary=f"{percent(dominant_share)} of {title} cells share one format",
    )


@rule("Q13")
def input_formatting(ctx: AnalysisContext) -> Finding:
    return _consistency(ctx, "Q13", "input", CellClass.INPUT)


@rule("Q14")
def output_formatting(ctx: AnalysisContext) -> Finding:
    return _consistency(ctx, "Q14", "output", CellClass.OUTPUT)


@rule("Q15")
def other_formatting(ctx: AnalysisContext) -> Finding:
    return _consistency(ctx, "Q15", "calculation and label", CellClass.CALCULATION,
                        CellClass.LABEL)


@rule("Q16")
def user_support(ctx: AnalysisContext) -> Finding:
    supported = []
    for cell in ctx.cells_of(CellClass.INPUT):
        if cell.comment:
            supported.append(ctx.evidence(cell, "comment"))
            continue
        sheet = ctx.workbook.sheets[cell.address.sheet_index]
        for validation in sheet.validations:
            if validation.prompt and sqref_contains(
                validation.ref, cell.address.row, cell.address.column
            ):
                supported.append(ctx.evidence(cell, "validation prompt"))
                break
    if supported:
        return ctx.finding("Q16", VerdictKind.QUALIFIED, qualifier="In cells",
                           evidence=supported, confidence=Confidence.MEDIUM,
                           summary="input cells carry comments or prompts")
    return ctx.finding("Q16", VerdictKind.QUALIFIED, qualifier="Not", credit=0.0,
                       confidence=Confidence.MEDIUM,
                       summary="no comments or prompts on input cells")
