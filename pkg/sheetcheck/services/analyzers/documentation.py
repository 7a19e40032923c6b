"""
Документация: Q1, Q2
"""
from sheetcheck.schemas.analysis import Confidence, Finding, VerdictKind
from sheetcheck.schemas.workbook import CellKind
from sheetcheck.services.analyzers.context import AnalysisContext
from sheetcheck.services.analyzers.registry import rule


def _doc_evidence(ctx: AnalysisContext):
    evidence = []
    for index in ctx.documentation_sheets:
        texts = sum(1 for c in ctx.workbook.sheets[index].non_empty_cells()
                    if c.kind is CellKind.TEXT)
        evidence.append(ctx.sheet_evidence(index, f"{texts} text cells, no formulas"))
    return evidence


@rule("Q1")
def technical_description(ctx: AnalysisContext) -> Finding:
    evidence = _doc_evidence(ctx)
    summary = (
        "possible documentation sheets found; a reviewer must judge whether they "
        "describe the model technically"
        if evidence else "no documentation sheet detected; a reviewer must answer"
    )
    return ctx.finding("Q1", VerdictKind.NEEDS_HUMAN, evidence=evidence,
                       confidence=Confidence.LOW, summary=summary)


@rule("Q2")
def user_description(ctx: AnalysisContext) -> Finding:
    evidence = _doc_evidence(ctx)
    if evidence:
        return ctx.finding("Q2", VerdictKind.QUALIFIED, qualifier="User sheets",
                           evidence=evidence, confidence=Confidence.MEDIUM,
                           summary=f"{len(evidence)} sheet(s) look like user documentation")
    return ctx.finding("Q2", VerdictKind.NEEDS_HUMAN, confidence=Confidence.LOW,
                       summary="no documentation sheet detected; a reviewer must answer")
