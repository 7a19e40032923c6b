"""
Структура: Q3, Q4, Q5
"""
from typing import List, Tuple

from sheetcheck.schemas.analysis import AnalyzerConfig, Confidence, Evidence, Finding, VerdictKind
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import Workbook
from sheetcheck.services.analyzers.context import AnalysisContext, percent, share
from sheetcheck.services.analyzers.registry import rule


def sheet_naming(workbook: Workbook,
                 config: AnalyzerConfig) -> Tuple[float, VerdictKind, List[Evidence]]:
    """Доля листов с собственными именами (не 'Sheet1', 'sheet 13')"""
    pattern = config.sheet_name_regex
    defaults = [s.name for s in workbook.sheets if pattern.search(s.name)]
    fraction = share(len(workbook.sheets) - len(defaults), len(workbook.sheets))
    verdict = VerdictKind.YES if fraction >= config.naming_threshold else VerdictKind.NO
    evidence = [Evidence(sheet=name, note="default sheet name") for name in defaults]
    return fraction, verdict, evidence


@rule("Q3")
def sheets_grouped(ctx: AnalysisContext) -> Finding:
    evidence = []
    for index, counts in enumerate(ctx.sheet_classes):
        working = {k: v for k, v in counts.items() if k is not CellClass.LABEL}
        if not working:
            continue
        dominant, top = max(sorted(working.items()), key=lambda item: item[1])
        homogeneity = share(top, sum(working.values()))
        evidence.append(ctx.sheet_evidence(index, f"{percent(homogeneity)} {dominant.value}"))
    return ctx.finding("Q3", VerdictKind.NEEDS_HUMAN, evidence=evidence,
                       confidence=Confidence.LOW,
                       summary="per-sheet class homogeneity shown as a hint")


@rule("Q4")
def worksheet_naming(ctx: AnalysisContext) -> Finding:
    fraction, verdict, evidence = sheet_naming(ctx.workbook, ctx.config)
    summary = f"{percent(fraction)} of sheets have custom names"
    return ctx.graded("Q4", fraction, verdict is VerdictKind.YES, evidence=evidence,
                      summary=summary)


@rule("Q5")
def calculations_separated(ctx: AnalysisContext) -> Finding:
    evidence = []
    for index, counts in enumerate(ctx.sheet_classes):
        inputs, calcs = counts[CellClass.INPUT], counts[CellClass.CALCULATION]
        if inputs and calcs:
            evidence.append(ctx.sheet_evidence(
                index, f"{inputs} input and {calcs} calculation cells on one sheet"))
    if evidence:
        return ctx.finding("Q5", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                           summary=f"{len(evidence)} sheet(s) mix input and calculation")
    return ctx.finding("Q5", VerdictKind.YES, confidence=Confidence.MEDIUM,
                       summary="no sheet mixes input and calculation cells")
