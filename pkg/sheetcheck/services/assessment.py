"""
Основной сервис оценки книги: загрузка, граф, анализаторы, ответы эксперта, отчёт
"""
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Union

import structlog

from sheetcheck.schemas.analysis import AnalyzerConfig, Finding
from sheetcheck.schemas.checklist import Assessment, Checklist, HumanAnswer
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.report import Report
from sheetcheck.schemas.workbook import CellAddress, Workbook
from sheetcheck.services.analyzers import evaluate_all
from sheetcheck.services.checklist import default_checklist, load_overlay, merge_answers
from sheetcheck.services.dataflow import DependencyGraph, build_graph, classify
from sheetcheck.services.reporting import build_report
from sheetcheck.services.workbook import load_workbook

logger = structlog.get_logger(__name__)

OVERLAY_SUFFIX = ".answers.json"


def overlay_path(workbook_path: Union[str, Path]) -> Path:
    """Файл ответов эксперта рядом с книгой: model.xlsx -> model.answers.json"""
    path = Path(workbook_path)
    return path.with_name(path.stem + OVERLAY_SUFFIX)


@dataclass
class AssessmentResult:
    workbook: Workbook
    graph: DependencyGraph
    classes: Dict[CellAddress, CellClass]
    findings: List[Finding]
    assessment: Assessment
    report: Report
    overlay: Dict[str, HumanAnswer] = field(default_factory=dict)


class WorkbookAssessor:
    """Оценка книг по чек-листу с фиксированными весами и настройками"""

    def __init__(self, checklist: Optional[Checklist] = None,
                 config: Optional[AnalyzerConfig] = None):
        self.checklist = checklist or default_checklist()
        self.config = config or AnalyzerConfig()

    def analyze(self, workbook: Workbook):
        """Граф, классы ячеек и автоматические ответы"""
        graph = build_graph(workbook, self.config.range_expansion_limit)
        classes = classify(workbook, graph)
        findings = evaluate_all(workbook, graph, classes, self.config)
        return graph, classes, findings

    def assess(
        self,
        workbook: Workbook,
        overlay: Optional[Mapping[str, HumanAnswer]] = None,
        generated_at: Optional[datetime] = None,
    ) -> AssessmentResult:
        graph, classes, findings = self.analyze(workbook)
        return self.finish(workbook, graph, classes, findings, overlay, generated_at)

    def finish(
        self,
        workbook: Workbook,
        graph: DependencyGraph,
        classes: Dict[CellAddress, CellClass],
        findings: List[Finding],
        overlay: Optional[Mapping[str, HumanAnswer]] = None,
        generated_at: Optional[datetime] = None,
    ) -> AssessmentResult:
        """Слияние с ответами эксперта и построение отчёта"""
        overlay = dict(overlay or {})
        assessment = merge_answers(findings, overlay)
        report = build_report(
            workbook, assessment, self.checklist, self.config,
            diagnostics_count=len(graph.diagnostics),
            generated_at=generated_at,
        )
        logger.info(
            "workbook_assessed",
            source=workbook.source_path,
            overall=report.overall_rounded,
            unresolved=len(report.unresolved),
            human_answers=len(overlay),
        )
        return AssessmentResult(workbook, graph, classes, findings, assessment, report, overlay)

    def assess_path(
        self,
        path: Union[str, Path],
        overlay: Optional[Mapping[str, HumanAnswer]] = None,
        use_sidecar: bool = False,
        generated_at: Optional[datetime] = None,
    ) -> AssessmentResult:
        """Оценка файла; use_sidecar подхватывает <stem>.answers.json рядом с ним"""
        workbook = load_workbook(path)
        if overlay is None and use_sidecar:
            sidecar = overlay_path(path)
            if sidecar.is_file():
                overlay = load_overlay(sidecar)
                logger.debug("overlay_loaded", path=str(sidecar), answers=len(overlay))
        return self.assess(workbook, overlay, generated_at)
