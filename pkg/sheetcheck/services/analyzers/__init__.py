"""
Анализаторы чек-листа: по правилу на каждый из 26 вопросов
"""
from typing import Dict, List, Optional

import structlog

from sheetcheck.schemas.analysis import QUESTION_IDS, AnalyzerConfig, Finding
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import CellAddress, Workbook
from sheetcheck.services.analyzers.context import AnalysisContext
from sheetcheck.services.analyzers.formatting import format_consistency
from sheetcheck.services.analyzers.registry import get_rule, registered_questions, rule
from sheetcheck.services.analyzers.safety import detect_normalization_violations
from sheetcheck.services.analyzers.skills import naming_convention
from sheetcheck.services.analyzers.structure import sheet_naming
from sheetcheck.services.dataflow import DependencyGraph

logger = structlog.get_logger(__name__)


def evaluate(
    question_id: str,
    workbook: Workbook,
    graph: DependencyGraph,
    classes: Dict[CellAddress, CellClass],
    config: Optional[AnalyzerConfig] = None,
) -> Finding:
    """Автоматический ответ на один вопрос; UnknownQuestion для чужих id"""
    question_rule = get_rule(question_id)
    context = AnalysisContext(workbook, graph, classes, config or AnalyzerConfig())
    return question_rule(context)


def evaluate_all(
    workbook: Workbook,
    graph: DependencyGraph,
    classes: Dict[CellAddress, CellClass],
    config: Optional[AnalyzerConfig] = None,
) -> List[Finding]:
    """Ответы на все вопросы с общим контекстом (кэши разделяются между правилами)"""
    context = AnalysisContext(workbook, graph, classes, config or AnalyzerConfig())
    findings = [get_rule(q)(context) for q in QUESTION_IDS]
    logger.debug(
        "workbook_analyzed",
        source=workbook.source_path,
        needs_human=[f.question_id for f in findings if f.credit is None],
    )
    return findings


__all__ = [
    "AnalysisContext", "evaluate", "evaluate_all", "rule", "registered_questions",
    "detect_normalization_violations", "format_consistency", "naming_convention", "sheet_naming",
]
