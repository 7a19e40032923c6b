"""
Отчёты: JSON и markdown по одной книге, сводные таблицы по корпусу
"""
import hashlib
import json
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd
import structlog

from sheetcheck import __version__
from sheetcheck.exceptions import MixedConfig
from sheetcheck.schemas.analysis import QUESTION_IDS, AnalyzerConfig, VerdictKind
from sheetcheck.schemas.checklist import Assessment, Category, Checklist
from sheetcheck.schemas.report import (
    OVERALL,
    CategoryScore,
    CorpusTable,
    QuestionReport,
    Report,
    WorkbookIdentity,
)
from sheetcheck.schemas.workbook import Workbook
from sheetcheck.services.checklist import (
    CATEGORY_RATIONALE,
    round_score,
    score_category,
    score_overall,
)
from sheetcheck.utils.export import frame_to_csv, frame_to_markdown, markdown_table

logger = structlog.get_logger(__name__)

HINTS = {
    "Q1": "Add a sheet or document that explains how the model computes its results.",
    "Q2": "Add a sheet with instructions for the people who enter data and read results.",
    "Q3": "Give each sheet one role: input, calculation, output or documentation.",
    "Q4": "Rename default sheets such as Sheet1 after what they contain.",
    "Q5": "Move input cells to sheets that hold no formulas.",
    "Q6": "Keep the model's variables together in one block.",
    "Q7": "Keep input cells and result cells in separate areas.",
    "Q8": "Gather the results in one compact area.",
    "Q9": "Repair #REF! errors and references that point outside the grid or to missing sheets.",
    "Q10": "Put a text label left of or above every block of input cells.",
    "Q11": "Store each constant once and reference it instead of typing the number into formulas.",
    "Q12": "Restrict user choices with drop-down lists, data validation or form controls.",
    "Q13": "Give all input cells the same format.",
    "Q14": "Give all output cells the same format.",
    "Q15": "Format calculation and label cells consistently.",
    "Q16": "Attach comments or validation prompts to input cells.",
    "Q17": "Use array formulas where one formula can cover a whole range.",
    "Q18": "Freeze or split panes on output sheets so headers stay visible.",
    "Q19": "Define names for key cells and ranges and use them in formulas.",
    "Q20": "Group names by a common prefix such as in_, calc_ or out_.",
    "Q21": "Compose all names in one convention (snake_case, CamelCase or UPPER).",
    "Q22": "Refer to named cells by their name everywhere.",
    "Q23": "Lookup and conditional aggregation functions can replace long manual formulas.",
    "Q24": "Combine functions where one formula step depends on another.",
    "Q25": "Link cells through references instead of copying values.",
    "Q26": "Anchor references to fixed cells with $ or names.",
}


def config_fingerprint(checklist: Checklist, config: AnalyzerConfig) -> str:
    """SHA-256 канонического JSON весов и настроек анализаторов"""
    canonical = json.dumps(
        {"weights": checklist.weights, "analyzer": config.model_dump(mode="json")},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_report(
    workbook: Workbook,
    assessment: Assessment,
    checklist: Checklist,
    config: AnalyzerConfig,
    diagnostics_count: int = 0,
    generated_at: Optional[datetime] = None,
) -> Report:
    card = score_overall(assessment, checklist)
    questions = []
    for q in checklist.questions:
        answer = assessment.answer(q.id)
        questions.append(QuestionReport(
            id=q.id,
            category=q.category,
            question=q.text,
            weight=q.weight,
            verdict=answer.verdict,
            qualifier=answer.qualifier,
            answer=answer.text,
            credit=answer.credit,
            source=answer.source,
            confidence=answer.confidence,
            unresolved=answer.unresolved,
            summary=answer.summary,
            note=answer.note,
            evidence=answer.evidence,
            hint=HINTS[q.id],
        ))
    categories = []
    for category in Category:
        exact = score_category(assessment, category, checklist)
        categories.append(CategoryScore(
            category=category,
            weight=checklist.category_weight(category),
            score=float(exact),
            rounded=round_score(exact),
        ))
    return Report(
        tool_version=__version__,
        generated_at=generated_at,
        config_fingerprint=config_fingerprint(checklist, config),
        workbook=WorkbookIdentity(
            path=workbook.source_path,
            sheet_count=len(workbook.sheets),
            cell_count=workbook.cell_count,
        ),
        questions=questions,
        categories=categories,
        overall=card.overall,
        overall_rounded=round_score(card.overall),
        earned_weight=card.earned_weight,
        total_weight=card.total_weight,
        unresolved=assessment.unresolved,
        diagnostics_count=diagnostics_count,
    )


# Рендеринг

def render_json(report: Report) -> str:
    document = report.model_dump(mode="json", exclude_none=True)
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_report(text: str) -> Report:
    return Report.model_validate_json(text)


def _number(value: float) -> str:
    return f"{value:g}"


def _question_section(q: QuestionReport) -> List[str]:
    lines = [f"### {q.id}. {q.question} (weight {_number(q.weight)})", ""]
    source = "human" if q.source.value == "human" else f"auto, {q.confidence.value} confidence"
    lines.append(f"Answer: **{q.answer}** ({source})")
    if q.summary:
        lines.append(f"Finding: {q.summary}")
    if q.note:
        lines.append(f"Note: {q.note}")
    if q.evidence:
        lines.append("")
        for item in q.evidence:
            place = f"`{item.location}` " if item.location else ""
            lines.append(f"- {place}{item.note}".rstrip())
    if q.credit < 1 and q.verdict is not VerdictKind.NA:
        lines.extend(["", f"Hint: {q.hint}"])
    lines.append("")
    return lines


def render_markdown(report: Report) -> str:
    identity = report.workbook
    lines = [
        f"# Maintainability report: {identity.path or 'workbook'}",
        "",
        f"Sheets: {identity.sheet_count}, cells: {identity.cell_count}",
        f"Tool version: {report.tool_version}, config {report.config_fingerprint[:12]}",
    ]
    if report.generated_at is not None:
        lines.append(f"Generated: {report.generated_at.isoformat()}")
    if report.diagnostics_count:
        lines.append(f"Formula diagnostics: {report.diagnostics_count}")
    lines.extend([
        "",
        f"Overall: {report.overall_rounded:.1f} "
        f"(earned {_number(report.earned_weight)} of {_number(report.total_weight)} weight points)",
        "",
        markdown_table(
            ["Category", "Weight", "Score"],
            [(c.category.value, _number(c.weight), f"{c.rounded:.1f}") for c in report.categories],
        ),
        "",
    ])
    if report.unresolved:
        lines.extend(["## Unresolved questions", "",
                      "These were scored as No; answer them with --answers or --interactive.", ""])
        for qid in report.unresolved:
            lines.append(f"- {qid}. {report.question(qid).question}")
        lines.append("")
    for score in report.categories:
        lines.extend([
            f"## {score.category.value}: {score.rounded:.1f}",
            "",
            f"_{CATEGORY_RATIONALE[score.category]}_",
            "",
        ])
        for q in report.questions:
            if q.category is score.category:
                lines.extend(_question_section(q))
    return "\n".join(lines).rstrip("\n") + "\n"


def render(report: Report, fmt: str = "markdown") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt in ("md", "markdown"):
        return render_markdown(report)
    raise ValueError(f"unknown report format {fmt!r}")


# Сводная таблица корпуса

def _column_names(reports: Sequence[Report]) -> List[str]:
    stems = [Path(r.workbook.path).stem or f"workbook{i + 1}" for i, r in enumerate(reports)]
    if len(set(stems)) == len(stems):
        return stems
    return [r.workbook.path or stem for r, stem in zip(reports, stems)]


def corpus_table(reports: Sequence[Report]) -> CorpusTable:
    """Ответы и оценки по книгам в порядке входа; веса и настройки обязаны совпадать"""
    if not reports:
        raise ValueError("corpus table needs at least one report")
    fingerprints = {r.config_fingerprint for r in reports}
    if len(fingerprints) > 1:
        raise MixedConfig(fingerprints)
    answers = {qid: [r.question(qid).answer for r in reports] for qid in QUESTION_IDS}
    scores = {c.value: [r.category(c).rounded for r in reports] for c in Category}
    scores[OVERALL] = [r.overall_rounded for r in reports]
    logger.info("corpus_table_built", workbooks=len(reports))
    return CorpusTable(
        columns=_column_names(reports),
        config_fingerprint=reports[0].config_fingerprint,
        answers=answers,
        scores=scores,
    )


def corpus_frame(table: CorpusTable) -> pd.DataFrame:
    """Одна таблица: 26 строк ответов, затем 7 строк оценок"""
    rows = {qid: values for qid, values in table.answers.items()}
    rows.update({name: [f"{v:.1f}" for v in values] for name, values in table.scores.items()})
    frame = pd.DataFrame.from_dict(rows, orient="index", columns=table.columns)
    frame.index.name = "Item"
    return frame


def render_corpus(table: CorpusTable, fmt: str = "markdown") -> str:
    frame = corpus_frame(table)
    if fmt == "csv":
        return frame_to_csv(frame.reset_index())
    if fmt == "json":
        return json.dumps(table.model_dump(mode="json"), indent=2, ensure_ascii=False) + "\n"
    answers = frame.loc[list(table.answers)]
    scores = frame.loc[list(table.scores)]
    return "\n".join([
        "## Answers", "", frame_to_markdown(answers), "",
        "## Scores", "", frame_to_markdown(scores), "",
    ])


__all__ = [
    "HINTS", "build_report", "config_fingerprint", "corpus_frame", "corpus_table",
    "parse_report", "render", "render_corpus", "render_json", "render_markdown",
]
