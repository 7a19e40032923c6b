"""
Тесты отчётов и сводной таблицы корпуса
"""
import json
from datetime import datetime, timezone

import pytest

from sheetcheck.exceptions import MixedConfig
from sheetcheck.schemas.analysis import QUESTION_IDS, AnalyzerConfig
from sheetcheck.services.assessment import WorkbookAssessor
from sheetcheck.services.checklist import apply_weights
from sheetcheck.services.reporting import (
    HINTS,
    build_report,
    config_fingerprint,
    corpus_frame,
    corpus_table,
    parse_report,
    render,
    render_corpus,
    render_json,
    render_markdown,
)
from tests.conftest import make_assessment


@pytest.fixture
def clean_report(clean_workbook):
    return WorkbookAssessor().assess(clean_workbook).report


@pytest.fixture
def messy_report(messy_workbook):
    return WorkbookAssessor().assess(messy_workbook).report


def test_all_yes_report(clean_workbook, checklist):
    report = build_report(clean_workbook, make_assessment(yes=QUESTION_IDS), checklist,
                          AnalyzerConfig())
    text = render_markdown(report)

    assert "Overall: 10.0 (earned 315 of 315 weight points)" in text
    assert "Hint:" not in text
    assert "## Unresolved questions" not in text
    assert report.overall_rounded == 10.0


def test_report_contents(clean_report):
    assert clean_report.workbook.path == "clean.json"
    assert clean_report.workbook.sheet_count == 4
    assert [q.id for q in clean_report.questions] == list(QUESTION_IDS)
    assert clean_report.unresolved == ["Q1", "Q3", "Q8"]
    assert clean_report.overall_rounded == 8.4
    assert clean_report.question("Q2").answer == "User sheets"
    assert clean_report.question("Q1").answer == "No (unresolved)"
    assert [c.rounded for c in clean_report.categories] == [4.3, 5.0, 8.0, 10.0, 10.0, 10.0]


def test_json_round_trip(clean_workbook):
    stamp = datetime(2024, 5, 1, 12, 30, tzinfo=timezone.utc)
    report = WorkbookAssessor().assess(clean_workbook, generated_at=stamp).report
    text = render_json(report)

    assert parse_report(text) == report
    assert json.loads(text)["schema_version"] == "1.0"
    assert "Generated: 2024-05-01T12:30:00+00:00" in render_markdown(report)


def test_untimed_reports_are_identical(clean_workbook):
    first = render_json(WorkbookAssessor().assess(clean_workbook).report)
    second = render_json(WorkbookAssessor().assess(clean_workbook).report)

    assert first == second
    assert "generated_at" not in json.loads(first)


def test_hint_sits_in_its_category(messy_report):
    """Подсказка Q11 выводится в разделе Safety"""
    text = render_markdown(messy_report)
    hint = "Hint: " + HINTS["Q11"]

    assert text.index("## Safety: 0.0") < text.index(hint) < text.index("## Formatting")
    assert HINTS["Q20"] not in text


def test_unresolved_section(messy_report):
    text = render_markdown(messy_report)

    assert "## Unresolved questions" in text
    assert "- Q1. Is there any technical description available?" in text
    assert "Overall: 0.6 " in text


def test_fingerprint_follows_weights_and_config(checklist):
    base = config_fingerprint(checklist, AnalyzerConfig())

    assert base == config_fingerprint(checklist, AnalyzerConfig())
    assert base != config_fingerprint(apply_weights(checklist, {"Q24": 30}), AnalyzerConfig())
    assert base != config_fingerprint(checklist, AnalyzerConfig(continuous_credit=True))


def test_unknown_format(clean_report):
    with pytest.raises(ValueError):
        render(clean_report, "html")


def test_corpus_table(clean_report, messy_report):
    table = corpus_table([clean_report, messy_report])
    frame = corpus_frame(table)

    assert table.columns == ["clean", "messy"]
    assert frame.shape == (33, 2)
    assert list(frame.index[-7:]) == [
        "Documentation", "Structure", "Management", "Safety", "Formatting", "Skills", "Overall",
    ]
    assert table.answers["Q2"] == ["User sheets", "No (unresolved)"]
    assert table.scores["Overall"] == [8.4, 0.6]


def test_corpus_csv(clean_report, messy_report):
    lines = render_corpus(corpus_table([clean_report, messy_report]), "csv").splitlines()

    assert lines[0] == '"Item","clean","messy"'
    assert lines[1] == '"Q1","No (unresolved)","No (unresolved)"'
    assert lines[-1] == '"Overall","8.4","0.6"'
    assert len(lines) == 34


def test_corpus_markdown(clean_report, messy_report):
    text = render_corpus(corpus_table([clean_report, messy_report]), "markdown")

    assert "## Answers" in text and "## Scores" in text
    assert "| Overall | 8.4 | 0.6 |" in text


def test_corpus_rejects_mixed_configurations(clean_workbook, checklist, clean_report):
    heavier = WorkbookAssessor(apply_weights(checklist, {"Q24": 30}))
    other = heavier.assess(clean_workbook).report

    with pytest.raises(MixedConfig):
        corpus_table([clean_report, other])
    with pytest.raises(ValueError):
        corpus_table([])


def test_colliding_stems_use_full_paths(clean_report):
    def moved(path):
        identity = clean_report.workbook.model_copy(update={"path": path})
        return clean_report.model_copy(update={"workbook": identity})

    table = corpus_table([moved("a/model.xlsx"), moved("b/model.xlsx")])

    assert table.columns == ["a/model.xlsx", "b/model.xlsx"]
