"""
Тесты реестра вопросов, весов, ответов эксперта и подсчёта оценок
"""
import json
from fractions import Fraction

import pytest
from pydantic import ValidationError

from sheetcheck.exceptions import (
    ConfigError,
    NonPositiveWeight,
    OverlayBadVerdict,
    OverlayUnknownQuestion,
    UnknownQuestion,
)
from sheetcheck.schemas.analysis import QUESTION_IDS, VerdictKind
from sheetcheck.schemas.checklist import AnswerSource, Category, HumanAnswer, QuestionMode
from sheetcheck.services.analyzers import evaluate_all
from sheetcheck.services.checklist import (
    apply_weights,
    dump_overlay,
    load_overlay,
    load_weights,
    merge_answers,
    overall_score,
    parse_overlay,
    round_score,
    score_category,
    score_overall,
)
from sheetcheck.services.dataflow import build_graph, classify
from tests.conftest import make_assessment

CATEGORY_ORDER = list(Category)
STRUCTURE = ("Q3", "Q4", "Q5")
MANAGEMENT = ("Q6", "Q7", "Q8", "Q9", "Q10")

# Опубликованная сводная таблица: ответы и ожидаемые оценки
# (Documentation, Structure, Management, Safety, Formatting, Skills, Overall)
PUBLISHED_ROWS = [
    ("Posey_Q", dict(yes=("Q6", "Q7", "Q9", "Q25")), (0, 0, 6, 0, 0, 0.9, 1.3)),
    ("FinalBudget", dict(yes=("Q4", "Q6", "Q7", "Q9", "Q25")), (0, 1.3, 6, 0, 0, 0.9, 1.4)),
    ("CHOFAS", dict(yes=STRUCTURE + MANAGEMENT + ("Q23", "Q24", "Q25", "Q26")),
     (0, 10, 10, 0, 0, 3.6, 4.1)),
    ("FinFun", dict(yes=("Q6", "Q7", "Q8", "Q9", "Q23", "Q24", "Q25", "Q26"), na=("Q10",)),
     (0, 0, 8, 0, 0, 3.6, 2.5)),
    ("karen", dict(yes=("Q4", "Q7", "Q9", "Q23", "Q24", "Q25", "Q26")),
     (0, 1.3, 4, 0, 0, 3.6, 2.1)),
    ("9-Grade", dict(yes=("Q4", "Q6", "Q7", "Q8", "Q9", "Q25")), (0, 1.3, 8, 0, 0, 0.9, 1.7)),
    ("Solutions_week_3", dict(yes=("Q4", "Q6", "Q7", "Q9", "Q18", "Q25")),
     (0, 1.3, 6, 0, 0, 2.3, 1.9)),
    ("grain_inventory", dict(yes=("Q6", "Q7", "Q9", "Q13", "Q14", "Q15", "Q25")),
     (0, 0, 6, 0, 6.7, 0.9, 2.2)),
    ("Equity2", dict(yes=("Q4",) + MANAGEMENT + ("Q12", "Q17", "Q23", "Q24", "Q25", "Q26")),
     (0, 1.3, 10, 4.3, 0, 5.5, 4.1)),
    ("occupancy", dict(yes=("Q6", "Q7", "Q9", "Q10", "Q24"), na=("Q1",),
                       qualified={"Q2": "User sheets"}),
     (4.3, 0, 8, 0, 0, 1.4, 2.2)),
    ("BTVSCCG", dict(yes=("Q4", "Q6", "Q7", "Q9", "Q10", "Q25")), (0, 1.3, 8, 0, 0, 0.9, 1.7)),
]


def test_default_weights(checklist):
    assert checklist.weight("Q1") == 20
    assert checklist.weight("Q24") == 15
    assert checklist.total_weight == 315
    assert [checklist.category_weight(c) for c in CATEGORY_ORDER] == [35, 40, 50, 35, 45, 110]


def test_question_modes(checklist):
    manual = [q.id for q in checklist.questions if q.mode is QuestionMode.MANUAL]

    assert manual == ["Q1", "Q3", "Q8"]
    assert checklist.question("Q2").mode is QuestionMode.HYBRID


def test_load_weights_overrides(tmp_path):
    path = tmp_path / "weights.json"
    path.write_text(json.dumps({"Q24": 30}), encoding="utf-8")
    checklist = load_weights(path)

    assert checklist.weight("Q24") == 30
    assert checklist.total_weight == 330
    assert checklist.question("Q24").category is Category.SKILLS


@pytest.mark.parametrize("overrides, error", [
    ({"Q24": 0}, NonPositiveWeight),
    ({"Q24": -5}, NonPositiveWeight),
    ({"Q24": True}, NonPositiveWeight),
    ({"Q24": "heavy"}, NonPositiveWeight),
    ({"Q27": 5}, UnknownQuestion),
])
def test_bad_weights(checklist, overrides, error):
    with pytest.raises(error):
        apply_weights(checklist, overrides)


@pytest.mark.parametrize("text", ["[1, 2]", "{not json"])
def test_weights_file_must_be_an_object(tmp_path, text):
    path = tmp_path / "weights.json"
    path.write_text(text, encoding="utf-8")

    with pytest.raises(ConfigError):
        load_weights(path)


def test_missing_weights_file(tmp_path):
    with pytest.raises(ConfigError):
        load_weights(tmp_path / "absent.json")


@pytest.mark.parametrize("name, answers, expected", PUBLISHED_ROWS,
                         ids=[row[0] for row in PUBLISHED_ROWS])
def test_published_rows(checklist, name, answers, expected):
    """Оценки опубликованных моделей воспроизводятся по их ответам"""
    assessment = make_assessment(**answers)
    scores = [round_score(score_category(assessment, c, checklist)) for c in CATEGORY_ORDER]
    scores.append(round_score(overall_score(assessment, checklist)))

    assert scores == pytest.approx(list(expected), abs=0.15)


@pytest.mark.parametrize("name, answers, expected", PUBLISHED_ROWS,
                         ids=[row[0] for row in PUBLISHED_ROWS])
def test_overall_is_weighted_mean_of_categories(checklist, name, answers, expected):
    assessment = make_assessment(**answers)
    weighted = sum(
        score_category(assessment, c, checklist) * Fraction(checklist.category_weight(c))
        for c in CATEGORY_ORDER
    )

    assert overall_score(assessment, checklist) * Fraction(checklist.total_weight) == weighted


def test_spot_checks(checklist):
    chofas = make_assessment(yes=STRUCTURE + MANAGEMENT + ("Q23", "Q24", "Q25", "Q26"))
    occupancy = make_assessment(na=("Q1",), qualified={"Q2": "User sheets"})

    assert score_category(chofas, Category.SKILLS, checklist) == Fraction(40, 11)
    assert overall_score(chofas, checklist) == Fraction(1300, 315)
    assert score_category(occupancy, Category.DOCUMENTATION, checklist) == Fraction(150, 35)


def test_not_applicable_counts_as_no(checklist):
    """N/A даёт ноль, но вес остаётся в знаменателе"""
    with_na = make_assessment(yes=("Q6",), na=("Q7", "Q8"))
    with_no = make_assessment(yes=("Q6",))

    assert score_category(with_na, Category.MANAGEMENT) == 2
    assert score_overall(with_na, checklist) == score_overall(with_no, checklist)


def test_partial_credit(checklist):
    assessment = make_assessment(credits={"Q24": 0.5})

    assert score_category(assessment, Category.SKILLS, checklist) == Fraction(75, 110)


def test_score_card(checklist):
    card = score_overall(make_assessment(yes=MANAGEMENT), checklist)

    assert card.category_scores[Category.MANAGEMENT] == 10
    assert card.earned_weight == 50
    assert card.total_weight == 315
    assert round_score(card.overall) == 1.6


def test_all_yes_scores_ten(checklist):
    card = score_overall(make_assessment(yes=QUESTION_IDS), checklist)

    assert card.overall == 10
    assert set(card.category_scores.values()) == {10}


def test_reweighting_changes_scores(checklist):
    heavier = apply_weights(checklist, {"Q24": 30})
    assessment = make_assessment(yes=("Q24",))

    assert score_category(assessment, Category.SKILLS, heavier) == Fraction(300, 125)
    assert overall_score(assessment, heavier) == Fraction(300, 330)


@pytest.mark.parametrize("value, expected", [
    (4.25, 4.3),
    (4.249, 4.2),
    (0.05, 0.1),
    (Fraction(45, 315) * 10, 1.4),
    (Fraction(1, 20), 0.1),
    (10, 10.0),
    (0, 0.0),
])
def test_round_half_up(value, expected):
    assert round_score(value) == expected


def test_parse_overlay():
    overlay = parse_overlay({
        "Q1": {"verdict": "Yes", "note": "Guide explains the formulas"},
        "Q8": {"verdict": "n/a"},
        "Q16": {"verdict": "Qualified", "text": "In cells"},
        "Q24": {"verdict": "yes", "credit": 0.5},
    })

    assert overlay["Q1"].verdict is VerdictKind.YES
    assert overlay["Q1"].note == "Guide explains the formulas"
    assert overlay["Q8"].verdict is VerdictKind.NA
    assert overlay["Q16"].resolved_credit == 1.0
    assert overlay["Q24"].resolved_credit == 0.5
    assert parse_overlay(json.loads(dump_overlay(overlay))) == overlay


@pytest.mark.parametrize("raw, error", [
    ({"Q99": {"verdict": "Yes"}}, OverlayUnknownQuestion),
    ({"Q1": {"verdict": "maybe"}}, OverlayBadVerdict),
    ({"Q1": "Yes"}, OverlayBadVerdict),
    ({"Q1": {"verdict": "Yes", "why": "because"}}, OverlayBadVerdict),
    ({"Q1": {"verdict": "Yes", "credit": "high"}}, OverlayBadVerdict),
    ({"Q1": {"verdict": "No", "credit": 1}}, OverlayBadVerdict),
    ({"Q2": {"verdict": "Qualified"}}, OverlayBadVerdict),
    ({"Q16": {"verdict": "Qualified", "text": "whatever I like"}}, OverlayBadVerdict),
    ([], OverlayBadVerdict),
])
def test_bad_overlays(raw, error):
    with pytest.raises(error):
        parse_overlay(raw)


def test_load_overlay_errors(tmp_path):
    broken = tmp_path / "model.answers.json"
    broken.write_text("{", encoding="utf-8")

    with pytest.raises(ConfigError):
        load_overlay(tmp_path / "absent.answers.json")
    with pytest.raises(OverlayBadVerdict):
        load_overlay(broken)


@pytest.fixture
def clean_findings(clean_workbook):
    graph = build_graph(clean_workbook)
    return evaluate_all(clean_workbook, graph, classify(clean_workbook, graph))


def test_merge_without_overlay_marks_unresolved(clean_findings):
    assessment = merge_answers(clean_findings)

    assert assessment.unresolved == ["Q1", "Q3", "Q8"]
    assert assessment.answer("Q1").verdict is VerdictKind.NO
    assert assessment.answer("Q1").credit == 0
    assert assessment.answer("Q1").text == "No (unresolved)"
    assert assessment.answer("Q4").source is AnswerSource.AUTO


def test_human_answers_win(clean_findings):
    overlay = parse_overlay({
        "Q1": {"verdict": "Yes"},
        "Q4": {"verdict": "No", "note": "names are cryptic"},
    })
    assessment = merge_answers(clean_findings, overlay)

    assert assessment.unresolved == ["Q3", "Q8"]
    assert assessment.answer("Q1").source is AnswerSource.HUMAN
    assert assessment.answer("Q4").verdict is VerdictKind.NO
    assert assessment.answer("Q4").note == "names are cryptic"
    assert assessment.answer("Q4").evidence == clean_findings[3].evidence


def test_clean_workbook_scores(clean_findings, checklist):
    assessment = merge_answers(clean_findings)
    scores = [round_score(score_category(assessment, c, checklist)) for c in CATEGORY_ORDER]

    assert scores == [4.3, 5.0, 8.0, 10.0, 10.0, 10.0]
    assert overall_score(assessment, checklist) == Fraction(265 * 10, 315)


def test_overlay_qualifier_is_matched_case_insensitively():
    """Качественный ответ приводится к написанию из словаря"""
    overlay = parse_overlay({"Q12": {"verdict": "Qualified", "text": " controls "}})

    assert overlay["Q12"].qualifier == "Controls"
    assert overlay["Q12"].resolved_credit == 1.0


def test_qualifier_outside_vocabulary_is_rejected():
    with pytest.raises(ValidationError):
        HumanAnswer(verdict=VerdictKind.QUALIFIED, qualifier="Sometimes")
