"""
Реестр вопросов, веса, ответы эксперта и подсчёт оценок

Оценка категории: 10 × Σ(вес × балл) / Σ(вес) по вопросам категории; общая
оценка считается тем же отношением по всем вопросам. Арифметика точная, на Fraction.
"""
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Union

import structlog
from pydantic import ValidationError

from sheetcheck.exceptions import (
    ConfigError,
    NonPositiveWeight,
    OverlayBadVerdict,
    OverlayUnknownQuestion,
    UnknownQuestion,
)
from sheetcheck.schemas.analysis import QUESTION_IDS, Finding, VerdictKind, canonical_qualifier
from sheetcheck.schemas.checklist import (
    Answer,
    AnswerSource,
    Assessment,
    Category,
    Checklist,
    HumanAnswer,
    Question,
    QuestionMode,
    ScoreCard,
)

logger = structlog.get_logger(__name__)

D, S, M, SA, F, SK = (
    Category.DOCUMENTATION, Category.STRUCTURE, Category.MANAGEMENT,
    Category.SAFETY, Category.FORMATTING, Category.SKILLS,
)
AUTO, MANUAL, HYBRID = QuestionMode.AUTO, QuestionMode.MANUAL, QuestionMode.HYBRID

QUESTION_TABLE = (
    ("Q1", D, "Is there any technical description available?", 20, MANUAL),
    ("Q2", D, "Is there any user description available?", 15, HYBRID),
    ("Q3", S, "Are the sheets grouped by function?", 20, MANUAL),
    ("Q4", S, "Is the naming of the worksheets understandable?", 5, AUTO),
    ("Q5", S, "Are calculations separated from input?", 15, AUTO),
    ("Q6", M, "Are all variables placed together?", 10, AUTO),
    ("Q7", M, "Is there a clear distinction between input and output?", 10, AUTO),
    ("Q8", M, "The output is compact and clear?", 10, MANUAL),
    ("Q9", M, "Are valid Excel ranges used?", 10, AUTO),
    ("Q10", M, "Are the input cells logically grouped?", 10, AUTO),
    ("Q11", SA, "Is normalization used on the variables?", 20, AUTO),
    ("Q12", SA, "In which way will the user selection be processed?", 15, AUTO),
    ("Q13", F, "Are the input cells formatted consequently?", 10, AUTO),
    ("Q14", F, "Are the output cells formatted consequently?", 10, AUTO),
    ("Q15", F, "Are the other cells formatted consequently?", 10, AUTO),
    ("Q16", F, "In which way will the user be supported?", 15, AUTO),
    ("Q17", SK, "Is array functionality used in the model?", 20, AUTO),
    ("Q18", SK, "Does the model support windows for the output?", 15, AUTO),
    ("Q19", SK, "Are names used in the model?", 15, AUTO),
    ("Q20", SK, "Are names separated in categories?", 10, AUTO),
    ("Q21", SK, "Are the names consistently composed?", 5, AUTO),
    ("Q22", SK, "Are the names consistently used?", 5, AUTO),
    ("Q23", SK, "Are (complex) single sided functions used in the model?", 10, AUTO),
    ("Q24", SK, "Does the model have nested functions?", 15, AUTO),
    ("Q25", SK, "Does the model have links towards other cells?", 10, AUTO),
    ("Q26", SK, "Does the model have absolute links or names towards other cells?", 5, AUTO),
)

CATEGORY_RATIONALE = {
    D: "Technical and user documentation keep a model usable when its author is gone.",
    S: "Sheets grouped and named by purpose, with input apart from calculation.",
    M: "Inputs and outputs are easy to find, and changes stay local.",
    SA: "Constants are stored once and user choices are validated.",
    F: "Consistent formatting and in-cell help guide the user.",
    SK: "Use of advanced constructs shows the builder's skill.",
}

OVERLAY_VERDICTS = {
    "yes": VerdictKind.YES,
    "no": VerdictKind.NO,
    "na": VerdictKind.NA,
    "n/a": VerdictKind.NA,
    "qualified": VerdictKind.QUALIFIED,
}
OVERLAY_KEYS = {"verdict", "text", "credit", "note"}

Number = Union[Fraction, float, int]


def default_checklist() -> Checklist:
    """26 вопросов с исходными весами (сумма 315)"""
    return Checklist(questions=[
        Question(id=qid, category=category, text=text, weight=weight, mode=mode)
        for qid, category, text, weight, mode in QUESTION_TABLE
    ])


def apply_weights(checklist: Checklist, overrides: Mapping[str, object]) -> Checklist:
    """Переопределение весов; категории и тексты не меняются"""
    for qid, weight in overrides.items():
        if qid not in QUESTION_IDS:
            raise UnknownQuestion(qid)
        if isinstance(weight, bool) or not isinstance(weight, (int, float)) or weight <= 0:
            raise NonPositiveWeight(qid, weight)
    return Checklist(questions=[
        q.model_copy(update={"weight": float(overrides[q.id])}) if q.id in overrides else q
        for q in checklist.questions
    ])


def _read_json(path: Path, what: str) -> object:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read {what} {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{what} {path}: invalid JSON at line {e.lineno}: {e.msg}") from e


def load_weights(path: Union[str, Path, None], base: Optional[Checklist] = None) -> Checklist:
    """Чек-лист с весами из JSON {"Q24": 30, ...}; без файла остаются исходные веса"""
    checklist = base or default_checklist()
    if path is None:
        return checklist
    path = Path(path)
    raw = _read_json(path, "weights file")
    if not isinstance(raw, dict):
        raise ConfigError(f"weights file {path}: expected a JSON object")
    checklist = apply_weights(checklist, raw)
    logger.info("weights_loaded", path=str(path), overridden=sorted(raw),
                total=checklist.total_weight)
    return checklist


# Ответы эксперта

def parse_overlay(raw: object) -> Dict[str, HumanAnswer]:
    if not isinstance(raw, dict):
        raise OverlayBadVerdict("answers file must be a JSON object keyed by question id")
    answers = {}
    for qid in sorted(raw, key=lambda q: QUESTION_IDS.index(q) if q in QUESTION_IDS else -1):
        if qid not in QUESTION_IDS:
            raise OverlayUnknownQuestion(qid)
        entry = raw[qid]
        if not isinstance(entry, dict):
            raise OverlayBadVerdict(f"{qid}: expected an object with a 'verdict'")
        extra = set(entry) - OVERLAY_KEYS
        if extra:
            raise OverlayBadVerdict(f"{qid}: unexpected keys {', '.join(sorted(extra))}")
        verdict = OVERLAY_VERDICTS.get(str(entry.get("verdict", "")).strip().lower())
        if verdict is None:
            raise OverlayBadVerdict(f"{qid}: unknown verdict {entry.get('verdict')!r}")
        credit = entry.get("credit")
        if credit is not None and (isinstance(credit, bool)
                                   or not isinstance(credit, (int, float))):
            raise OverlayBadVerdict(f"{qid}: credit must be a number in [0, 1]")
        text = entry.get("text")
        if isinstance(text, str):
            text = canonical_qualifier(text) or text
        try:
            answers[qid] = HumanAnswer(
                verdict=verdict,
                qualifier=text,
                credit=credit,
                note=entry.get("note"),
            )
        except ValidationError as e:
            raise OverlayBadVerdict(f"{qid}: {e.errors()[0]['msg']}") from e
    return answers


def load_overlay(path: Union[str, Path]) -> Dict[str, HumanAnswer]:
    """Ответы эксперта из JSON {"Q1": {"verdict": "Yes", "note": "..."}}"""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read answers file {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise OverlayBadVerdict(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    return parse_overlay(raw)


def dump_overlay(answers: Mapping[str, HumanAnswer]) -> str:
    document = {}
    for qid in QUESTION_IDS:
        if qid not in answers:
            continue
        answer = answers[qid]
        entry: Dict[str, object] = {
            "verdict": "NA" if answer.verdict is VerdictKind.NA else answer.verdict.value
        }
        if answer.qualifier is not None:
            entry["text"] = answer.qualifier
        if answer.credit is not None:
            entry["credit"] = answer.credit
        if answer.note:
            entry["note"] = answer.note
        document[qid] = entry
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def merge_answers(findings: Sequence[Finding],
                  overlay: Optional[Mapping[str, HumanAnswer]] = None) -> Assessment:
    """Ответы эксперта побеждают; NeedsHuman без ответа становится No с пометкой"""
    overlay = overlay or {}
    for qid in overlay:
        if qid not in QUESTION_IDS:
            raise OverlayUnknownQuestion(qid)

    answers: Dict[str, Answer] = {}
    for finding in findings:
        qid = finding.question_id
        human = overlay.get(qid)
        if human is not None:
            answers[qid] = Answer(
                question_id=qid,
                verdict=human.verdict,
                qualifier=human.qualifier,
                credit=human.resolved_credit,
                source=AnswerSource.HUMAN,
                evidence=finding.evidence,
                confidence=finding.confidence,
                summary=finding.summary,
                note=human.note,
            )
        elif finding.verdict is VerdictKind.NEEDS_HUMAN:
            answers[qid] = Answer(
                question_id=qid,
                verdict=VerdictKind.NO,
                credit=0.0,
                source=AnswerSource.AUTO,
                evidence=finding.evidence,
                confidence=finding.confidence,
                summary=finding.summary,
                unresolved=True,
            )
        else:
            answers[qid] = Answer(
                question_id=qid,
                verdict=finding.verdict,
                qualifier=finding.qualifier,
                credit=finding.credit,
                source=AnswerSource.AUTO,
                evidence=finding.evidence,
                confidence=finding.confidence,
                summary=finding.summary,
            )
    return Assessment(answers=answers)


# Подсчёт оценок

def _ratio(assessment: Assessment, questions: Sequence[Question]) -> Fraction:
    total = sum((Fraction(q.weight) for q in questions), Fraction(0))
    if total == 0:
        return Fraction(0)
    earned = sum(
        (Fraction(q.weight) * Fraction(assessment.answer(q.id).credit) for q in questions),
        Fraction(0),
    )
    return 10 * earned / total


def score_category(assessment: Assessment, category: Category,
                   checklist: Optional[Checklist] = None) -> Fraction:
    """Точная оценка категории в [0, 10]"""
    checklist = checklist or default_checklist()
    return _ratio(assessment, checklist.by_category(category))


def overall_score(assessment: Assessment, checklist: Optional[Checklist] = None) -> Fraction:
    checklist = checklist or default_checklist()
    return _ratio(assessment, checklist.questions)


def score_overall(assessment: Assessment, checklist: Optional[Checklist] = None) -> ScoreCard:
    checklist = checklist or default_checklist()
    earned = sum(
        (Fraction(q.weight) * Fraction(assessment.answer(q.id).credit)
         for q in checklist.questions),
        Fraction(0),
    )
    return ScoreCard(
        category_scores={
            c: float(score_category(assessment, c, checklist)) for c in Category
        },
        overall=float(overall_score(assessment, checklist)),
        earned_weight=float(earned),
        total_weight=checklist.total_weight,
        category_weights={c: checklist.category_weight(c) for c in Category},
    )


def round_score(value: Number) -> float:
    """Округление до одного знака, половина вверх (4.25 → 4.3)"""
    exact = Fraction(repr(value)) if isinstance(value, float) else Fraction(value)
    tenths = math.floor(exact * 10 + Fraction(1, 2))
    return tenths / 10
