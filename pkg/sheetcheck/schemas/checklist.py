"""
Pydantic схемы чек-листа: вопросы, ответы, оценка
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from sheetcheck.schemas.analysis import (
    QUESTION_IDS,
    Confidence,
    Evidence,
    VerdictKind,
    check_credit,
    verdict_text,
)
from sheetcheck.schemas.workbook import FrozenModel


class Category(str, Enum):
    DOCUMENTATION = "Documentation"
    STRUCTURE = "Structure"
    MANAGEMENT = "Management"
    SAFETY = "Safety"
    FORMATTING = "Formatting"
    SKILLS = "Skills"


class QuestionMode(str, Enum):
    AUTO = "auto"
    MANUAL = "manual"
    HYBRID = "hybrid"


class Question(BaseModel):
    model_config = FrozenModel

    id: str
    category: Category
    text: str
    weight: float = Field(..., gt=0)
    mode: QuestionMode


class Checklist(BaseModel):
    """Все 26 вопросов с действующими весами"""
    model_config = FrozenModel

    questions: List[Question]

    @model_validator(mode="after")
    def complete(self) -> "Checklist":
        ids = [q.id for q in self.questions]
        if sorted(ids) != sorted(QUESTION_IDS) or len(set(ids)) != len(ids):
            raise ValueError("checklist must hold Q1..Q26 exactly once")
        return self

    def question(self, question_id: str) -> Question:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise KeyError(question_id)

    def weight(self, question_id: str) -> float:
        return self.question(question_id).weight

    def by_category(self, category: Category) -> List[Question]:
        return [q for q in self.questions if q.category is category]

    def category_weight(self, category: Category) -> float:
        return sum(q.weight for q in self.by_category(category))

    @property
    def total_weight(self) -> float:
        return sum(q.weight for q in self.questions)

    @property
    def weights(self) -> Dict[str, float]:
        return {q.id: q.weight for q in self.questions}


class AnswerSource(str, Enum):
    AUTO = "auto"
    HUMAN = "human"


class HumanAnswer(BaseModel):
    """Ответ эксперта из файла --answers или интерактивного опроса"""
    model_config = FrozenModel

    verdict: VerdictKind
    qualifier: Optional[str] = None
    credit: Optional[float] = Field(None, ge=0.0, le=1.0)
    note: Optional[str] = None

    @model_validator(mode="after")
    def answerable(self) -> "HumanAnswer":
        if self.verdict is VerdictKind.NEEDS_HUMAN:
            raise ValueError("a human answer cannot be NeedsHuman")
        check_credit(self.verdict, self.qualifier, self.resolved_credit)
        return self

    @property
    def resolved_credit(self) -> float:
        if self.credit is not None:
            return self.credit
        if self.verdict in (VerdictKind.NO, VerdictKind.NA):
            return 0.0
        if self.verdict is VerdictKind.QUALIFIED and self.qualifier == "Not":
            return 0.0
        return 1.0


class Answer(BaseModel):
    """Итоговый ответ на вопрос после слияния с ответами эксперта"""
    model_config = FrozenModel

    question_id: str
    verdict: VerdictKind
    qualifier: Optional[str] = None
    credit: float = Field(..., ge=0.0, le=1.0)
    source: AnswerSource
    evidence: List[Evidence] = Field(default_factory=list)
    confidence: Confidence = Confidence.HIGH
    summary: str = ""
    note: Optional[str] = None
    unresolved: bool = False

    @model_validator(mode="after")
    def consistent(self) -> "Answer":
        if self.verdict is VerdictKind.NEEDS_HUMAN:
            raise ValueError("answers are always resolved; use unresolved=True")
        check_credit(self.verdict, self.qualifier, self.credit)
        return self

    @property
    def text(self) -> str:
        shown = verdict_text(self.verdict, self.qualifier)
        return f"{shown} (unresolved)" if self.unresolved else shown


class Assessment(BaseModel):
    model_config = FrozenModel

    answers: Dict[str, Answer]

    @model_validator(mode="after")
    def all_questions(self) -> "Assessment":
        missing = [q for q in QUESTION_IDS if q not in self.answers]
        if missing:
            raise ValueError(f"assessment lacks answers for {', '.join(missing)}")
        for key, answer in self.answers.items():
            if key != answer.question_id:
                raise ValueError(f"answer for {answer.question_id} filed under {key}")
        return self

    def answer(self, question_id: str) -> Answer:
        return self.answers[question_id]

    @property
    def unresolved(self) -> List[str]:
        return [q for q in QUESTION_IDS if self.answers[q].unresolved]


class ScoreCard(BaseModel):
    """Оценки категорий и общая оценка по шкале 0–10 (до округления)"""
    model_config = FrozenModel

    category_scores: Dict[Category, float]
    overall: float = Field(..., ge=0.0, le=10.0)
    earned_weight: float
    total_weight: float
    category_weights: Dict[Category, float] = Field(default_factory=dict)
