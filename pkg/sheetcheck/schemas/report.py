"""
Pydantic схемы отчётов: отчёт по одной книге и сводная таблица корпуса
"""
from datetime import datetime
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from sheetcheck.schemas.analysis import Confidence, Evidence, VerdictKind
from sheetcheck.schemas.checklist import AnswerSource, Category
from sheetcheck.schemas.workbook import FrozenModel

SCHEMA_VERSION = "1.0"
OVERALL = "Overall"


class WorkbookIdentity(BaseModel):
    model_config = FrozenModel

    path: str
    sheet_count: int = Field(..., ge=0)
    cell_count: int = Field(..., ge=0)


class QuestionReport(BaseModel):
    """Ответ на вопрос вместе с подтверждениями и подсказкой"""
    model_config = FrozenModel

    id: str
    category: Category
    question: str
    weight: float
    verdict: VerdictKind
    qualifier: Optional[str] = None
    answer: str
    credit: float
    source: AnswerSource
    confidence: Confidence
    unresolved: bool = False
    summary: str = ""
    note: Optional[str] = None
    evidence: List[Evidence] = Field(default_factory=list)
    hint: str


class CategoryScore(BaseModel):
    model_config = FrozenModel

    category: Category
    weight: float
    score: float = Field(..., ge=0.0, le=10.0)
    rounded: float


class Report(BaseModel):
    """Машиночитаемый отчёт; JSON-представление стабильно при --no-timestamp"""
    model_config = FrozenModel

    schema_version: str = SCHEMA_VERSION
    tool_version: str
    generated_at: Optional[datetime] = None
    config_fingerprint: str
    workbook: WorkbookIdentity
    questions: List[QuestionReport]
    categories: List[CategoryScore]
    overall: float = Field(..., ge=0.0, le=10.0)
    overall_rounded: float
    earned_weight: float
    total_weight: float
    unresolved: List[str] = Field(default_factory=list)
    diagnostics_count: int = Field(0, ge=0)

    def question(self, question_id: str) -> QuestionReport:
        for q in self.questions:
            if q.id == question_id:
                return q
        raise KeyError(question_id)

    def category(self, category: Category) -> CategoryScore:
        for c in self.categories:
            if c.category is category:
                return c
        raise KeyError(category)


class CorpusTable(BaseModel):
    """Матрица ответов (26 × N) и матрица оценок (6 категорий + общая × N)"""
    model_config = FrozenModel

    columns: List[str]
    config_fingerprint: str
    answers: Dict[str, List[str]]
    scores: Dict[str, List[float]]
