"""
Pydantic схемы результатов анализаторов и их настроек
"""
import json
import re
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from sheetcheck.exceptions import ConfigError
from sheetcheck.schemas.workbook import FrozenModel
from sheetcheck.services.formula import NestingSemantics

QUESTION_IDS = tuple(f"Q{i}" for i in range(1, 27))


class VerdictKind(str, Enum):
    YES = "Yes"
    NO = "No"
    NA = "NA"
    QUALIFIED = "Qualified"
    NEEDS_HUMAN = "NeedsHuman"


# Качественные ответы; все, кроме "Not", дают полный балл
QUALIFIED_ANSWERS = ("User sheets", "Controls", "Validation", "In cells", "Not")
ZERO_CREDIT_QUALIFIERS = ("Not",)


def canonical_qualifier(text: str) -> Optional[str]:
    """Качественный ответ из словаря без учёта регистра; None, если такого нет"""
    wanted = " ".join(text.split()).lower()
    for answer in QUALIFIED_ANSWERS:
        if answer.lower() == wanted:
            return answer
    return None


class Confidence(str, Enum):
    HIGH = "high"
    MEDIUM = "medium"
    LOW = "low"


class Evidence(BaseModel):
    """Подтверждение: лист и, при наличии, ячейка; для имён только заметка"""
    model_config = FrozenModel

    sheet: Optional[str] = None
    cell: Optional[str] = None
    note: str = ""

    @property
    def location(self) -> str:
        if self.sheet and self.cell:
            return f"{self.sheet}!{self.cell}"
        return self.sheet or ""


def verdict_text(kind: VerdictKind, qualifier: Optional[str]) -> str:
    """Текст ответа в стиле сводной таблицы: Yes / No / N/A / User sheets"""
    if kind is VerdictKind.QUALIFIED:
        return qualifier or "Qualified"
    if kind is VerdictKind.NA:
        return "N/A"
    return kind.value


def check_credit(kind: VerdictKind, qualifier: Optional[str], credit: Optional[float]) -> None:
    if kind is VerdictKind.NEEDS_HUMAN:
        if credit is not None:
            raise ValueError("NeedsHuman carries no credit until answered")
        return
    if credit is None:
        raise ValueError(f"{kind.value} needs a credit")
    if kind in (VerdictKind.NO, VerdictKind.NA) and credit != 0:
        raise ValueError(f"{kind.value} must carry credit 0")
    if kind is VerdictKind.QUALIFIED and not qualifier:
        raise ValueError("Qualified verdict needs its text")
    if kind is VerdictKind.QUALIFIED and qualifier not in QUALIFIED_ANSWERS:
        raise ValueError(f"unknown qualified answer {qualifier!r}, expected one of "
                         + ", ".join(QUALIFIED_ANSWERS))
    if kind is VerdictKind.QUALIFIED and qualifier in ZERO_CREDIT_QUALIFIERS and credit != 0:
        raise ValueError(f"Qualified({qualifier}) must carry credit 0")


class Finding(BaseModel):
    """Автоматический ответ на вопрос чек-листа"""
    model_config = FrozenModel

    question_id: str
    verdict: VerdictKind
    qualifier: Optional[str] = None
    credit: Optional[float] = Field(None, ge=0.0, le=1.0)
    evidence: List[Evidence] = Field(default_factory=list)
    confidence: Confidence = Confidence.HIGH
    summary: str = ""
    measure: Optional[float] = None

    @field_validator("question_id")
    @classmethod
    def known_question(cls, v: str) -> str:
        if v not in QUESTION_IDS:
            raise ValueError(f"unknown question {v!r}")
        return v

    @model_validator(mode="after")
    def consistent_credit(self) -> "Finding":
        check_credit(self.verdict, self.qualifier, self.credit)
        return self

    @property
    def text(self) -> str:
        return verdict_text(self.verdict, self.qualifier)


DEFAULT_COMPLEX_FUNCTIONS = (
    "VLOOKUP", "HLOOKUP", "INDEX", "MATCH", "OFFSET", "INDIRECT", "SUMPRODUCT",
    "SUMIF", "SUMIFS", "COUNTIF", "COUNTIFS", "NPV", "IRR", "CHOOSE",
)

# Позиции аргументов (с единицы), где числа служат флагами или номерами, а не константы модели
DEFAULT_FLAG_ARGUMENTS = {
    "VLOOKUP": (3, 4),
    "HLOOKUP": (3, 4),
    "MATCH": (3,),
    "INDEX": (2, 3, 4),
    "OFFSET": (2, 3, 4, 5),
    "ROUND": (2,),
    "ROUNDUP": (2,),
    "ROUNDDOWN": (2,),
    "LEFT": (2,),
    "RIGHT": (2,),
    "MID": (2, 3),
    "CHOOSE": (1,),
    "LARGE": (2,),
    "SMALL": (2,),
    "WEEKDAY": (2,),
}


class AnalyzerConfig(BaseModel):
    """Настройки анализаторов; файл --config задаёт любое подмножество ключей"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    nesting_semantics: NestingSemantics = NestingSemantics.BUILTIN_ONLY
    format_consistency_threshold: float = Field(0.9, gt=0.0, le=1.0)
    normalization_min_repeats: int = Field(2, ge=1)
    literal_exemptions: Tuple[float, ...] = (-1.0, 0.0, 1.0, 100.0)
    complex_function_list: Tuple[str, ...] = DEFAULT_COMPLEX_FUNCTIONS
    default_sheet_name_pattern: str = r"(?i)^sheet ?\d+$"
    naming_threshold: float = Field(1.0, gt=0.0, le=1.0)
    doc_sheet_min_text_cells: int = Field(10, ge=1)
    variable_cluster_share: float = Field(0.8, gt=0.0, le=1.0)
    continuous_credit: bool = False
    flag_argument_positions: Dict[str, Tuple[int, ...]] = Field(
        default_factory=lambda: dict(DEFAULT_FLAG_ARGUMENTS)
    )
    range_expansion_limit: int = Field(65_536, ge=1)

    @field_validator("literal_exemptions")
    @classmethod
    def sorted_exemptions(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if not v:
            raise ValueError("literal_exemptions must not be empty")
        return tuple(sorted(set(float(x) for x in v)))

    @field_validator("complex_function_list")
    @classmethod
    def uppercase_functions(cls, v: Tuple[str, ...]) -> Tuple[str, ...]:
        if not v:
            raise ValueError("complex_function_list must not be empty")
        return tuple(sorted(set(name.upper() for name in v)))

    @field_validator("flag_argument_positions")
    @classmethod
    def uppercase_flags(cls, v: Dict[str, Tuple[int, ...]]) -> Dict[str, Tuple[int, ...]]:
        result = {}
        for name, positions in v.items():
            if any(p < 1 for p in positions):
                raise ValueError(f"argument positions of {name} must start at 1")
            result[name.upper()] = tuple(sorted(set(positions)))
        return dict(sorted(result.items()))

    @field_validator("default_sheet_name_pattern")
    @classmethod
    def valid_pattern(cls, v: str) -> str:
        try:
            re.compile(v)
        except re.error as e:
            raise ValueError(f"bad regular expression: {e}") from e
        return v

    @property
    def sheet_name_regex(self) -> "re.Pattern[str]":
        return re.compile(self.default_sheet_name_pattern)


def load_analyzer_config(path: Union[str, Path, None]) -> AnalyzerConfig:
    """Чтение AnalyzerConfig из JSON; без файла значения по умолчанию"""
    if path is None:
        return AnalyzerConfig()
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path}: invalid JSON at line {e.lineno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path}: expected a JSON object")
    try:
        return AnalyzerConfig.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        raise ConfigError(f"config {path}: {location}: {first['msg']}") from e


__all__ = [
    "QUESTION_IDS", "QUALIFIED_ANSWERS", "canonical_qualifier", "VerdictKind", "Confidence",
    "Evidence", "Finding",
    "AnalyzerConfig", "load_analyzer_config", "verdict_text", "check_credit",
]
