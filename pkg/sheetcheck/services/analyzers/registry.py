"""
Реестр правил: по одному правилу на вопрос чек-листа
"""
from typing import Callable, Dict, List

from sheetcheck.exceptions import UnknownQuestion
from sheetcheck.schemas.analysis import QUESTION_IDS, Finding
from sheetcheck.services.analyzers.context import AnalysisContext

Rule = Callable[[AnalysisContext], Finding]

_RULES: Dict[str, Rule] = {}


def rule(question_id: str) -> Callable[[Rule], Rule]:
    """Декоратор регистрации правила для вопроса"""
    if question_id not in QUESTION_IDS:
        raise UnknownQuestion(question_id)

    def register(func: Rule) -> Rule:
        if question_id in _RULES:
            raise ValueError(f"rule for {question_id} registered twice")
        _RULES[question_id] = func
        return func

    return register


def get_rule(question_id: str) -> Rule:
    _import_all_rules()
    try:
        return _RULES[question_id]
    except KeyError:
        raise UnknownQuestion(question_id) from None


def registered_questions() -> List[str]:
    _import_all_rules()
    return [q for q in QUESTION_IDS if q in _RULES]


def _import_all_rules() -> None:
    """Импорт модулей правил регистрирует их в реестре"""
    from sheetcheck.services.analyzers import (  # noqa: F401
        documentation,
        formatting,
        management,
        safety,
        skills,
        structure,
    )
