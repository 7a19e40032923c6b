"""
Общие фикстуры тестов
"""
import json
from pathlib import Path
from typing import Dict, Iterable, Optional

import pytest

from sheetcheck.schemas.analysis import QUESTION_IDS, VerdictKind
from sheetcheck.schemas.checklist import Answer, AnswerSource, Assessment
from sheetcheck.schemas.workbook import Workbook
from sheetcheck.services.checklist import default_checklist
from sheetcheck.services.workbook import load_fixture, parse_fixture

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_workbook(cells: Dict[str, Dict[str, object]], sheet: str = "Model",
                     **document: object) -> Workbook:
    """Книга из одного листа по словарю ячеек в формате фикстур"""
    body = {"sheets": [{"name": sheet, "cells": cells}]}
    body.update(document)
    return parse_fixture(json.dumps(body))


def make_assessment(yes: Iterable[str] = (), na: Iterable[str] = (),
                    qualified: Optional[Dict[str, str]] = None,
                    credits: Optional[Dict[str, float]] = None) -> Assessment:
    """Оценка: перечисленные вопросы Yes/N/A/Qualified, остальные No"""
    yes, na = set(yes), set(na)
    qualified = qualified or {}
    credits = credits or {}
    answers = {}
    for qid in QUESTION_IDS:
        if qid in credits:
            value = credits[qid]
            verdict = VerdictKind.YES if value > 0 else VerdictKind.NO
            answers[qid] = Answer(question_id=qid, verdict=verdict, credit=value,
                                  source=AnswerSource.HUMAN)
        elif qid in qualified:
            text = qualified[qid]
            answers[qid] = Answer(question_id=qid, verdict=VerdictKind.QUALIFIED, qualifier=text,
                                  credit=0.0 if text == "Not" else 1.0, source=AnswerSource.HUMAN)
        elif qid in yes:
            answers[qid] = Answer(question_id=qid, verdict=VerdictKind.YES, credit=1.0,
                                  source=AnswerSource.HUMAN)
        elif qid in na:
            answers[qid] = Answer(question_id=qid, verdict=VerdictKind.NA, credit=0.0,
                                  source=AnswerSource.HUMAN)
        else:
            answers[qid] = Answer(question_id=qid, verdict=VerdictKind.NO, credit=0.0,
                                  source=AnswerSource.HUMAN)
    return Assessment(answers=answers)


@pytest.fixture
def checklist():
    return default_checklist()


@pytest.fixture
def clean_path() -> Path:
    return FIXTURES / "clean.json"


@pytest.fixture
def messy_path() -> Path:
    return FIXTURES / "messy.json"


@pytest.fixture
def clean_workbook(clean_path) -> Workbook:
    return load_fixture(clean_path)


@pytest.fixture
def messy_workbook(messy_path) -> Workbook:
    return load_fixture(messy_path)
