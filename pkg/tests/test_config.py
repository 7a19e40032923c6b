"""
Тесты настроек из окружения
"""
from pathlib import Path

import pytest
from pydantic import ValidationError

from sheetcheck.config import Settings


def test_defaults(monkeypatch):
    for name in ("SHEETCHECK_LOG_LEVEL", "SHEETCHECK_LOG_FORMAT", "SHEETCHECK_CONFIG"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings(_env_file=None)

    assert settings.LOG_LEVEL == "WARNING"
    assert settings.LOG_FORMAT == "console"
    assert settings.CONFIG is None
    assert settings.JOBS >= 1


def test_environment_overrides(monkeypatch):
    """Тест чтения переменных с префиксом SHEETCHECK_"""
    monkeypatch.setenv("SHEETCHECK_LOG_FORMAT", "json")
    monkeypatch.setenv("SHEETCHECK_CONFIG", "analyzers.json")
    monkeypatch.setenv("SHEETCHECK_MAX_EVIDENCE", "3")
    settings = Settings(_env_file=None)

    assert settings.LOG_FORMAT == "json"
    assert settings.CONFIG == Path("analyzers.json")
    assert settings.MAX_EVIDENCE == 3


@pytest.mark.parametrize("name, value", [
    ("SHEETCHECK_LOG_FORMAT", "xml"),
    ("SHEETCHECK_JOBS", "0"),
])
def test_invalid_values(monkeypatch, name, value):
    monkeypatch.setenv(name, value)

    with pytest.raises(ValidationError):
        Settings(_env_file=None)
