"""
Конфигурация приложения через Pydantic Settings
"""
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="SHEETCHECK_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Логирование
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = Field("console", pattern="^(console|json)$")

    # Файлы конфигурации по умолчанию
    CONFIG: Optional[Path] = None  # SHEETCHECK_CONFIG
    WEIGHTS: Optional[Path] = None

    # Анализ
    JOBS: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    RANGE_EXPANSION_LIMIT: int = Field(65_536, ge=1)
    MAX_EVIDENCE: int = Field(10, ge=1)


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()
