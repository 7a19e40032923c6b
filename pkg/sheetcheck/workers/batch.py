"""
Пакетная оценка корпуса книг в пуле процессов
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import structlog

from sheetcheck.config import settings
from sheetcheck.exceptions import SheetcheckError
from sheetcheck.schemas.analysis import AnalyzerConfig
from sheetcheck.schemas.checklist import Checklist
from sheetcheck.schemas.report import Report
from sheetcheck.services.assessment import WorkbookAssessor

logger = structlog.get_logger(__name__)

Task = Tuple[str, Checklist, AnalyzerConfig, Optional[datetime]]
Outcome = Tuple[str, Optional[Report], Optional[str]]


@dataclass
class BatchResult:
    """Отчёты в порядке входных файлов и ошибки по файлам"""
    reports: List[Tuple[str, Report]] = field(default_factory=list)
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def summary(self) -> Dict[str, object]:
        return {
            "total": len(self.reports) + len(self.errors),
            "processed": len(self.reports),
            "failed": len(self.errors),
            "failed_ids": list(self.errors),
        }


def assess_file(task: Task) -> Outcome:
    """Оценка одного файла; ошибка не прерывает пакет"""
    path, checklist, config, generated_at = task
    try:
        result = WorkbookAssessor(checklist, config).assess_path(
            path, use_sidecar=True, generated_at=generated_at
        )
        return path, result.report, None
    except SheetcheckError as e:
        logger.error("batch_file_failed", path=path, error=str(e))
        return path, None, str(e)
    except OSError as e:
        logger.error("batch_file_failed", path=path, error=str(e))
        return path, None, f"{path}: {e.strerror or e}"


def run_batch(
    paths: List[Path],
    checklist: Checklist,
    config: AnalyzerConfig,
    jobs: Optional[int] = None,
    generated_at: Optional[datetime] = None,
) -> BatchResult:
    """N независимых оценок; при jobs == 1 всё выполняется в текущем процессе"""
    jobs = jobs or settings.JOBS
    tasks: List[Task] = [(str(p), checklist, config, generated_at) for p in paths]
    logger.info("batch_started", files=len(tasks), jobs=jobs)

    if jobs == 1 or len(tasks) <= 1:
        outcomes = [assess_file(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            outcomes = list(pool.map(assess_file, tasks))

    result = BatchResult()
    for path, report, error in outcomes:
        if report is not None:
            result.reports.append((path, report))
        else:
            result.errors[path] = error or "unknown error"

    logger.info("batch_completed", **result.summary)
    return result
