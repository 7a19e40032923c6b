"""
Командная строка sheetcheck

    sheetcheck assess model.xlsx --format md
    sheetcheck batch corpus/*.xlsx --format csv --out results/
    sheetcheck questions --weights weights.json
    sheetcheck fixture model.xlsx --out model.json
"""
import glob
import json
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

import click
import pandas as pd
import structlog

from sheetcheck import __version__
from sheetcheck.config import settings
from sheetcheck.exceptions import ChecklistError, ConfigError, SheetcheckError
from sheetcheck.schemas.analysis import (
    QUALIFIED_ANSWERS,
    AnalyzerConfig,
    Finding,
    VerdictKind,
    canonical_qualifier,
    load_analyzer_config,
)
from sheetcheck.schemas.checklist import Checklist, HumanAnswer
from sheetcheck.services.assessment import OVERLAY_SUFFIX, WorkbookAssessor, overlay_path
from sheetcheck.services.checklist import dump_overlay, load_overlay, load_weights
from sheetcheck.services.dataflow import to_dot
from sheetcheck.services.formula import NestingSemantics
from sheetcheck.services.reporting import HINTS, corpus_table, render, render_corpus
from sheetcheck.services.workbook import dump_fixture, load_workbook
from sheetcheck.utils.export import frame_to_csv, markdown_table
from sheetcheck.utils.logging import configure_logging
from sheetcheck.workers.batch import run_batch

logger = structlog.get_logger(__name__)

SEMANTICS = {
    "builtin": NestingSemantics.BUILTIN_ONLY,
    "operator": NestingSemantics.OPERATORS_COUNT,
}
FORMATS = ("json", "md", "csv")
EXTENSIONS = {"json": ".json", "md": ".md", "csv": ".csv"}
SHOWN_EVIDENCE = 5


@contextmanager
def diagnostics() -> Iterator[None]:
    """Ошибки пользователя одной строкой в stderr: 2 для файлов настроек, 1 для книг"""
    try:
        yield
    except (ChecklistError, ConfigError) as e:
        click.echo(f"error: {e}", err=True)
        raise click.exceptions.Exit(2)
    except SheetcheckError as e:
        click.echo(f"error: {e}", err=True)
        raise click.exceptions.Exit(1)
    except OSError as e:
        click.echo(f"error: {e.filename or ''}: {e.strerror or e}", err=True)
        raise click.exceptions.Exit(1)


def _settings_files(weights: Optional[Path], config: Optional[Path],
                    semantics: Optional[str]) -> Tuple[Checklist, AnalyzerConfig]:
    checklist = load_weights(weights or settings.WEIGHTS)
    analyzer_config = load_analyzer_config(config or settings.CONFIG)
    if semantics is not None:
        analyzer_config = analyzer_config.model_copy(
            update={"nesting_semantics": SEMANTICS[semantics]}
        )
    return checklist, analyzer_config


def _timestamp(no_timestamp: bool) -> Optional[datetime]:
    return None if no_timestamp else datetime.now(timezone.utc).replace(microsecond=0)


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("output_written", path=str(out), size=len(text))


def analysis_options(func):
    """Общие параметры assess и batch"""
    options = [
        click.option("--weights", type=click.Path(dir_okay=False, path_type=Path),
                     help="JSON file overriding question weights"),
        click.option("--config", type=click.Path(dir_okay=False, path_type=Path),
                     envvar="SHEETCHECK_CONFIG", help="JSON file with analyzer settings"),
        click.option("--semantics", type=click.Choice(sorted(SEMANTICS)), default=None,
                     help="What counts as nesting for Q24 [default: builtin]"),
        click.option("--format", "fmt", type=click.Choice(FORMATS), default="md",
                     show_default=True),
        click.option("--out", type=click.Path(path_type=Path),
                     help="Write to this file (batch: directory) instead of stdout"),
        click.option("--no-timestamp", is_flag=True,
                     help="Omit the generation time so reports are byte-identical"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


@click.group()
@click.version_option(__version__, prog_name="sheetcheck")
@click.option("--log-level", default=None, help="Logging level [default: settings.LOG_LEVEL]")
def cli(log_level: Optional[str]) -> None:
    """Оценка сопровождаемости электронных таблиц по взвешенному чек-листу"""
    configure_logging(log_level or settings.LOG_LEVEL, settings.LOG_FORMAT)


# Интерактивный опрос

def parse_reply(reply: str) -> Optional[HumanAnswer]:
    """y / n / na / q:<качественный ответ>; None, если ответ не распознан"""
    text = reply.strip()
    lowered = text.lower()
    if lowered in ("y", "yes"):
        return HumanAnswer(verdict=VerdictKind.YES)
    if lowered in ("n", "no"):
        return HumanAnswer(verdict=VerdictKind.NO)
    if lowered in ("na", "n/a"):
        return HumanAnswer(verdict=VerdictKind.NA)
    qualifier = canonical_qualifier(text[2:]) if lowered.startswith("q:") else None
    if qualifier is not None:
        return HumanAnswer(verdict=VerdictKind.QUALIFIED, qualifier=qualifier)
    return None


def ask(finding: Finding, checklist: Checklist) -> HumanAnswer:
    question = checklist.question(finding.question_id)
    click.echo("", err=True)
    click.echo(f"{question.id} [{question.category.value}, weight {question.weight:g}] "
               f"{question.text}", err=True)
    if finding.summary:
        click.echo(f"  finding: {finding.summary}", err=True)
    for item in finding.evidence[:SHOWN_EVIDENCE]:
        place = f"{item.location} " if item.location else ""
        click.echo(f"  - {place}{item.note}", err=True)
    click.echo(f"  hint: {HINTS[question.id]}", err=True)
    while True:
        reply = click.prompt(f"  answer (y/n/na/q:<{'|'.join(QUALIFIED_ANSWERS)}>)",
                             err=True)
        answer = parse_reply(reply)
        if answer is not None:
            return answer
        click.echo("  please answer y, n, na or q:<text> with text one of "
                   + ", ".join(QUALIFIED_ANSWERS), err=True)


@cli.command()
@click.argument("workbook", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--answers", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="JSON file with human answers")
@analysis_options
@click.option("--interactive", is_flag=True, help="Ask for every question that needs a human")
@click.option("--dump-graph", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the dependency graph in DOT format")
def assess(workbook: Path, answers: Optional[Path], weights: Optional[Path],
           config: Optional[Path], semantics: Optional[str], fmt: str, out: Optional[Path],
           no_timestamp: bool, interactive: bool, dump_graph: Optional[Path]) -> None:
    """Оценка одной книги"""
    with diagnostics():
        checklist, analyzer_config = _settings_files(weights, config, semantics)
        overlay: Dict[str, HumanAnswer] = load_overlay(answers) if answers else {}
        book = load_workbook(workbook)
        assessor = WorkbookAssessor(checklist, analyzer_config)
        graph, classes, findings = assessor.analyze(book)

        if interactive:
            asked = 0
            for finding in findings:
                pending = finding.verdict is VerdictKind.NEEDS_HUMAN
                if pending and finding.question_id not in overlay:
                    overlay[finding.question_id] = ask(finding, checklist)
                    asked += 1
            target = overlay_path(out.parent / workbook.name) if out else overlay_path(workbook)
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(dump_overlay(overlay), encoding="utf-8")
            click.echo(f"answers saved to {target}", err=True)
            logger.info("overlay_saved", path=str(target), asked=asked)

        result = assessor.finish(book, graph, classes, findings, overlay,
                                 generated_at=_timestamp(no_timestamp))
        if dump_graph is not None:
            _emit(to_dot(graph), dump_graph)
        if fmt == "csv":
            text = render_corpus(corpus_table([result.report]), "csv")
        else:
            text = render(result.report, fmt)
        _emit(text, out)


def expand_inputs(patterns: List[str]) -> List[Path]:
    """Пути и шаблоны в порядке аргументов; шаблон раскрывается отсортированным"""
    paths: List[Path] = []
    for pattern in patterns:
        matches = sorted(glob.glob(pattern)) if glob.has_magic(pattern) else [pattern]
        for match in matches:
            path = Path(match)
            if path not in paths and not path.name.endswith(OVERLAY_SUFFIX):
                paths.append(path)
    return paths


@cli.command()
@click.argument("inputs", nargs=-1, required=True)
@analysis_options
@click.option("--jobs", type=click.IntRange(min=1), default=None,
              help="Parallel workers [default: number of processors]")
def batch(inputs: List[str], weights: Optional[Path], config: Optional[Path],
          semantics: Optional[str], fmt: str, out: Optional[Path], no_timestamp: bool,
          jobs: Optional[int]) -> None:
    """Оценка корпуса книг и сводная таблица ответов и оценок"""
    paths = expand_inputs(list(inputs))
    if not paths:
        raise click.UsageError("no input files match")
    with diagnostics():
        checklist, analyzer_config = _settings_files(weights, config, semantics)
        result = run_batch(paths, checklist, analyzer_config, jobs=jobs or settings.JOBS,
                           generated_at=_timestamp(no_timestamp))

        for path, error in result.errors.items():
            click.echo(f"error: {error}", err=True)

        if out is not None:
            out.mkdir(parents=True, exist_ok=True)
            for path, report in result.reports:
                if fmt == "csv":
                    text = render_corpus(corpus_table([report]), "csv")
                else:
                    text = render(report, fmt)
                _emit(text, out / (Path(path).stem + EXTENSIONS[fmt]))
        elif result.reports:
            click.echo("note: per-file reports are written only with --out; "
                       "printing the corpus table", err=True)

        if result.reports:
            table = corpus_table([report for _, report in result.reports])
            text = render_corpus(table, "markdown" if fmt == "md" else fmt)
            _emit(text, out / ("corpus" + EXTENSIONS[fmt]) if out is not None else None)

    if result.errors:
        raise click.exceptions.Exit(1)


@cli.command()
@click.option("--weights", type=click.Path(dir_okay=False, path_type=Path),
              help="JSON file overriding question weights")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="md", show_default=True)
def questions(weights: Optional[Path], fmt: str) -> None:
    """Список 26 вопросов с категориями и действующими весами"""
    with diagnostics():
        checklist = load_weights(weights or settings.WEIGHTS)
    rows = [
        {"id": q.id, "category": q.category.value, "weight": q.weight,
         "mode": q.mode.value, "question": q.text}
        for q in checklist.questions
    ]
    if fmt == "json":
        click.echo(json.dumps(rows, indent=2))
    elif fmt == "csv":
        click.echo(frame_to_csv(pd.DataFrame(rows)), nl=False)
    else:
        table = markdown_table(
            ["Id", "Category", "Weight", "Mode", "Question"],
            [(r["id"], r["category"], f"{r['weight']:g}", r["mode"], r["question"])
             for r in rows],
        )
        click.echo(table)
        click.echo(f"\nTotal weight: {checklist.total_weight:g}")


@cli.command()
@click.argument("workbook", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path),
              help="Write the fixture to this file instead of stdout")
def fixture(workbook: Path, out: Optional[Path]) -> None:
    """Преобразование книги в JSON-фикстуру для тестов"""
    with diagnostics():
        _emit(dump_fixture(load_workbook(workbook)), out)


if __name__ == "__main__":
    cli()
