"""
Иерархия исключений sheetcheck

Библиотечный код выбрасывает исключения, CLI превращает их в однострочные
диагностические сообщения.
"""
from typing import Iterable, Optional


class SheetcheckError(Exception):
    """Базовое исключение пакета"""


# Загрузка книг

class WorkbookLoadError(SheetcheckError):
    """Книгу не удалось загрузить"""


class NotAZipArchive(WorkbookLoadError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"{path}: not a ZIP archive")


class MissingWorkbookPart(WorkbookLoadError):
    def __init__(self, path: str, detail: str = "no workbook part in package"):
        self.path = path
        self.detail = detail
        super().__init__(f"{path}: {detail}")


class MalformedSheetXml(WorkbookLoadError):
    def __init__(self, sheet: str, detail: str):
        self.sheet = sheet
        self.detail = detail
        super().__init__(f"malformed XML in sheet {sheet!r}: {detail}")


class UnsupportedFeature(WorkbookLoadError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"unsupported: {detail}")


class InvalidRange(WorkbookLoadError):
    def __init__(self, ref: str, detail: str):
        self.ref = ref
        self.detail = detail
        super().__init__(f"invalid range {ref!r}: {detail}")


class FixtureError(WorkbookLoadError):
    """Ошибка в JSON-фикстуре"""


class FixtureSyntax(FixtureError):
    def __init__(self, line: int, detail: str):
        self.line = line
        self.detail = detail
        super().__init__(f"fixture syntax error at line {line}: {detail}")


class FixtureInvariantViolation(FixtureError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"fixture invariant violated: {detail}")


# Формулы

class FormulaError(SheetcheckError):
    """Ошибка разбора формулы"""


class ParseError(FormulaError):
    def __init__(self, position: int, expected: str, found: str):
        self.position = position
        self.expected = expected
        self.found = found
        super().__init__(f"at position {position}: expected {expected}, found {found}")


class UnsupportedNotation(FormulaError):
    def __init__(self, position: int, notation: str):
        self.position = position
        self.notation = notation
        super().__init__(f"at position {position}: unsupported notation {notation}")


# Чек-лист

class ChecklistError(SheetcheckError):
    """Ошибка реестра вопросов, весов или ответов"""


class UnknownQuestion(ChecklistError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"unknown question {question_id!r}")


class NonPositiveWeight(ChecklistError):
    def __init__(self, question_id: str, weight: Optional[float] = None):
        self.question_id = question_id
        self.weight = weight
        super().__init__(f"weight of {question_id} must be positive, got {weight!r}")


class OverlayUnknownQuestion(ChecklistError):
    def __init__(self, question_id: str):
        self.question_id = question_id
        super().__init__(f"answer overlay names unknown question {question_id!r}")


class OverlayBadVerdict(ChecklistError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(f"bad verdict in answer overlay: {detail}")


class ConfigError(SheetcheckError):
    def __init__(self, detail: str):
        self.detail = detail
        super().__init__(detail)


# Отчёты

class ReportError(SheetcheckError):
    """Ошибка построения отчёта"""


class MixedConfig(ReportError):
    def __init__(self, fingerprints: Iterable[str]):
        self.fingerprints = sorted(set(fingerprints))
        super().__init__(
            "reports were produced under different configurations: "
            + ", ".join(fp[:12] for fp in self.fingerprints)
        )
