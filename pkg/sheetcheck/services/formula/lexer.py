"""
Лексер формул в нотации A1
"""
import enum
import re
from typing import Any, Iterator, NamedTuple, Optional

from openpyxl.utils import column_index_from_string

from sheetcheck.exceptions import ParseError, UnsupportedNotation
from sheetcheck.services.formula.ast import CellRef, RangeRef

MAX_COLUMN = 16_384
MAX_ROW = 1_048_576


class TokenType(enum.Enum):
    """Типы токенов, значение служит описанием в сообщениях об ошибках"""

    NUMBER = "a number"
    STRING = "a quoted string"
    BOOL = "TRUE or FALSE"
    ERROR = "an error literal"
    REF = "a cell reference"
    RANGE = "a range reference"
    NAME = "a name"
    FUNC = "a function name"
    OPERATOR = "an operator"
    COLON = "':'"
    COMMA = "','"
    SEMICOLON = "';'"
    LPAREN = "'('"
    RPAREN = "')'"
    LBRACE = "'{'"
    RBRACE = "'}'"
    EOF = "end of formula"


class Token(NamedTuple):
    type: TokenType
    text: str
    position: int
    value: Any = None


ERROR_CODES = (
    "#NULL!", "#DIV/0!", "#VALUE!", "#REF!", "#NAME?", "#NUM!", "#N/A",
    "#GETTING_DATA", "#SPILL!", "#CALC!", "#FIELD!", "#BLOCKED!", "#UNKNOWN!",
)

WHITESPACE = re.compile(r"\s+")
STRING = re.compile(r'"(?:[^"]|"")*"')
ERROR = re.compile("|".join(re.escape(code) for code in ERROR_CODES), re.IGNORECASE)
QUOTED_SHEET = re.compile(r"'((?:[^']|'')+)'!")
PLAIN_SHEET = re.compile(r"((?:\[[^\]]+\])?[A-Za-z_\u00c0-\uffff][\w.]*|\[[^\]]+\])!")
R1C1 = re.compile(
    r"(?:R\[-?\d+\]C(?:\[-?\d+\]|\d+)?|R\d*C\[-?\d+\]|R\d+C\d+)(?![\w.(])",
    re.IGNORECASE,
)
COLUMN_RANGE = re.compile(r"(\$?)([A-Za-z]{1,3}):(\$?)([A-Za-z]{1,3})(?![\w.(\[!])")
ROW_RANGE = re.compile(r"(\$?)(\d+):(\$?)(\d+)(?![\w.(])")
NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
CELL = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)(\d+)(?![\w.(\[!])")
IDENTIFIER = re.compile(r"[A-Za-z_\\\u00c0-\uffff][\w.\\?]*")
FUNC_OPEN = re.compile(r"\s*\(")
OPERATOR = re.compile(r"<>|<=|>=|[-+*/^&=<>%]")
PUNCTUATION = {
    ":": TokenType.COLON,
    ",": TokenType.COMMA,
    ";": TokenType.SEMICOLON,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    "{": TokenType.LBRACE,
    "}": TokenType.RBRACE,
}


def _column(letters: str) -> Optional[int]:
    index = column_index_from_string(letters.upper())
    return index if index <= MAX_COLUMN else None


def tokenize(text: str, offset: int = 0) -> Iterator[Token]:
    """Разбиение текста формулы (без ведущего '=') на токены

    Пробелы вне строк незначимы. Позиции токенов считаются от начала
    исходной формулы (offset учитывает отброшенный '=').
    """
    pos = 0
    length = len(text)
    while pos < length:
        match = WHITESPACE.match(text, pos)
        if match:
            pos = match.end()
            continue

        start = pos
        char = text[pos]

        if char == '"':
            match = STRING.match(text, pos)
            if not match:
                raise ParseError(offset + pos, "closing '\"'", "end of formula")
            yield Token(TokenType.STRING, match.group(), offset + start,
                        match.group()[1:-1].replace('""', '"'))
            pos = match.end()
            continue

        if char == "#":
            match = ERROR.match(text, pos)
            if not match:
                raise ParseError(offset + pos, "an error literal", repr(text[pos:pos + 8]))
            yield Token(TokenType.ERROR, match.group(), offset + start, match.group().upper())
            pos = match.end()
            continue

        sheet = None
        match = QUOTED_SHEET.match(text, pos)
        if match:
            sheet = match.group(1).replace("''", "'")
            pos = match.end()
        elif char == "[":
            match = PLAIN_SHEET.match(text, pos)
            if not match:
                raise UnsupportedNotation(offset + pos, "structured reference")
            sheet = match.group(1)
            pos = match.end()
        else:
            match = PLAIN_SHEET.match(text, pos)
            if match and not CELL.match(text, pos):
                sheet = match.group(1)
                pos = match.end()

        token = _reference_or_name(text, pos, offset, sheet)
        if token is not None:
            yield token[0]
            pos = token[1]
            continue
        if sheet is not None:
            match = ERROR.match(text, pos)
            if match:
                yield Token(TokenType.ERROR, match.group(), offset + start, match.group().upper())
                pos = match.end()
                continue
            raise ParseError(offset + pos, "a reference after sheet name", repr(text[pos:pos + 8]))

        match = NUMBER.match(text, pos)
        if match:
            yield Token(TokenType.NUMBER, match.group(), offset + start, float(match.group()))
            pos = match.end()
            continue

        match = OPERATOR.match(text, pos)
        if match:
            yield Token(TokenType.OPERATOR, match.group(), offset + start, match.group())
            pos = match.end()
            continue

        if char in PUNCTUATION:
            yield Token(PUNCTUATION[char], char, offset + start, char)
            pos += 1
            continue

        if char == "'":
            raise ParseError(offset + pos, "sheet name followed by '!'", repr(text[pos:pos + 8]))
        raise ParseError(offset + pos, "a token", repr(char))

    yield Token(TokenType.EOF, "", offset + length)


def _reference_or_name(text: str, pos: int, offset: int, sheet: Optional[str]):
    """Ссылки, диапазоны целых строк/столбцов, имена, функции и логические литералы"""
    match = R1C1.match(text, pos)
    if match:
        raise UnsupportedNotation(offset + pos, f"R1C1 reference {match.group()!r}")

    match = COLUMN_RANGE.match(text, pos)
    if match:
        first, last = _column(match.group(2)), _column(match.group(4))
        if first is not None and last is not None:
            start = CellRef(col=first, row=None, sheet=sheet, col_absolute=bool(match.group(1)))
            end = CellRef(col=last, row=None, sheet=sheet, col_absolute=bool(match.group(3)))
            token = Token(TokenType.RANGE, match.group(), offset + pos, RangeRef(start, end))
            return token, match.end()

    match = ROW_RANGE.match(text, pos)
    if match:
        first, last = int(match.group(2)), int(match.group(4))
        if 1 <= first <= MAX_ROW and 1 <= last <= MAX_ROW:
            start = CellRef(col=None, row=first, sheet=sheet, row_absolute=bool(match.group(1)))
            end = CellRef(col=None, row=last, sheet=sheet, row_absolute=bool(match.group(3)))
            token = Token(TokenType.RANGE, match.group(), offset + pos, RangeRef(start, end))
            return token, match.end()

    match = CELL.match(text, pos)
    if match:
        column, row = _column(match.group(2)), int(match.group(4))
        if column is not None and 1 <= row <= MAX_ROW:
            ref = CellRef(col=column, row=row, sheet=sheet,
                          col_absolute=bool(match.group(1)), row_absolute=bool(match.group(3)))
            return Token(TokenType.REF, match.group(), offset + pos, ref), match.end()

    match = IDENTIFIER.match(text, pos)
    if match:
        word = match.group()
        end = match.end()
        if end < len(text) and text[end] == "[":
            raise UnsupportedNotation(offset + pos, f"structured reference {word}[...]")
        if FUNC_OPEN.match(text, end):
            if sheet is not None:
                raise ParseError(offset + pos, "a reference after sheet name", f"function {word}")
            return Token(TokenType.FUNC, word, offset + pos, word), end
        if sheet is None and word.upper() in ("TRUE", "FALSE"):
            return Token(TokenType.BOOL, word, offset + pos, word.upper() == "TRUE"), end
        return Token(TokenType.NAME, word, offset + pos, (word, sheet)), end

    return None
