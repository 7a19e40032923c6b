"""
Рекурсивный спуск для формул: приоритеты (от сильного к слабому)
%, ^, унарные ±, * /, + -, &, сравнения; ':' связывает ссылки в диапазон
"""
from typing import List, Optional

from sheetcheck.exceptions import ParseError
from sheetcheck.services.formula.ast import (
    ArrayLit,
    BinaryOp,
    BoolLit,
    CellRef,
    ErrorLit,
    FunctionCall,
    MissingArg,
    NameRef,
    Node,
    NumberLit,
    Paren,
    RangeRef,
    TextLit,
    UnaryOp,
)
from sheetcheck.services.formula.lexer import Token, TokenType, tokenize

COMPARISON_OPERATORS = ("=", "<", ">", "<=", ">=", "<>")
FUNCTION_PREFIXES = ("_XLFN.", "_XLWS.")


def parse(text: str) -> Node:
    """Разбор текста формулы в дерево

    Args:
        text: Текст формулы, начинающийся с '='

    Returns:
        Корень дерева разбора

    Raises:
        ParseError: синтаксическая ошибка
        UnsupportedNotation: R1C1 или структурированные ссылки
    """
    if not text.startswith("="):
        raise ParseError(0, "'='", repr(text[:1]) if text else "end of formula")
    return Parser(list(tokenize(text[1:], offset=1))).parse()


class Parser:
    """Рекурсивный спуск по списку токенов"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0
        # токены, которые пытались принять с момента последнего успешного шага
        self.attempted: List[str] = []

    @property
    def cur(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.cur
        if token.type is not TokenType.EOF:
            self.index += 1
        self.attempted = []
        return token

    def consume(self, type_: TokenType, *texts: str) -> Optional[Token]:
        """Принять токен нужного типа (и текста), иначе вернуть None"""
        token = self.cur
        if token.type is type_ and (not texts or token.text in texts):
            return self.advance()
        self.attempted.append(" or ".join(repr(t) for t in texts) if texts else type_.value)
        return None

    def expect(self, type_: TokenType, *texts: str) -> Token:
        token = self.consume(type_, *texts)
        if token is None:
            self.raise_unexpected()
        return token

    def raise_unexpected(self):
        expected = ", ".join(dict.fromkeys(self.attempted)) or "an expression"
        found = "end of formula" if self.cur.type is TokenType.EOF else repr(self.cur.text)
        raise ParseError(self.cur.position, expected, found)

    def parse(self) -> Node:
        node = self.expression()
        self.expect(TokenType.EOF)
        return node

    def expression(self, allow_union: bool = False) -> Node:
        node = self.comparison()
        while allow_union and self.consume(TokenType.COMMA):
            node = BinaryOp(",", node, self.comparison())
        return node

    def comparison(self) -> Node:
        node = self.concat()
        while True:
            token = self.consume(TokenType.OPERATOR, *COMPARISON_OPERATORS)
            if token is None:
                return node
            node = BinaryOp(token.text, node, self.concat())

    def concat(self) -> Node:
        node = self.additive()
        while self.consume(TokenType.OPERATOR, "&"):
            node = BinaryOp("&", node, self.additive())
        return node

    def additive(self) -> Node:
        node = self.term()
        while True:
            token = self.consume(TokenType.OPERATOR, "+", "-")
            if token is None:
                return node
            node = BinaryOp(token.text, node, self.term())

    def term(self) -> Node:
        node = self.unary()
        while True:
            token = self.consume(TokenType.OPERATOR, "*", "/")
            if token is None:
                return node
            node = BinaryOp(token.text, node, self.unary())

    def unary(self) -> Node:
        token = self.consume(TokenType.OPERATOR, "+", "-")
        if token is not None:
            return UnaryOp(token.text, self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.postfix()
        while self.consume(TokenType.OPERATOR, "^"):
            # 2^-1: унарный знак допустим в правом операнде степени
            if self.cur.type is TokenType.OPERATOR and self.cur.text in ("+", "-"):
                right = self.unary()
            else:
                right = self.postfix()
            node = BinaryOp("^", node, right)
        return node

    def postfix(self) -> Node:
        node = self.primary()
        while self.consume(TokenType.OPERATOR, "%"):
            node = UnaryOp("%", node)
        return node

    def primary(self) -> Node:
        token = self.cur
        kind = token.type

        if kind is TokenType.NUMBER:
            self.advance()
            return NumberLit(token.value)
        if kind is TokenType.STRING:
            self.advance()
            return TextLit(token.value)
        if kind is TokenType.BOOL:
            self.advance()
            return BoolLit(token.value)
        if kind is TokenType.ERROR:
            self.advance()
            return ErrorLit(token.value)
        if kind is TokenType.RANGE:
            self.advance()
            return token.value
        if kind is TokenType.REF:
            self.advance()
            return self.range_tail(token.value)
        if kind is TokenType.NAME:
            self.advance()
            identifier, sheet = token.value
            return NameRef(identifier, sheet)
        if kind is TokenType.FUNC:
            self.advance()
            return self.function_call(token.text)
        if kind is TokenType.LPAREN:
            self.advance()
            inner = self.expression(allow_union=True)
            self.expect(TokenType.RPAREN)
            return Paren(inner)
        if kind is TokenType.LBRACE:
            self.advance()
            return self.array_literal()

        self.attempted.append("an operand")
        self.raise_unexpected()

    def range_tail(self, start: CellRef) -> Node:
        """'A1' или 'A1:B2'; конец диапазона наследует лист начала"""
        if not self.consume(TokenType.COLON):
            return start
        token = self.expect(TokenType.REF)
        end: CellRef = token.value
        if end.sheet is not None and end.sheet != start.sheet:
            raise ParseError(token.position, f"a reference on sheet {start.sheet!r}",
                             repr(end.sheet))
        return RangeRef(start, CellRef(end.col, end.row, start.sheet,
                                       end.col_absolute, end.row_absolute))

    def function_call(self, raw_name: str) -> Node:
        name = raw_name.upper()
        for prefix in FUNCTION_PREFIXES:
            if name.startswith(prefix):
                name = name[len(prefix):]
        self.expect(TokenType.LPAREN)
        args: List[Node] = []
        if self.consume(TokenType.RPAREN):
            return FunctionCall(name, ())
        while True:
            if self.cur.type in (TokenType.COMMA, TokenType.RPAREN):
                args.append(MissingArg())
            else:
                args.append(self.expression())
            if self.consume(TokenType.COMMA):
                continue
            self.expect(TokenType.RPAREN)
            return FunctionCall(name, tuple(args))

    def array_literal(self) -> Node:
        rows = []
        row: List[Node] = []
        while True:
            row.append(self.array_element())
            if self.consume(TokenType.COMMA):
                continue
            if self.consume(TokenType.SEMICOLON):
                rows.append(tuple(row))
                row = []
                continue
            self.expect(TokenType.RBRACE)
            rows.append(tuple(row))
            return ArrayLit(tuple(rows))

    def array_element(self) -> Node:
        sign = self.consume(TokenType.OPERATOR, "+", "-")
        token = self.cur
        if token.type is TokenType.NUMBER:
            self.advance()
            node: Node = NumberLit(token.value)
            return UnaryOp(sign.text, node) if sign else node
        if sign is None and token.type in (TokenType.STRING, TokenType.BOOL, TokenType.ERROR):
            return self.primary()
        self.attempted.append("an array constant")
        self.raise_unexpected()
