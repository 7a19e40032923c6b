"""
Тесты разбора формул
"""
import pytest

from sheetcheck.exceptions import ParseError, UnsupportedNotation
from sheetcheck.services.formula import (
    ArrayLit,
    BinaryOp,
    BoolLit,
    CellRef,
    ErrorLit,
    FunctionCall,
    MissingArg,
    NameRef,
    NestingSemantics,
    NumberLit,
    Paren,
    RangeRef,
    TextLit,
    UnaryOp,
    function_names,
    nesting_depth,
    node_at,
    numeric_literals,
    parse,
    print_canonical,
    references,
    signed_value,
)

F14 = CellRef(col=6, row=14)
F16 = CellRef(col=6, row=16)


def test_motivating_formula():
    """F14*(1-F16): умножение на выражение в скобках"""
    ast = parse("=F14*(1-F16)")

    assert ast == BinaryOp("*", F14, Paren(BinaryOp("-", NumberLit(1), F16)))


def test_sheet_qualified_absolute_range():
    """Диапазон на другом листе с абсолютными концами"""
    ast = parse("=SUM(Sheet2!$A$1:$A$10)")

    assert isinstance(ast, FunctionCall)
    assert ast.name == "SUM"
    (arg,) = ast.args
    assert isinstance(arg, RangeRef)
    assert arg.sheet == "Sheet2"
    assert arg.start == CellRef(1, 1, "Sheet2", True, True)
    assert arg.end == CellRef(1, 10, "Sheet2", True, True)


def test_plain_cell_reference():
    assert parse("=A1") == CellRef(col=1, row=1)


@pytest.mark.parametrize("text, expected", [
    ("=1+2*3", BinaryOp("+", NumberLit(1), BinaryOp("*", NumberLit(2), NumberLit(3)))),
    ("=-2^2", UnaryOp("-", BinaryOp("^", NumberLit(2), NumberLit(2)))),
    ("=A1&B1=C1", BinaryOp("=", BinaryOp("&", CellRef(1, 1), CellRef(2, 1)), CellRef(3, 1))),
    ("=10%*2", BinaryOp("*", UnaryOp("%", NumberLit(10)), NumberLit(2))),
    ("=1-2-3", BinaryOp("-", BinaryOp("-", NumberLit(1), NumberLit(2)), NumberLit(3))),
    ("=A1<>B1", BinaryOp("<>", CellRef(1, 1), CellRef(2, 1))),
])
def test_operator_precedence(text, expected):
    """Приоритеты: %, ^, унарные ±, * /, + -, &, сравнения"""
    assert parse(text) == expected


def test_literals():
    ast = parse('=IF(TRUE,"a ""b""",#N/A)')

    assert ast == FunctionCall("IF", (BoolLit(True), TextLit('a "b"'), ErrorLit("#N/A")))


def test_function_names_are_uppercased():
    ast = parse("=sum(a1:b2)")

    assert ast == FunctionCall("SUM", (RangeRef(CellRef(1, 1), CellRef(2, 2)),))
    assert print_canonical(ast) == "=SUM(A1:B2)"


def test_future_function_prefix_is_stripped():
    assert function_names(parse("=_xlfn.XLOOKUP(A1,B1:B3,C1:C3)")) == ["XLOOKUP"]


def test_quoted_sheet_with_spaces():
    ref = parse("='My Sheet'!B2")

    assert ref == CellRef(2, 2, "My Sheet")
    assert print_canonical(ref) == "='My Sheet'!B2"


def test_whole_column_and_row_ranges():
    column = parse("=SUM(A:C)").args[0]
    row = parse("=SUM($1:$3)").args[0]

    assert column.start == CellRef(col=1, row=None) and column.end == CellRef(col=3, row=None)
    assert row.start.row == 1 and row.start.col is None and row.start.row_absolute


def test_union_inside_parentheses():
    ast = parse("=SUM((A1,B1))")

    assert ast == FunctionCall("SUM", (Paren(BinaryOp(",", CellRef(1, 1), CellRef(2, 1))),))
    assert print_canonical(ast) == "=SUM((A1,B1))"


def test_missing_argument_and_array_literal():
    ast = parse("=IF(A1,,{1,2;-3,4})")

    assert ast.args[1] == MissingArg()
    assert ast.args[2] == ArrayLit((
        (NumberLit(1), NumberLit(2)),
        (UnaryOp("-", NumberLit(3)), NumberLit(4)),
    ))


def test_names_and_sheet_qualified_names():
    ast = parse("=VAT*Rates!Discount")

    assert ast == BinaryOp("*", NameRef("VAT"), NameRef("Discount", "Rates"))


def test_external_reference_keeps_book_prefix():
    ref = parse("=[Book1]Sheet1!A1")

    assert isinstance(ref, CellRef)
    assert ref.sheet == "[Book1]Sheet1"


@pytest.mark.parametrize("text", ["=A1+", "=SUM(A1", "=(1+2", "=1 2", "A1+1", "=A1:"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as excinfo:
        parse("=1+*2")

    assert excinfo.value.position == 3
    assert excinfo.value.found == "'*'"


@pytest.mark.parametrize("text", ["=R1C1+1", "=R[-1]C", "=Table1[Amount]"])
def test_unsupported_notation(text):
    with pytest.raises(UnsupportedNotation):
        parse(text)


def test_canonical_printing():
    """Регистр нормализуется, скобки сохраняются"""
    assert print_canonical(parse("=a1+b2")) == "=A1+B2"
    assert print_canonical(parse("=SUM((A1))")) == "=SUM((A1))"
    assert print_canonical(parse("=  1 +  2")) == "=1+2"


def test_references_in_order():
    assert references(parse("=F14*(1-F16)")) == [F14, F16]
    assert references(parse("=1+2")) == []
    assert references(parse("=SUM(A1:A3)+VAT")) == [
        RangeRef(CellRef(1, 1), CellRef(1, 3)),
        NameRef("VAT"),
    ]


def test_references_keep_duplicates():
    assert references(parse("=A1+A1")) == [CellRef(1, 1), CellRef(1, 1)]


def test_numeric_literals():
    ast = parse("=F14*(1-F16)")
    literals = numeric_literals(ast)

    assert [value for value, _ in literals] == [1]
    assert node_at(ast, literals[0][1]) == NumberLit(1)
    assert numeric_literals(parse("=A1+B1")) == []
    assert [v for v, _ in numeric_literals(parse("=0.21*C5 + 0.21*C6"))] == [0.21, 0.21]


def test_signed_value_follows_unary_minus():
    ast = parse("=A1*-(2)")
    (_, path), = numeric_literals(ast)

    assert signed_value(ast, path) == -2


@pytest.mark.parametrize("text, builtin, operators", [
    ("=F14*(1-F16)", 0, 2),
    ("=SUM(A1:A3)", 1, 1),
    ("=IF(SUM(A1:A3)>0,1,0)", 2, 3),
    ("=A1", 0, 0),
    ("=A1*10%", 0, 2),
])
def test_nesting_depth(text, builtin, operators):
    """Вложенность: только встроенные функции или также операции"""
    ast = parse(text)

    assert nesting_depth(ast, NestingSemantics.BUILTIN_ONLY) == builtin
    assert nesting_depth(ast, NestingSemantics.OPERATORS_COUNT) == operators
