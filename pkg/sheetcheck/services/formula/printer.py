"""
Каноническая печать дерева формулы

Печать детерминирована: имена функций и ссылки в верхнем регистре, скобки из
дерева сохраняются. Для деревьев, полученных из parse, лишних скобок не
добавляется, поэтому parse(print_canonical(ast)) == ast.
"""
import re

from openpyxl.utils import get_column_letter

from sheetcheck.services.formula.ast import (
    ATOM_PRECEDENCE,
    PRECEDENCE,
    UNION_PRECEDENCE,
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

SIMPLE_SHEET = re.compile(r"^[A-Za-z_][A-Za-z0-9_.]*$")
LOOKS_LIKE_REF = re.compile(r"^(?:\$?[A-Za-z]{1,3}\$?\d+|R\d*C\d*|TRUE|FALSE)$", re.IGNORECASE)
EXTERNAL_PREFIX = re.compile(r"^(\[[^\]]+\])(.*)$")


def print_canonical(ast: Node) -> str:
    return "=" + _print(ast, inside_paren=False)


def format_number(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def format_sheet(sheet: str) -> str:
    prefix = ""
    rest = sheet
    match = EXTERNAL_PREFIX.match(sheet)
    if match:
        prefix, rest = match.group(1), match.group(2)
    plain = (not rest or SIMPLE_SHEET.match(rest)) and not LOOKS_LIKE_REF.match(rest)
    if plain and " " not in prefix and "'" not in prefix:
        return f"{sheet}!"
    return "'" + sheet.replace("'", "''") + "'!"


def format_cell(ref: CellRef, with_sheet: bool = True) -> str:
    text = ""
    if ref.col is not None:
        text += ("$" if ref.col_absolute else "") + get_column_letter(ref.col)
    if ref.row is not None:
        text += ("$" if ref.row_absolute else "") + str(ref.row)
    if with_sheet and ref.sheet is not None:
        return format_sheet(ref.sheet) + text
    return text


def format_reference(node: Node) -> str:
    """Текст ссылки без ведущего '=' (для отчётов)"""
    return _print(node, inside_paren=False)


def precedence(node: Node) -> int:
    if isinstance(node, BinaryOp):
        return UNION_PRECEDENCE if node.op == "," else PRECEDENCE[node.op]
    if isinstance(node, UnaryOp):
        return PRECEDENCE["%"] if node.op == "%" else PRECEDENCE["unary"]
    return ATOM_PRECEDENCE


def _ends_with_prefix(node: Node) -> bool:
    """Заканчивается ли текст узла унарным ±, который поглотит следующий ^"""
    if isinstance(node, UnaryOp):
        return node.op != "%"
    if isinstance(node, BinaryOp):
        return _ends_with_prefix(node.right)
    return False


def _wrap(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _print(node: Node, inside_paren: bool) -> str:
    if isinstance(node, NumberLit):
        return format_number(node.value)
    if isinstance(node, TextLit):
        return '"' + node.value.replace('"', '""') + '"'
    if isinstance(node, BoolLit):
        return "TRUE" if node.value else "FALSE"
    if isinstance(node, ErrorLit):
        return node.code
    if isinstance(node, CellRef):
        return format_cell(node)
    if isinstance(node, RangeRef):
        return format_cell(node.start) + ":" + format_cell(node.end, with_sheet=False)
    if isinstance(node, NameRef):
        return (format_sheet(node.sheet) if node.sheet else "") + node.identifier
    if isinstance(node, MissingArg):
        return ""
    if isinstance(node, Paren):
        return "(" + _print(node.inner, inside_paren=True) + ")"
    if isinstance(node, FunctionCall):
        return node.name + "(" + ",".join(_print(a, False) for a in node.args) + ")"
    if isinstance(node, ArrayLit):
        return "{" + ";".join(",".join(_print(i, False) for i in row) for row in node.rows) + "}"
    if isinstance(node, UnaryOp):
        return _print_unary(node)
    if isinstance(node, BinaryOp):
        text = _print_binary(node)
        if node.op == "," and not inside_paren:
            return f"({text})"
        return text
    raise TypeError(f"not a formula node: {node!r}")


def _is_union(node: Node) -> bool:
    return isinstance(node, BinaryOp) and node.op == ","


def _operand(child: Node, needs_parens: bool) -> str:
    # объединение вне скобок печатается со своими скобками
    if _is_union(child):
        return _print(child, inside_paren=False)
    return _wrap(_print(child, inside_paren=False), needs_parens)


def _print_unary(node: UnaryOp) -> str:
    if node.op == "%":
        return _operand(node.operand, precedence(node.operand) < PRECEDENCE["%"]) + "%"
    return node.op + _operand(node.operand, precedence(node.operand) < PRECEDENCE["unary"])


def _print_binary(node: BinaryOp) -> str:
    left, right = node.left, node.right

    if node.op == ",":
        return _print(left, inside_paren=True) + "," + _operand(right, False)

    own = precedence(node)
    if node.op == "^":
        left_needs = precedence(left) <= PRECEDENCE["unary"] or _ends_with_prefix(left)
        right_needs = not (isinstance(right, UnaryOp) or precedence(right) > own)
    else:
        left_needs = precedence(left) < own
        right_needs = precedence(right) <= own

    return _operand(left, left_needs) + node.op + _operand(right, right_needs)


__all__ = ["print_canonical", "format_reference", "format_cell", "format_sheet", "precedence"]
