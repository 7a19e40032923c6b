"""
Разбор формул: лексер, парсер, каноническая печать и запросы к дереву
"""
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
    Reference,
    TextLit,
    UnaryOp,
    children,
)
from sheetcheck.services.formula.parser import parse
from sheetcheck.services.formula.printer import format_number, format_reference, print_canonical
from sheetcheck.services.formula.queries import (
    NestingSemantics,
    function_names,
    is_nested,
    nesting_depth,
    node_at,
    numeric_literals,
    references,
    signed_value,
    walk,
)

__all__ = [
    "ArrayLit", "BinaryOp", "BoolLit", "CellRef", "ErrorLit", "FunctionCall", "MissingArg",
    "NameRef", "Node", "NumberLit", "Paren", "RangeRef", "Reference", "TextLit", "UnaryOp",
    "children", "parse", "print_canonical", "format_number", "format_reference", "NestingSemantics",
    "function_names", "is_nested", "nesting_depth", "node_at", "numeric_literals",
    "references", "signed_value", "walk",
]
