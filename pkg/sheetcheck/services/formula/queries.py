"""
Запросы к дереву формулы: ссылки, числовые литералы, глубина вложенности
"""
from enum import Enum
from typing import Iterator, List, Tuple

from sheetcheck.services.formula.ast import (
    BinaryOp,
    CellRef,
    FunctionCall,
    NameRef,
    Node,
    NumberLit,
    Paren,
    RangeRef,
    Reference,
    UnaryOp,
    children,
)

Path = Tuple[int, ...]


class NestingSemantics(str, Enum):
    """Что считать функцией при подсчёте вложенности"""

    BUILTIN_ONLY = "builtin_only"  # только встроенные функции (SUM, IF, ...)
    OPERATORS_COUNT = "operators_count"  # инфиксные и префиксные операции тоже


def walk(ast: Node, path: Path = ()) -> Iterator[Tuple[Node, Path]]:
    """Обход в глубину слева направо: (узел, путь индексов потомков)"""
    stack = [(ast, path)]
    while stack:
        node, node_path = stack.pop()
        yield node, node_path
        kids = children(node)
        for index in range(len(kids) - 1, -1, -1):
            stack.append((kids[index], node_path + (index,)))


def node_at(ast: Node, path: Path) -> Node:
    node = ast
    for index in path:
        node = children(node)[index]
    return node


def references(ast: Node) -> List[Reference]:
    """Все ссылки (ячейки, диапазоны, имена) слева направо, с повторами"""
    return [node for node, _ in walk(ast) if isinstance(node, (CellRef, RangeRef, NameRef))]


def numeric_literals(ast: Node) -> List[Tuple[float, Path]]:
    return [(node.value, path) for node, path in walk(ast) if isinstance(node, NumberLit)]


def signed_value(ast: Node, path: Path) -> float:
    """Значение литерала с учётом унарных знаков над ним (-1 это 1 под минусом)"""
    value = node_at(ast, path).value
    for depth in range(len(path) - 1, -1, -1):
        parent = node_at(ast, path[:depth])
        if isinstance(parent, UnaryOp) and parent.op in ("+", "-"):
            if parent.op == "-":
                value = -value
        elif not isinstance(parent, Paren):
            break
    return value


def function_names(ast: Node) -> List[str]:
    return [node.name for node, _ in walk(ast) if isinstance(node, FunctionCall)]


def _counts(node: Node, semantics: NestingSemantics) -> bool:
    if isinstance(node, FunctionCall):
        return True
    if semantics is NestingSemantics.OPERATORS_COUNT:
        return isinstance(node, (BinaryOp, UnaryOp))
    return False


def nesting_depth(ast: Node, semantics: NestingSemantics = NestingSemantics.BUILTIN_ONLY) -> int:
    """Максимальное число «функциональных» узлов на пути от корня к листу

    Скобки прозрачны. Вложенной считается формула с глубиной >= 2.
    """
    best = 0
    stack = [(ast, 0)]
    while stack:
        node, depth = stack.pop()
        if _counts(node, semantics):
            depth += 1
        best = max(best, depth)
        stack.extend((kid, depth) for kid in children(node))
    return best


def is_nested(ast: Node, semantics: NestingSemantics) -> bool:
    return nesting_depth(ast, semantics) >= 2
