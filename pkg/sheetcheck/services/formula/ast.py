"""
Узлы дерева разбора формулы

Узлы неизменяемы и сравниваются структурно; дочерние узлы хранятся в кортежах.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class TextLit:
    value: str


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class ErrorLit:
    code: str


@dataclass(frozen=True)
class CellRef:
    """Ссылка на ячейку; у концов диапазона целого столбца нет строки (и наоборот)"""
    col: Optional[int]
    row: Optional[int]
    sheet: Optional[str] = None
    col_absolute: bool = False
    row_absolute: bool = False

    @property
    def is_fully_absolute(self) -> bool:
        return (self.col is None or self.col_absolute) and (self.row is None or self.row_absolute)


@dataclass(frozen=True)
class RangeRef:
    start: CellRef
    end: CellRef

    @property
    def sheet(self) -> Optional[str]:
        return self.start.sheet


@dataclass(frozen=True)
class NameRef:
    identifier: str
    sheet: Optional[str] = None


@dataclass(frozen=True)
class FunctionCall:
    name: str
    args: Tuple["Node", ...] = ()


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Paren:
    inner: "Node"


@dataclass(frozen=True)
class ArrayLit:
    """Константный массив {1,2;3,4}: строки из литералов"""
    rows: Tuple[Tuple["Node", ...], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class MissingArg:
    """Пропущенный аргумент функции: IF(A1,,B1)"""


Node = Union[
    NumberLit, TextLit, BoolLit, ErrorLit, CellRef, RangeRef, NameRef,
    FunctionCall, BinaryOp, UnaryOp, Paren, ArrayLit, MissingArg,
]
Reference = Union[CellRef, RangeRef, NameRef]

BINARY_OPERATORS = ("+", "-", "*", "/", "^", "&", "=", "<", ">", "<=", ">=", "<>", ",")
PREFIX_OPERATORS = ("+", "-")
POSTFIX_OPERATORS = ("%",)

# Приоритеты: чем больше, тем сильнее связывание
PRECEDENCE = {
    "=": 1, "<": 1, ">": 1, "<=": 1, ">=": 1, "<>": 1,
    "&": 2,
    "+": 3, "-": 3,
    "*": 4, "/": 4,
    "unary": 5,
    "^": 6,
    "%": 7,
}
UNION_PRECEDENCE = 0
ATOM_PRECEDENCE = 9


def children(node: Node) -> Tuple[Node, ...]:
    """Непосредственные потомки узла в порядке слева направо"""
    if isinstance(node, FunctionCall):
        return node.args
    if isinstance(node, BinaryOp):
        return (node.left, node.right)
    if isinstance(node, UnaryOp):
        return (node.operand,)
    if isinstance(node, Paren):
        return (node.inner,)
    if isinstance(node, ArrayLit):
        return tuple(item for row in node.rows for item in row)
    return ()
