"""
Граф зависимостей между ячейками и классификация ячеек

Рёбра идут от ячейки с формулой к ячейкам, на которые она ссылается. Диапазоны
раскрываются до существующих ячеек; диапазоны больше лимита дают одно
сводное ребро на область листа. Ошибки формул не прерывают построение и
записываются в diagnostics.
"""
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

import networkx as nx
import structlog

from sheetcheck.config import settings
from sheetcheck.exceptions import FormulaError, UnsupportedNotation
from sheetcheck.schemas.dataflow import CellClass, Diagnostic
from sheetcheck.schemas.workbook import CellAddress, CellKind, DefinedName, Rect, Workbook
from sheetcheck.services.formula import (
    CellRef,
    NameRef,
    Node,
    RangeRef,
    format_reference,
    parse,
    references,
)
from sheetcheck.services.formula.lexer import MAX_COLUMN, MAX_ROW
from sheetcheck.services.workbook.names import default_sheet, is_external, parse_target

logger = structlog.get_logger(__name__)

# (sheet_index, row, column)
Key = Tuple[int, int, int]
# ("region", sheet_index, min_row, min_col, max_row, max_col)
RegionKey = Tuple[str, int, int, int, int, int]

MAX_CYCLE_MEMBERS = 10


def cell_key(address: CellAddress) -> Key:
    return (address.sheet_index, address.row, address.column)


def key_address(key: Key) -> CellAddress:
    return CellAddress(sheet_index=key[0], row=key[1], column=key[2])


@dataclass
class DependencyGraph:
    """Граф зависимостей книги вместе с разобранными формулами"""

    workbook: Workbook
    graph: nx.DiGraph
    asts: Dict[Key, Node] = field(default_factory=dict)
    name_uses: Dict[Key, List[DefinedName]] = field(default_factory=dict)
    regions: Dict[RegionKey, Rect] = field(default_factory=dict)
    region_members: Set[Key] = field(default_factory=set)
    cycles: List[List[Key]] = field(default_factory=list)
    diagnostics: List[Diagnostic] = field(default_factory=list)

    def references_to(self, key: Key) -> List[Key]:
        """Ячейки с формулами, ссылающиеся на key напрямую"""
        if key not in self.graph:
            return []
        return sorted(p for p in self.graph.predecessors(key) if len(p) == 3)

    def inbound_count(self, key: Key) -> int:
        # предшественники ячейки всегда ячейки: у областей нет исходящих рёбер
        return self.graph.in_degree(key) if key in self.graph else 0

    def is_referenced(self, key: Key) -> bool:
        return self.inbound_count(key) > 0 or key in self.region_members

    def dependencies_of(self, key: Key) -> List[Key]:
        if key not in self.graph:
            return []
        return sorted(s for s in self.graph.successors(key) if len(s) == 3)

    def cell_edges(self) -> List[Tuple[Key, Key]]:
        return sorted((u, v) for u, v in self.graph.edges if len(v) == 3)

    def label(self, node) -> str:
        if len(node) == 3:
            return self.workbook.locate(key_address(node))
        _, sheet_index, min_row, min_col, max_row, max_col = node
        start = CellRef(col=min_col, row=min_row)
        end = CellRef(col=max_col, row=max_row)
        return f"{self.workbook.sheets[sheet_index].name}!{format_reference(RangeRef(start, end))}"


def _bound(value: Optional[int], edge: int) -> int:
    return edge if value is None else value


class GraphBuilder:
    """Построение графа для одной книги; однопоточное и детерминированное"""

    def __init__(self, workbook: Workbook, expansion_limit: Optional[int] = None):
        self.workbook = workbook
        self.expansion_limit = expansion_limit or settings.RANGE_EXPANSION_LIMIT
        self.result = DependencyGraph(workbook=workbook, graph=nx.DiGraph())
        self._targets: Dict[Tuple[Optional[str], str], Optional[Node]] = {}

    def build(self) -> DependencyGraph:
        graph = self.result.graph
        for cell in self.workbook.iter_cells():
            graph.add_node(cell_key(cell.address))

        for cell in self.workbook.formula_cells():
            key = cell_key(cell.address)
            location = self.workbook.locate(cell.address)
            try:
                ast = parse(cell.formula)
            except UnsupportedNotation as e:
                self._diagnose("unsupported_notation", location, str(e))
                continue
            except FormulaError as e:
                logger.debug("formula_parse_failed", cell=location, error=str(e))
                self._diagnose("parse_error", location, str(e))
                continue
            self.result.asts[key] = ast
            sheet = self.workbook.sheets[cell.address.sheet_index].name
            self._link(key, location, references(ast), sheet, visited=set())

        self._collect_region_members()
        self._find_cycles()
        logger.debug(
            "dependency_graph_built",
            nodes=graph.number_of_nodes(),
            edges=graph.number_of_edges(),
            diagnostics=len(self.result.diagnostics),
        )
        return self.result

    def _diagnose(self, kind: str, location: str, detail: str) -> None:
        self.result.diagnostics.append(Diagnostic(kind=kind, location=location, detail=detail))

    def _sheet_index(self, sheet: Optional[str], context: str, location: str) -> Optional[int]:
        name = sheet or context
        if is_external(name):
            self._diagnose("dangling_reference", location, f"external workbook {name}")
            return None
        index = self.workbook.sheet_index(name)
        if index is None:
            self._diagnose("dangling_reference", location, f"unknown sheet {name!r}")
        return index

    def _link(self, key: Key, location: str, refs: Iterable[Node], context: str,
              visited: Set[str]) -> None:
        for ref in refs:
            if isinstance(ref, NameRef):
                self._link_name(key, location, ref, context, visited)
            elif isinstance(ref, CellRef):
                index = self._sheet_index(ref.sheet, context, location)
                if index is None:
                    continue
                if ref.row is None or ref.col is None:
                    self._link_range(key, location, index, RangeRef(ref, ref))
                elif (ref.row, ref.col) in self.workbook.sheets[index].cells:
                    self.result.graph.add_edge(key, (index, ref.row, ref.col))
            elif isinstance(ref, RangeRef):
                index = self._sheet_index(ref.sheet, context, location)
                if index is not None:
                    self._link_range(key, location, index, ref)

    def _link_range(self, key: Key, location: str, index: int, ref: RangeRef) -> None:
        # у диапазонов целых столбцов и строк недостающие границы берутся по краям сетки
        rows = [_bound(ref.start.row, 1), _bound(ref.end.row, MAX_ROW)]
        cols = [_bound(ref.start.col, 1), _bound(ref.end.col, MAX_COLUMN)]
        rect = Rect(min_row=min(rows), min_col=min(cols), max_row=max(rows), max_col=max(cols))
        sheet = self.workbook.sheets[index]

        if rect.area > self.expansion_limit:
            region = ("region", index, rect.min_row, rect.min_col, rect.max_row, rect.max_col)
            self.result.regions[region] = rect
            self.result.graph.add_edge(key, region)
            self._diagnose(
                "expansion_capped", location,
                f"{self.result.label(region)} has {rect.area} cells; summarised as one region",
            )
            return

        if rect.area <= len(sheet.cells):
            members = (
                (r, c)
                for r in range(rect.min_row, rect.max_row + 1)
                for c in range(rect.min_col, rect.max_col + 1)
                if (r, c) in sheet.cells
            )
        else:
            members = (pos for pos in sheet.cells if rect.contains(*pos))
        self.result.graph.add_edges_from((key, (index, r, c)) for r, c in members)

    def _target(self, name: DefinedName) -> Optional[Node]:
        cache_key = (name.scope, name.name.upper())
        if cache_key not in self._targets:
            self._targets[cache_key] = parse_target(name)
        return self._targets[cache_key]

    def _link_name(self, key: Key, location: str, ref: NameRef, context: str,
                   visited: Set[str]) -> None:
        scope = ref.sheet or context
        name = self.workbook.lookup_name(ref.identifier, scope)
        if name is None:
            self._diagnose("dangling_reference", location, f"undefined name {ref.identifier!r}")
            return
        self.result.name_uses.setdefault(key, []).append(name)
        marker = f"{name.scope}|{name.name.upper()}"
        if marker in visited:
            return
        target = self._target(name)
        if target is None:
            return
        self._link(key, location, references(target), default_sheet(self.workbook, name),
                   visited | {marker})

    def _collect_region_members(self) -> None:
        for (_, index, *_), rect in self.result.regions.items():
            for row, col in self.workbook.sheets[index].cells:
                if rect.contains(row, col):
                    self.result.region_members.add((index, row, col))

    def _find_cycles(self) -> None:
        graph = self.result.graph
        for component in nx.strongly_connected_components(graph):
            members = sorted(component)
            if len(members) == 1 and not graph.has_edge(members[0], members[0]):
                continue
            self.result.cycles.append(members)
        self.result.cycles.sort()
        for members in self.result.cycles:
            shown = [self.result.label(m) for m in members[:MAX_CYCLE_MEMBERS]]
            more = len(members) - len(shown)
            detail = "cycle through " + ", ".join(shown) + (f" and {more} more" if more else "")
            self._diagnose("circular_dependency", shown[0], detail)


def build_graph(workbook: Workbook, expansion_limit: Optional[int] = None) -> DependencyGraph:
    """Граф зависимостей книги; ошибки формул попадают в diagnostics"""
    return GraphBuilder(workbook, expansion_limit).build()


def classify(workbook: Workbook, graph: DependencyGraph) -> Dict[CellAddress, CellClass]:
    """Класс каждой адресованной ячейки книги

    Литерал, на который ссылаются, это Input, иначе Label. Формула, на которую
    ссылаются, это Calculation, иначе Output. Ячейки циклов всегда имеют входящие
    рёбра и поэтому становятся Calculation.
    """
    classes: Dict[CellAddress, CellClass] = {}
    for cell in workbook.iter_cells():
        if cell.kind is CellKind.EMPTY:
            classes[cell.address] = CellClass.EMPTY
            continue
        referenced = graph.is_referenced(cell_key(cell.address))
        if cell.kind is CellKind.FORMULA:
            classes[cell.address] = CellClass.CALCULATION if referenced else CellClass.OUTPUT
        else:
            classes[cell.address] = CellClass.INPUT if referenced else CellClass.LABEL
    return classes


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: DependencyGraph) -> str:
    """Граф в формате DOT для отладки (--dump-graph)"""
    lines = ["digraph dependencies {", "  rankdir=LR;"]
    for region in sorted(graph.regions):
        lines.append(f"  {_dot_id(graph.label(region))} [shape=box];")
    for source, target in sorted(graph.graph.edges, key=lambda e: (e[0], str(e[1]))):
        lines.append(f"  {_dot_id(graph.label(source))} -> {_dot_id(graph.label(target))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
