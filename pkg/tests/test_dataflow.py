"""
Тесты графа зависимостей и классификации ячеек
"""
import random
import re

import pytest
from openpyxl.utils.cell import range_boundaries

from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.schemas.workbook import CellAddress
from sheetcheck.services.dataflow import build_graph, cell_key, classify, to_dot
from tests.conftest import fixture_workbook

REFERENCE = re.compile(r"[A-E]\d+(?::[A-E]\d+)?")


def address(coordinate, sheet_index=0):
    _, _, col, row = range_boundaries(coordinate)
    return CellAddress(sheet_index=sheet_index, column=col, row=row)


def key(coordinate, sheet_index=0):
    return cell_key(address(coordinate, sheet_index))


def diagnostic_kinds(graph):
    return [d.kind for d in graph.diagnostics]


def test_formula_points_to_referenced_cell():
    workbook = fixture_workbook({"A1": {"v": 2}, "B1": {"f": "=A1*3"}})
    graph = build_graph(workbook)

    assert graph.cell_edges() == [(key("B1"), key("A1"))]
    assert graph.references_to(key("A1")) == [key("B1")]
    assert graph.dependencies_of(key("B1")) == [key("A1")]


def test_range_expands_to_existing_cells():
    """Пустые адреса диапазона рёбер не дают"""
    workbook = fixture_workbook({"A1": {"v": 1}, "A2": {"v": 2}, "B1": {"f": "=SUM(A1:A3)"}})
    graph = build_graph(workbook)

    assert graph.dependencies_of(key("B1")) == [key("A1"), key("A2")]


def test_large_range_becomes_region():
    workbook = fixture_workbook({
        "A1": {"v": 1}, "A2": {"v": 2}, "B1": {"f": "=SUM(A:A)"}, "C1": {"v": "label"},
    })
    graph = build_graph(workbook, expansion_limit=100)
    classes = classify(workbook, graph)

    assert list(graph.regions) == [("region", 0, 1, 1, 1_048_576, 1)]
    assert diagnostic_kinds(graph) == ["expansion_capped"]
    assert graph.region_members == {key("A1"), key("A2")}
    assert classes[address("A1")] is CellClass.INPUT
    assert classes[address("C1")] is CellClass.LABEL


def test_names_resolve_to_targets(clean_workbook):
    graph = build_graph(clean_workbook)
    net = key("B1", 2)

    assert graph.dependencies_of(net) == [key("B2", 1), key("B3", 1)]
    assert [n.name for n in graph.name_uses[net]] == ["in_qty", "in_price"]
    assert graph.diagnostics == []


def test_clean_classification(clean_workbook):
    classes = classify(clean_workbook, build_graph(clean_workbook))

    assert classes[address("B1", 1)] is CellClass.INPUT
    assert classes[address("A1", 1)] is CellClass.LABEL
    assert classes[address("B1", 2)] is CellClass.CALCULATION
    assert classes[address("B1", 3)] is CellClass.OUTPUT
    assert classes[address("A1", 0)] is CellClass.LABEL


def test_cycle_is_reported_and_members_are_calculations():
    workbook = fixture_workbook({"A1": {"f": "=B1+1"}, "B1": {"f": "=A1*2"}, "C1": {"f": "=C1"}})
    graph = build_graph(workbook)
    classes = classify(workbook, graph)

    assert graph.cycles == [[key("A1"), key("B1")], [key("C1")]]
    assert diagnostic_kinds(graph) == ["circular_dependency", "circular_dependency"]
    assert {classes[address(c)] for c in ("A1", "B1", "C1")} == {CellClass.CALCULATION}


@pytest.mark.parametrize("formula, kind", [
    ("=1+", "parse_error"),
    ("=R1C1*2", "unsupported_notation"),
    ("=Missing!A1", "dangling_reference"),
    ("=NoSuchName*2", "dangling_reference"),
    ("=[Other.xlsx]Sheet1!A1", "dangling_reference"),
])
def test_bad_formulas_become_diagnostics(formula, kind):
    workbook = fixture_workbook({"A1": {"v": 1}, "B1": {"f": formula}})
    graph = build_graph(workbook)

    assert diagnostic_kinds(graph) == [kind]
    assert graph.diagnostics[0].location == "Model!B1"
    assert graph.cell_edges() == []


def test_empty_cells_are_classified_empty():
    workbook = fixture_workbook({"A1": {"comment": "note only"}, "B1": {"v": "x"}})

    assert classify(workbook, build_graph(workbook))[address("A1")] is CellClass.EMPTY


def test_dot_output():
    workbook = fixture_workbook({"A1": {"v": 2}, "B1": {"f": "=A1*3"}})
    dot = to_dot(build_graph(workbook))

    assert dot.startswith("digraph dependencies {")
    assert '  "Model!B1" -> "Model!A1";' in dot


def _random_fixture(rng):
    """До 50 ячеек в A1:E10, треть из них с формулами"""
    coordinates = [f"{c}{r}" for c in "ABCDE" for r in range(1, 11)]
    cells = {}
    for coordinate in rng.sample(coordinates, rng.randint(1, 50)):
        if rng.random() < 0.35:
            refs = []
            for _ in range(rng.randint(1, 3)):
                start = rng.choice(coordinates)
                if rng.random() < 0.3:
                    end = rng.choice(coordinates)
                    refs.append(f"SUM({start}:{end})")
                else:
                    refs.append(start)
            cells[coordinate] = {"f": "=" + "+".join(refs)}
        else:
            cells[coordinate] = {"v": rng.randint(0, 9)}
    return cells


def _oracle_edges(cells):
    present = {key(c) for c in cells}
    edges = set()
    for coordinate, spec in cells.items():
        if "f" not in spec:
            continue
        for ref in REFERENCE.findall(spec["f"]):
            col_a, row_a, col_b, row_b = range_boundaries(ref)
            for r in range(min(row_a, row_b), max(row_a, row_b) + 1):
                for c in range(min(col_a, col_b), max(col_a, col_b) + 1):
                    if (0, r, c) in present:
                        edges.add((key(coordinate), (0, r, c)))
    return sorted(edges)


@pytest.mark.parametrize("seed", range(20))
def test_random_workbooks_match_brute_force(seed):
    """Рёбра и классы сверяются с прямым перебором ссылок"""
    cells = _random_fixture(random.Random(seed))
    workbook = fixture_workbook(cells)
    graph = build_graph(workbook)
    classes = classify(workbook, graph)
    expected = _oracle_edges(cells)

    assert graph.cell_edges() == expected
    targets = {target for _, target in expected}
    for coordinate, spec in cells.items():
        referenced = key(coordinate) in targets
        if "f" in spec:
            wanted = CellClass.CALCULATION if referenced else CellClass.OUTPUT
        else:
            wanted = CellClass.INPUT if referenced else CellClass.LABEL
        assert classes[address(coordinate)] is wanted
