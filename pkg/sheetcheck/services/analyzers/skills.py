"""
Навыки построения модели: Q17–Q26
"""
import re
from collections import defaultdict
from typing import Dict, List, Optional, Tuple

from sheetcheck.schemas.analysis import Confidence, Evidence, Finding, VerdictKind
from sheetcheck.schemas.dataflow import CellClass
from sheetcheck.services.analyzers.context import AnalysisContext, plural
from sheetcheck.services.analyzers.registry import rule
from sheetcheck.services.formula import (
    CellRef,
    FunctionCall,
    NameRef,
    RangeRef,
    format_reference,
    nesting_depth,
    references,
    walk,
)
from sheetcheck.services.workbook.names import default_sheet, is_external, parse_target

CAMEL_HEAD = re.compile(r"^[A-Za-z][a-z0-9]*(?=[A-Z])")
CONVENTIONS = {
    "snake_case": re.compile(r"^[a-z][a-z0-9]*(?:_[a-z0-9]+)*$"),
    # Каждая заглавная буква начинает слово: VAT сюда не подходит
    "CamelCase": re.compile(r"^[A-Za-z][a-z0-9]+(?:[A-Z][a-z0-9]+)*$"),
    "UPPER": re.compile(r"^[A-Z][A-Z0-9]*(?:_[A-Z0-9]+)*$"),
}


def name_prefix(name: str) -> str:
    """Категория имени: часть до первого '_' или первое слово CamelCase"""
    stripped = name.strip("_")
    if "_" in stripped:
        return stripped.split("_", 1)[0].lower()
    if stripped.isupper():
        return stripped.lower()
    match = CAMEL_HEAD.match(stripped)
    return (match.group(0) if match else stripped).lower()


def naming_convention(names: List[str]) -> Optional[str]:
    """Единое соглашение об именовании, которому следуют все имена"""
    for convention, pattern in CONVENTIONS.items():
        if all(pattern.match(n) for n in names):
            return convention
    return None


def _distinct_names(ctx: AnalysisContext) -> List[str]:
    seen: Dict[str, str] = {}
    for dn in ctx.workbook.defined_names:
        seen.setdefault(dn.name.upper(), dn.name)
    return [seen[key] for key in sorted(seen)]


def _names_unused(ctx: AnalysisContext, question_id: str) -> Optional[Finding]:
    if ctx.workbook.defined_names and ctx.used_names:
        return None
    return ctx.finding(question_id, VerdictKind.NA,
                       summary="names are not used in formulas")


@rule("Q17")
def array_functionality(ctx: AnalysisContext) -> Finding:
    arrays = [ctx.evidence(c, "array formula") for c in ctx.workbook.formula_cells()
              if c.is_array]
    if arrays:
        return ctx.finding("Q17", VerdictKind.YES, evidence=arrays,
                           summary=f"{plural(len(arrays), 'array formula cell')}")
    return ctx.finding("Q17", VerdictKind.NO, summary="no array formulas")


@rule("Q18")
def output_windows(ctx: AnalysisContext) -> Finding:
    output_sheets = sorted({c.address.sheet_index for c in ctx.cells_of(CellClass.OUTPUT)})
    with_panes = [i for i in output_sheets if ctx.workbook.sheets[i].pane_state.is_set]
    if with_panes:
        evidence = [ctx.sheet_evidence(i, f"{ctx.workbook.sheets[i].pane_state.state} panes")
                    for i in with_panes]
        return ctx.finding("Q18", VerdictKind.YES, evidence=evidence,
                           summary="output sheets use frozen or split panes")
    evidence = [ctx.sheet_evidence(i, "output sheet without panes") for i in output_sheets]
    return ctx.finding("Q18", VerdictKind.NO, evidence=evidence,
                       summary="no output sheet uses frozen or split panes")


@rule("Q19")
def names_used(ctx: AnalysisContext) -> Finding:
    if not ctx.workbook.defined_names:
        return ctx.finding("Q19", VerdictKind.NO, summary="the workbook defines no names")
    if not ctx.used_names:
        return ctx.finding("Q19", VerdictKind.NO,
                           summary=f"{plural(len(_distinct_names(ctx)), 'name')} defined "
                                   "but never used in formulas")
    evidence = [Evidence(note=f"name {n} used in formulas") for n in ctx.used_names]
    return ctx.finding("Q19", VerdictKind.YES, evidence=evidence,
                       summary=f"{plural(len(ctx.used_names), 'name')} used in formulas")


@rule("Q20")
def names_categorised(ctx: AnalysisContext) -> Finding:
    unused = _names_unused(ctx, "Q20")
    if unused is not None:
        return unused
    groups: Dict[str, List[str]] = defaultdict(list)
    for name in _distinct_names(ctx):
        groups[name_prefix(name)].append(name)
    singles = [names[0] for names in groups.values() if len(names) < 2]
    evidence = [Evidence(note=f"name {n} shares no prefix with other names") for n in singles]
    if len(groups) >= 2 and not singles:
        return ctx.finding("Q20", VerdictKind.YES, confidence=Confidence.MEDIUM,
                           summary=f"names fall into {len(groups)} prefix groups: "
                                   + ", ".join(sorted(groups)))
    return ctx.finding("Q20", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                       summary=f"names do not form categories ({len(groups)} prefix groups, "
                               f"{len(singles)} ungrouped)")


@rule("Q21")
def names_composed(ctx: AnalysisContext) -> Finding:
    unused = _names_unused(ctx, "Q21")
    if unused is not None:
        return unused
    names = _distinct_names(ctx)
    convention = naming_convention(names)
    if convention is not None:
        return ctx.finding("Q21", VerdictKind.YES, confidence=Confidence.MEDIUM,
                           summary=f"all names follow {convention}")
    evidence = [
        Evidence(note=f"name {n} matches no common convention")
        for n in names if not any(p.match(n) for p in CONVENTIONS.values())
    ] or [Evidence(note="names mix several conventions")]
    return ctx.finding("Q21", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                       summary="names mix casing conventions")


RangeKey = Tuple[int, int, int, int, int]


def _named_targets(ctx: AnalysisContext) -> Tuple[Dict[Tuple[int, int, int], str],
                                                   Dict[RangeKey, str]]:
    cells: Dict[Tuple[int, int, int], str] = {}
    ranges: Dict[RangeKey, str] = {}
    for dn in ctx.workbook.defined_names:
        target = parse_target(dn)
        if not isinstance(target, (CellRef, RangeRef)):
            continue
        index = _resolve_sheet(ctx, target.sheet or default_sheet(ctx.workbook, dn))
        if index is None:
            continue
        if isinstance(target, CellRef) and target.row is not None and target.col is not None:
            cells.setdefault((index, target.row, target.col), dn.name)
        elif isinstance(target, RangeRef):
            key = _range_key(index, target)
            if key is not None:
                ranges.setdefault(key, dn.name)
    return cells, ranges


def _resolve_sheet(ctx: AnalysisContext, sheet: Optional[str]) -> Optional[int]:
    if sheet is None or is_external(sheet):
        return None
    return ctx.workbook.sheet_index(sheet)


def _range_key(index: int, ref: RangeRef) -> Optional[RangeKey]:
    rows = (ref.start.row, ref.end.row)
    cols = (ref.start.col, ref.end.col)
    if None in rows or None in cols:
        return None
    return (index, min(rows), min(cols), max(rows), max(cols))


@rule("Q22")
def names_consistently_used(ctx: AnalysisContext) -> Finding:
    unused = _names_unused(ctx, "Q22")
    if unused is not None:
        return unused
    named_cells, named_ranges = _named_targets(ctx)
    evidence = []
    for cell, ast in ctx.formulas:
        context = ctx.sheet_name(cell.address.sheet_index)
        for ref in references(ast):
            if isinstance(ref, NameRef):
                continue
            index = _resolve_sheet(ctx, ref.sheet or context)
            if index is None:
                continue
            name = None
            if isinstance(ref, CellRef):
                name = named_cells.get((index, ref.row, ref.col))
            else:
                key = _range_key(index, ref)
                name = named_ranges.get(key) if key else None
            if name is not None:
                evidence.append(ctx.evidence(
                    cell, f"uses {format_reference(ref)} instead of the name {name}"))
                break
    if evidence:
        return ctx.finding("Q22", VerdictKind.NO, evidence=evidence, confidence=Confidence.MEDIUM,
                           summary=f"{plural(len(evidence), 'formula')} bypass defined names")
    return ctx.finding("Q22", VerdictKind.YES, confidence=Confidence.MEDIUM,
                       summary="named cells are always referenced by name")


@rule("Q23")
def complex_functions(ctx: AnalysisContext) -> Finding:
    complex_names = set(ctx.config.complex_function_list)
    evidence = []
    for cell, ast in ctx.formulas:
        used = sorted({n.name for n, _ in walk(ast)
                       if isinstance(n, FunctionCall) and n.name in complex_names})
        if used:
            evidence.append(ctx.evidence(cell, ", ".join(used)))
    if evidence:
        return ctx.finding("Q23", VerdictKind.YES, evidence=evidence,
                           summary=f"{plural(len(evidence), 'formula')} use complex functions")
    return ctx.finding("Q23", VerdictKind.NO, summary="no complex functions used")


@rule("Q24")
def nested_functions(ctx: AnalysisContext) -> Finding:
    semantics = ctx.config.nesting_semantics
    nested = []
    for cell, ast in ctx.formulas:
        depth = nesting_depth(ast, semantics)
        if depth >= 2:
            nested.append((depth, cell))
    nested.sort(key=lambda item: -item[0])
    evidence = [ctx.evidence(cell, f"nesting depth {depth}") for depth, cell in nested]
    if nested:
        return ctx.finding("Q24", VerdictKind.YES, evidence=evidence,
                           summary=f"{plural(len(nested), 'nested formula')} "
                                   f"({semantics.value} semantics)")
    return ctx.finding("Q24", VerdictKind.NO,
                       summary=f"no nested formulas ({semantics.value} semantics)")


@rule("Q25")
def links_to_cells(ctx: AnalysisContext) -> Finding:
    linked = [(cell, refs) for cell, ast in ctx.formulas if (refs := references(ast))]
    if linked:
        evidence = [ctx.evidence(cell, format_reference(refs[0])) for cell, refs in linked]
        return ctx.finding("Q25", VerdictKind.YES, evidence=evidence,
                           summary=f"{plural(len(linked), 'formula')} reference other cells")
    return ctx.finding("Q25", VerdictKind.NO, summary="no formula references other cells")


def _is_anchored(ref) -> bool:
    if isinstance(ref, NameRef):
        return True
    if isinstance(ref, RangeRef):
        return ref.start.is_fully_absolute and ref.end.is_fully_absolute
    return ref.is_fully_absolute


@rule("Q26")
def absolute_links(ctx: AnalysisContext) -> Finding:
    evidence = []
    for cell, ast in ctx.formulas:
        for ref in references(ast):
            if _is_anchored(ref):
                evidence.append(ctx.evidence(cell, format_reference(ref)))
    if evidence:
        return ctx.finding("Q26", VerdictKind.YES, evidence=evidence,
                           summary=f"{plural(len(evidence), 'absolute reference or name')}")
    return ctx.finding("Q26", VerdictKind.NO, summary="only relative references are used")
