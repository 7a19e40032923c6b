"""
Тесты правил чек-листа
"""
import pytest

from sheetcheck.exceptions import UnknownQuestion
from sheetcheck.schemas.analysis import QUESTION_IDS, AnalyzerConfig, VerdictKind
from sheetcheck.services.analyzers import (
    detect_normalization_violations,
    evaluate,
    evaluate_all,
    format_consistency,
    naming_convention,
    registered_questions,
    sheet_naming,
)
from sheetcheck.services.dataflow import build_graph, classify
from sheetcheck.services.formula import NestingSemantics
from sheetcheck.services.workbook import parse_fixture
from tests.conftest import fixture_workbook

YES, NO, NA = VerdictKind.YES, VerdictKind.NO, VerdictKind.NA
QUALIFIED, NEEDS_HUMAN = VerdictKind.QUALIFIED, VerdictKind.NEEDS_HUMAN


def findings_for(workbook, config=None):
    graph = build_graph(workbook)
    classes = classify(workbook, graph)
    return {f.question_id: f for f in evaluate_all(workbook, graph, classes, config)}


def answer(workbook, question_id, config=None):
    graph = build_graph(workbook)
    return evaluate(question_id, workbook, graph, classify(workbook, graph), config)


def test_every_question_has_a_rule():
    assert registered_questions() == list(QUESTION_IDS)


def test_unknown_question(clean_workbook):
    with pytest.raises(UnknownQuestion):
        answer(clean_workbook, "Q27")


@pytest.mark.parametrize("semantics, verdict", [
    (NestingSemantics.BUILTIN_ONLY, NO),
    (NestingSemantics.OPERATORS_COUNT, YES),
])
def test_nested_functions_depend_on_semantics(semantics, verdict):
    """F14*(1-F16): вложенность только если операции считаются функциями"""
    workbook = fixture_workbook({
        "F14": {"v": 100}, "F16": {"v": 0.2}, "F18": {"f": "=F14*(1-F16)"},
    })
    finding = answer(workbook, "Q24", AnalyzerConfig(nesting_semantics=semantics))

    assert finding.verdict is verdict


def test_clean_workbook_findings(clean_workbook):
    findings = findings_for(clean_workbook)
    verdicts = {qid: f.verdict for qid, f in findings.items()}

    assert [q for q, v in verdicts.items() if v is NEEDS_HUMAN] == ["Q1", "Q3", "Q8"]
    assert (verdicts["Q2"], findings["Q2"].qualifier) == (QUALIFIED, "User sheets")
    assert (verdicts["Q12"], findings["Q12"].qualifier) == (QUALIFIED, "Controls")
    assert (verdicts["Q16"], findings["Q16"].qualifier) == (QUALIFIED, "In cells")
    others = set(QUESTION_IDS) - {"Q1", "Q2", "Q3", "Q8", "Q12", "Q16"}
    assert {verdicts[q] for q in others} == {YES}
    assert findings["Q2"].evidence[0].sheet == "Guide"


def test_messy_workbook_findings(messy_workbook):
    findings = findings_for(messy_workbook)
    verdicts = {qid: f.verdict for qid, f in findings.items()}

    assert [q for q, v in verdicts.items() if v is NEEDS_HUMAN] == ["Q1", "Q2", "Q3", "Q8"]
    assert [q for q, v in verdicts.items() if v is YES] == ["Q9", "Q25"]
    assert [q for q, v in verdicts.items() if v is NA] == ["Q20", "Q21", "Q22"]
    assert (verdicts["Q16"], findings["Q16"].qualifier, findings["Q16"].credit) == (
        QUALIFIED, "Not", 0.0)
    assert {e.note for e in findings["Q6"].evidence} == {"isolated input"}
    assert "0.21" in findings["Q11"].summary
    assert [e.location for e in findings["Q11"].evidence] == [
        "Sheet1!B1", "Sheet1!A2", "Sheet1!B2", "Sheet2!A1",
    ]


def test_normalization_groups_by_signed_value():
    workbook = fixture_workbook({
        "A1": {"v": 1}, "B1": {"f": "=A1*0.21"}, "B2": {"f": "=A1*0.21"},
        "B3": {"f": "=A1*-0.21"}, "B4": {"f": "=A1*100"}, "B5": {"f": "=A1*100"},
    })
    violations = detect_normalization_violations(workbook, AnalyzerConfig())

    assert [(value, [a.row for a in cells]) for value, cells in violations] == [(0.21, [1, 2])]


def test_flag_arguments_are_not_constants():
    workbook = fixture_workbook({
        "A1": {"v": 1}, "B1": {"v": 2}, "C1": {"v": 3},
        "D1": {"f": "=VLOOKUP(A1,B1:C1,2,0)"}, "D2": {"f": "=VLOOKUP(A1,B1:C1,2,0)"},
        "D3": {"f": "=ROUND(A1*1.5,2)"}, "D4": {"f": "=ROUND(B1*1.5,2)"},
    })
    violations = detect_normalization_violations(workbook, AnalyzerConfig())

    assert [value for value, _ in violations] == [1.5]


def test_normalization_threshold_is_configurable():
    workbook = fixture_workbook({"A1": {"v": 1}, "B1": {"f": "=A1*7"}, "B2": {"f": "=A1*7"}})

    assert detect_normalization_violations(
        workbook, AnalyzerConfig(normalization_min_repeats=3)) == []
    assert detect_normalization_violations(
        workbook, AnalyzerConfig(literal_exemptions=(7,))) == []


def test_format_consistency_threshold():
    cells = {f"A{i}": {"v": i, "style": 1 if i == 10 else 0} for i in range(1, 11)}
    workbook = fixture_workbook(cells, styles=[{}, {"fill": "#00FF00"}])
    found = list(workbook.iter_cells())

    assert format_consistency(found, workbook.style_table, 0.9) == (0.9, YES)
    assert format_consistency(found, workbook.style_table, 0.95) == (0.9, NO)
    assert format_consistency([], workbook.style_table, 0.9) == (0.0, NA)


def test_sheet_naming():
    workbook = parse_fixture(
        '{"sheets": [{"name": "Sheet1"}, {"name": "Inputs"}, {"name": "sheet 13"}]}'
    )
    fraction, verdict, evidence = sheet_naming(workbook, AnalyzerConfig())

    assert fraction == pytest.approx(1 / 3)
    assert verdict is NO
    assert [e.sheet for e in evidence] == ["Sheet1", "sheet 13"]
    assert sheet_naming(workbook, AnalyzerConfig(naming_threshold=0.3))[1] is YES


def test_continuous_credit_uses_the_measured_share(messy_workbook):
    findings = findings_for(messy_workbook, AnalyzerConfig(continuous_credit=True))

    assert (findings["Q13"].verdict, findings["Q13"].credit) == (YES, 0.5)
    assert (findings["Q4"].verdict, findings["Q4"].credit) == (NO, 0.0)


@pytest.mark.parametrize("formula", ["=SUM(A3:A1)", "=#REF!+A2", "=B1+1", "=Gone!A1:A2"])
def test_invalid_ranges(formula):
    workbook = fixture_workbook({"A1": {"v": 1}, "A2": {"v": 2}, "B1": {"f": formula}})
    finding = answer(workbook, "Q9")

    assert finding.verdict is NO
    assert finding.evidence[0].location == "Model!B1"


def test_broken_name_target_fails_valid_ranges():
    workbook = fixture_workbook(
        {"A1": {"v": 1}, "B1": {"f": "=Rate*2"}}, names={"Rate": "#REF!"},
    )

    assert answer(workbook, "Q9").verdict is NO


def test_input_blocks_need_labels():
    labelled = fixture_workbook({
        "A1": {"v": "Rate"}, "B1": {"v": 0.2}, "B2": {"v": 3}, "C1": {"f": "=B1*B2"},
    })
    bare = fixture_workbook({"B1": {"v": 0.2}, "B2": {"v": 3}, "C1": {"f": "=B1*B2"}})

    assert answer(labelled, "Q10").verdict is YES
    assert answer(bare, "Q10").verdict is NO
    assert answer(labelled, "Q6").verdict is YES


def test_names_bypassed_by_direct_reference():
    workbook = fixture_workbook(
        {"A1": {"v": 0.2}, "B1": {"f": "=in_rate*2"}, "B2": {"f": "=A1*3"}},
        names={"in_rate": "Model!$A$1"},
    )
    finding = answer(workbook, "Q22")

    assert finding.verdict is NO
    assert finding.evidence[0].location == "Model!B2"


@pytest.mark.parametrize("names, verdict", [
    ({"in_rate": "Model!$A$1", "in_qty": "Model!$A$2", "out_total": "Model!$B$1",
      "out_net": "Model!$B$2"}, YES),
    ({"Rate": "Model!$A$1", "qty_in": "Model!$A$2"}, NO),
])
def test_name_categories_and_composition(names, verdict):
    formula = "=" + "+".join(names)
    workbook = fixture_workbook(
        {"A1": {"v": 1}, "A2": {"v": 2}, "B1": {"v": 3}, "B2": {"v": 4}, "C1": {"f": formula}},
        names=names,
    )
    findings = findings_for(workbook)

    assert findings["Q20"].verdict is verdict
    assert findings["Q21"].verdict is verdict


@pytest.mark.parametrize("names, convention", [
    (["VatRate", "netPrice"], "CamelCase"),
    (["VAT", "GDP_2024"], "UPPER"),
    (["VAT", "Rate"], None),
    (["in_vat", "Rate"], None),
])
def test_naming_convention(names, convention):
    """Аббревиатура в верхнем регистре не считается CamelCase"""
    assert naming_convention(names) == convention


def test_absolute_links():
    relative = fixture_workbook({"A1": {"v": 1}, "B1": {"f": "=A1+$A1"}})
    anchored = fixture_workbook({"A1": {"v": 1}, "B1": {"f": "=$A$1*2"}})

    assert answer(relative, "Q26").verdict is NO
    assert answer(anchored, "Q26").verdict is YES
