import pytest

from src.errors import UnknownFormat
from src.models.trace import ActivationSummary, ActivationTrace, DecisionFact, GovernanceEvent
from src.sim.trace import (COLUMNS, FOOTER, emit_summary, emit_trace, parse_trace_tsv, query_rows,
                           summarize)
from src.utils.config_loader import SCENARIO_DIR

HEADER = "\t".join(COLUMNS) + "\n"
CORRIDOR_GOLDEN = SCENARIO_DIR / "golden" / "corridor_cascade.trace.tsv"


@pytest.fixture
def corridor_rows():
    return parse_trace_tsv(CORRIDOR_GOLDEN.read_bytes())


def test_empty_trace_is_header_only():
    assert emit_trace(ActivationTrace("empty", "WithFramework"), "tsv") == HEADER.encode("utf-8")


def test_unknown_format():
    with pytest.raises(UnknownFormat):
        emit_trace([], "csv")


def test_reemitting_golden_is_byte_identical(corridor_rows):
    assert emit_trace(corridor_rows, "tsv") == CORRIDOR_GOLDEN.read_bytes()


def test_rows_sorted_and_cells_joined():
    rows = [
        GovernanceEvent(30, "feedback_loop_joint_event", ("E", "T", "S"), ("R-06", "R-03", "R-05"), "O", ("T4",)),
        GovernanceEvent(5, "demand_response_curtailment", ("E",), ("R-09", "R-01"), "A→O", ()),
    ]
    lines = emit_trace(rows, "tsv").decode("utf-8").splitlines()
    assert lines[1] == "5\tdemand_response_curtailment\tE\tR-01,R-09\tA→O\t-"
    assert lines[2] == "30\tfeedback_loop_joint_event\tE,T,S\tR-03,R-05,R-06\tO\tT4"


def test_text_format_carries_footer(corridor_rows):
    text = emit_trace(corridor_rows, "text").decode("utf-8")
    assert text.endswith(FOOTER + "\n")
    assert "resident_fine" in text


def test_parse_rejects_foreign_files():
    with pytest.raises(ValueError):
        parse_trace_tsv("a\tb\n")
    with pytest.raises(ValueError):
        parse_trace_tsv(HEADER + "5\tonly-two\n")


def test_query_rows(corridor_rows):
    assert [r.time for r in query_rows(corridor_rows, measure="R-24")] == [60, 120]
    assert [r.time for r in query_rows(corridor_rows, rule="T4")] == [30, 45]
    assert [r.time for r in query_rows(corridor_rows, layer="C")] == [25, 60]
    escalated = query_rows(corridor_rows, layer="A")
    assert [r.layer for r in escalated] == ["A→O"]
    assert 5 in [r.time for r in query_rows(corridor_rows, layer="O")]
    assert [r.event for r in query_rows(corridor_rows, agent="S")] == [
        "violation_spike", "feedback_loop_joint_event", "resident_fine"]


def test_summary_of_empty_trace():
    assert summarize(ActivationTrace("empty", "Baseline")) == ActivationSummary()


def test_detection_falls_back_to_first_drift_row(catalog):
    trace = ActivationTrace("single", "WithFramework",
                            rows=[GovernanceEvent(5, "anomaly", ("DNSC",), ("R-10",), "A", ())])
    trace.facts.t0, trace.facts.first_detection_at = 0, 5
    assert summarize(trace, catalog).detection_time == 5


def test_chain_incomplete_when_case_misses_an_agent(catalog):
    trace = ActivationTrace("partial", "WithFramework")
    trace.facts.decisions.append(DecisionFact("AR-000009", 60, frozenset({"E", "S"}), "CC-001", frozenset({"S"})))
    assert not summarize(trace, catalog).chain_complete


def test_emit_summary():
    summary = ActivationSummary(3, ("R-09", "R-10", "R-20"), 5, layers_activated=("A",))
    text = emit_summary(summary).decode("utf-8")
    assert "3 of 25 (12%): R-09, R-10, R-20" in text
    assert "0 of 5: -" in text
    assert "chain_complete" in text and "false" in text
    assert text.endswith(FOOTER + "\n")
