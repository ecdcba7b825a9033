import json

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.managers.mode_manager import BASELINE
from src.models.calibration import DecisionScope, DomainCriticality, HumanInvolvement
from src.sim import emit_trace, load_scenario, summarize
from src.utils.config_loader import SCENARIO_DIR

GOLDEN_DIR = SCENARIO_DIR / "golden"


@pytest.mark.parametrize("name", ["corridor_cascade", "dnsc_anomaly"])
def test_trace_matches_golden_file(engine, name):
    scenario = load_scenario(SCENARIO_DIR / f"{name}.json")
    expected = (GOLDEN_DIR / f"{name}.trace.tsv").read_bytes()
    assert emit_trace(engine.run(scenario), "tsv") == expected


def test_corridor_summary(engine, catalog, corridor):
    summary = summarize(engine.run(corridor), catalog)
    assert summary.measures_activated == 12
    assert summary.measure_ids == ("R-01", "R-02", "R-03", "R-04", "R-05", "R-06",
                                   "R-08", "R-09", "R-10", "R-12", "R-16", "R-24")
    assert summary.coverage == "12 of 25 (48%)"
    assert summary.detection_time == 30
    assert summary.coordination_ids == ("R-06", "R-24", "R-12")
    assert summary.rules_invoked == ("T1", "T3", "T4")
    assert summary.layers_activated == ("A", "O", "C")
    assert summary.chain_complete
    assert summary.systemic_learning


def test_corridor_incident_and_case(engine, corridor):
    trace = engine.run(corridor)
    run = engine.last_run
    incident = run.orchestration.current_incident
    assert (incident.t0, incident.baseline_deadline, incident.due_at) == (30, 1440, 1470)
    assert run.orchestration.sessions["CX-001"].participants == ("DEWA", "Dubai Police", "RTA")
    assert run.orchestration.open_cascade is None
    assert run.orchestration.cascades[0].closed_at == 105

    [decision] = trace.facts.decisions
    assert decision.attribution_agents == frozenset({"E", "T", "S"})
    case = run.city.get_case(decision.case_id)
    assert case.authorities == ("DEWA", "Dubai Police", "RTA")
    assert set(case.explanations) == {"en", "ar"}
    assert "DXB-Q-48213" not in run.runtime.export_trail()


def test_corridor_fairness_flag(engine, corridor):
    engine.run(corridor)
    [flag] = engine.last_run.city.flags
    assert flag.zone_id == "al_quoz_cross_streets"
    assert flag.concentration_ratio == pytest.approx(0.4 / 0.15)
    assert flag.human_review_requested and not flag.enforcement_held


def test_baseline_activates_nothing(engine, catalog, corridor):
    trace = engine.run(corridor, BASELINE)
    assert trace.rows == []
    summary = summarize(trace, catalog)
    assert summary.measures_activated == 0
    assert summary.detection_time == 0
    assert summary.coordination_points == 0
    assert summary.layers_activated == ()
    assert not summary.chain_complete
    assert not summary.systemic_learning
    assert len(trace.facts.decisions) == 1


def test_dnsc_stays_on_agent_layer(engine, catalog, dnsc):
    trace = engine.run(dnsc)
    summary = summarize(trace, catalog)
    assert summary.measure_ids == ("R-09", "R-10", "R-20")
    assert summary.layers_activated == ("A",)
    assert summary.detection_time == 5
    assert summary.rules_invoked == ()
    assert not summary.chain_complete
    [review] = [t for t in trace.facts.scheduled_tasks if t.kind == "operator_approval"]
    assert (review.created, review.due) == (5, 20)


@pytest.mark.parametrize("name", ["corridor_cascade", "dnsc_anomaly"])
def test_runs_are_deterministic(engine, name):
    scenario = load_scenario(SCENARIO_DIR / f"{name}.json")
    first = emit_trace(engine.run(scenario), "tsv")
    first_trail = engine.last_run.runtime.export_trail()
    second = emit_trace(engine.run(scenario), "tsv")
    assert first == second
    assert engine.last_run.runtime.export_trail() == first_trail


def test_learned_risk_speeds_up_confirmation(engine, catalog, corridor):
    learned = engine.run(corridor).facts.learned_risks
    assert [sorted(r.agents) for r in learned] == [["E", "S", "T"]]
    rerun = engine.run(corridor, known_risks=learned)
    assert engine.last_run.orchestration.cascades[0].opened_at == 15
    assert engine.last_run.orchestration.cascades[0].known_risk == learned[0].risk_id
    assert summarize(rerun, catalog).detection_time == 15


def _dnsc_document():
    return json.loads((SCENARIO_DIR / "dnsc_anomaly.json").read_text(encoding="utf-8"))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.sampled_from(DecisionScope), st.sampled_from(HumanInvolvement), st.sampled_from(DomainCriticality),
       st.floats(0.8, 1.2))
def test_single_agent_never_leaves_agent_layer(engine, scope, involvement, criticality, voltage):
    document = _dnsc_document()
    document["agents"][0]["evidence"] = {"decision_scope": scope.value, "human_involvement": involvement.value,
                                         "domain_criticality": criticality.value}
    document["events"][1]["steps"][0]["params"]["metrics"]["feeder_voltage_pu"] = voltage
    trace = engine.run(load_scenario(document))
    assert all(row.layer in ("A", "-") for row in trace.rows)
    assert all(not row.rules for row in trace.rows)
    assert not engine.last_run.orchestration.cascades


def test_dilemma_without_open_cascade_is_skipped(engine, caplog):
    document = _dnsc_document()
    document["events"].insert(2, {
        "time": 10, "id": "early_dilemma", "agents": [],
        "steps": [{"kind": "dilemma", "params": {"rules": [{"rule": "T4"}, {"rule": "T3"}]}}],
        "annotations": {"without": "Nothing to triage", "with": "Dilemma has no cascade to act on"},
    })
    with caplog.at_level("WARNING", logger="src.sim.engine"):
        trace = engine.run(load_scenario(document))
    assert all(not row.rules for row in trace.rows)
    [row] = [row for row in trace.rows if row.time == 10]
    assert row.rules == () and "R-02" not in row.measures
    assert "T4 dilemma skipped" in caplog.text
    assert "T3 dilemma skipped" in caplog.text
