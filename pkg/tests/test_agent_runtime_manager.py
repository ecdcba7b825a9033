import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import envelope, g4_profile, make_profile
from src.errors import DanglingCauseLink, UnknownMetric, UnregisteredAgent
from src.managers.agent_runtime_manager import EVENT_CLASSES, AgentRuntimeManager
from src.models.audit_trail import AuditTrail
from src.models.calibration import Activation, DecisionScope, HumanInvolvement
from src.models.runtime import (AccessTier, ChangeKind, ClearanceToken, CouplingClass, Decision,
                                Declaration, Dependency, DriftSignal, MetricBounds,
                                OperatingEnvelope, OperatingMode, PolicyDecision, ProposedAction,
                                Severity)
from src.models.topology import Topology
from src.utils.pseudonymizer import Pseudonymizer

CURTAIL = ProposedAction("curtail-1", "curtail", ("e11_signal_feeder",))


@pytest.fixture
def coupled(runtime):
    """E supplies the signal feeder that T depends on through a safety coupling"""
    e = runtime.register_agent(g4_profile("E"), envelope(feeder_voltage_pu=(0.95, 1.05, True),
                                                         feeder_load_ratio=(0, 0.9)),
                               provides=["e11_signal_feeder"])
    t = runtime.register_agent(make_profile("T", "RTA", "Traffic"), envelope(cross_street_queue=(0, 40)),
                               dependencies=[Dependency("e11_signal_feeder", CouplingClass.SAFETY_COUPLED)])
    runtime.drain_outbox()
    runtime.activations.drain()
    return Topology(1, {"E": e, "T": t}, {"E": "DEWA", "T": "RTA"})


def test_registration_emits_declaration(runtime):
    declaration = runtime.register_agent(g4_profile("E"), envelope(v=(0, 1)), provides=["feeder"], now=3)
    assert declaration.operating_mode is OperatingMode.NORMAL
    assert declaration.provides == frozenset({"feeder"})
    assert runtime.drain_outbox() == [declaration]
    assert runtime.trail.get(declaration.cause_record_id).event_kind == "declaration"


@pytest.mark.parametrize("orchestration, decision, enforced, escalated", [
    (Activation.FULL, Decision.BLOCK, True, True),
    (Activation.BASIC, Decision.ESCALATE, False, True),
    (Activation.OFF, Decision.ALLOW, False, False),
])
def test_uncleared_coupled_action(runtime, coupled, orchestration, decision, enforced, escalated):
    result = runtime.enforce_policy("E", CURTAIL, coupled, orchestration=orchestration, now=5)
    assert (result.decision, result.enforced, result.escalated) == (decision, enforced, escalated)
    assert result.coupled_resources == ("e11_signal_feeder",)
    measures, _, was_escalated = runtime.activations.drain()
    assert measures == ["R-09"]
    assert was_escalated is escalated
    assert any(isinstance(a, PolicyDecision) for a in runtime.drain_outbox()) is escalated


def test_orchestration_defaults_to_agent_level(runtime, coupled):
    assert runtime.enforce_policy("E", CURTAIL, coupled).decision is Decision.BLOCK


def test_clearance_must_match_topology_version(runtime, coupled):
    valid = ClearanceToken("CT-0001", "E", "curtail-1", coupled.version)
    assert runtime.enforce_policy("E", CURTAIL, coupled, valid).decision is Decision.ALLOW
    stale = ClearanceToken("CT-0002", "E", "curtail-1", coupled.version - 1)
    assert runtime.enforce_policy("E", CURTAIL, coupled, stale).decision is Decision.BLOCK


def test_setpoints_checked_against_envelope(runtime, coupled):
    high = ProposedAction("r-1", "redistribute", (), {"feeder_load_ratio": 0.95})
    blocked = runtime.enforce_policy("E", high, None)
    assert blocked.decision is Decision.BLOCK and "feeder_load_ratio" in blocked.reason
    within = ProposedAction("r-2", "redistribute", (), {"feeder_load_ratio": 0.75})
    assert runtime.enforce_policy("E", within, None).decision is Decision.ALLOW
    with pytest.raises(UnknownMetric):
        runtime.enforce_policy("E", ProposedAction("r-3", "redistribute", (), {"frequency": 50.0}), None)


def test_unregistered_agent(runtime):
    with pytest.raises(UnregisteredAgent):
        runtime.enforce_policy("Z", CURTAIL, None)
    with pytest.raises(UnregisteredAgent):
        runtime.observe("Z", {"x": 1.0}, 0)


def test_observe_debounces_breaches(runtime):
    runtime.register_agent(make_profile("T"), OperatingEnvelope({"queue": MetricBounds(0, 40)}, 2))
    assert runtime.observe("T", {"queue": 50}, 1) is None
    signal = runtime.observe("T", {"queue": 55}, 2)
    assert signal.severity is Severity.WARNING and signal.bound == 40
    runtime.observe("T", {"queue": 10}, 3)
    assert runtime.observe("T", {"queue": 60}, 4) is None


def test_critical_breach_reported_first_and_degrades(runtime, coupled):
    signal = runtime.observe("E", {"feeder_load_ratio": 0.97, "feeder_voltage_pu": 0.91}, 10)
    assert (signal.metric, signal.severity, signal.bound) == ("feeder_voltage_pu", Severity.DEGRADED, 0.95)
    assert signal.domain == "energy"
    assert runtime.mode_of("E") is OperatingMode.DEGRADED
    alerts = runtime.drain_outbox()
    assert [type(a) for a in alerts] == [Declaration, DriftSignal]
    assert runtime.activations.drain()[0] == ["R-10"]


def test_unknown_metric_in_telemetry(runtime, coupled):
    with pytest.raises(UnknownMetric):
        runtime.observe("T", {"humidity": 0.5}, 1)


def test_set_mode_without_change_emits_nothing(runtime, coupled):
    assert runtime.set_mode("T", OperatingMode.NORMAL, 5) is None
    assert runtime.drain_outbox() == []


def test_confirm_envelope(runtime, coupled):
    check = runtime.confirm_envelope("E", {"feeder_voltage_pu": 0.97, "feeder_load_ratio": 0.82}, 5)
    assert check.within
    assert runtime.confirm_envelope("E", {"feeder_load_ratio": 0.97}, 6).breaches == ("feeder_load_ratio",)
    assert runtime.activations.drain()[0] == ["R-10"]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(sorted(EVENT_CLASSES)), st.integers(0, 200_000)), max_size=30),
       st.integers(0, 800_000))
def test_no_expired_payload_survives_retention(engine_config, records, now):
    runtime = AgentRuntimeManager(engine_config)
    for kind, timestamp in records:
        runtime.record_audit("E", kind, {"value": timestamp}, now=timestamp)
    report = runtime.apply_retention(now=now)
    expired = 0
    for record in runtime.trail:
        if record.retention_deadline < now:
            expired += 1
            assert record.tombstone and record.payload == {}
        else:
            assert not record.tombstone and record.payload
    assert report.total == expired


def test_retention_classes_differ(runtime):
    telemetry = runtime.record_audit("E", "drift_signal", {"metric": "v"}, now=0)
    enforcement = runtime.record_audit("E", "policy_decision", {"decision": "Block"}, now=0)
    runtime.apply_retention(now=telemetry.retention_deadline + 1)
    assert telemetry.tombstone
    assert not enforcement.tombstone
    assert enforcement.access_tier is AccessTier.OVERSIGHT


def test_subject_identifying_payload_is_pseudonymized(runtime, engine_config):
    record = runtime.record_audit("S", "enforcement_decision",
                                  {"plate": "DXB-Q-48213", "zone": "al_quoz_cross_streets"},
                                  subject_identifying=True, now=60)
    assert record.pseudonymized
    assert record.payload["plate"] == Pseudonymizer(engine_config.pseudonym_key).token("DXB-Q-48213")
    assert record.payload["zone"] == "al_quoz_cross_streets"
    assert "DXB-Q-48213" not in runtime.export_trail()
    assert Pseudonymizer("another-key").token("DXB-Q-48213") != record.payload["plate"]


def test_export_trail_lines(runtime):
    first = runtime.record_audit("E", "drift_signal", {"metric": "v"}, now=1)
    runtime.record_audit("T", "context", {"provider": "E"}, cause_links=[first.record_id], now=2)
    lines = runtime.export_trail().splitlines()
    assert len(lines) == 2
    fields = lines[1].split("\t")
    assert len(fields) == 8
    assert fields[2:4] == ["T", "context"]
    assert fields[6] == first.record_id
    assert fields[7] == '{"provider":"E"}'


def test_reassessment_trigger_is_idempotent(runtime, coupled):
    task = runtime.reassessment_trigger("T", ChangeKind.INTEGRATION, 120)
    assert runtime.reassessment_trigger("T", ChangeKind.INTEGRATION, 120) is task
    assert runtime.reassessment_trigger("T", ChangeKind.INTEGRATION, 121) is not task
    assert len(runtime.pending_tasks()) == 2
    with pytest.raises(UnregisteredAgent):
        runtime.reassessment_trigger("Z", ChangeKind.OPERATIONAL, 0)


@pytest.mark.parametrize("conformity, measures", [
    (False, ("R-20",)),
    (True, ("R-20", "R-23")),
])
def test_execute_reassessment(runtime, coupled, conformity, measures):
    task = runtime.reassessment_trigger("E", ChangeKind.ENVIRONMENT, 5)
    done = runtime.execute_reassessment(task.task_id, conformity, 5)
    assert done.status == "Completed"
    assert done.executed_measures == measures
    assert tuple(runtime.activations.drain()[0]) == measures


def test_pre_approval_schedules_operator_review(runtime, engine_config):
    profile = make_profile("DNSC", scope=DecisionScope.BOUNDED_TASK, involvement=HumanInvolvement.PRE_APPROVAL)
    runtime.register_agent(profile, envelope(feeder_load_ratio=(0, 0.9)))
    action = ProposedAction("redistribute-f12", "redistribute", (), {"feeder_load_ratio": 0.75})
    decision = runtime.enforce_policy("DNSC", action, None, now=5)
    assert decision.decision is Decision.ALLOW
    [task] = runtime.review_tasks
    assert (task.created, task.due) == (5, 5 + engine_config.human_review_sla)

    [completed] = runtime.complete_review("DNSC", 20)
    assert completed.status == "Approved"
    review = runtime.trail.latest("DNSC", "operator_review")
    assert review.cause_links == frozenset({decision.record_id})
    assert runtime.complete_review("DNSC", 21) == []


def test_debounce_counts_only_consecutive_breaches(runtime):
    runtime.register_agent(make_profile("T"), OperatingEnvelope({"queue": MetricBounds(0, 40)}, 2))
    assert runtime.observe("T", {"queue": 50}, 1) is None
    assert runtime.observe("T", {"queue": 30}, 2) is None
    assert runtime.observe("T", {"queue": 52}, 3) is None
    signal = runtime.observe("T", {"queue": 54}, 4)
    assert signal.timestamp == 4 and signal.observed == 54


def test_trail_rejects_dangling_cause_links():
    trail = AuditTrail()
    first = trail.append("E", 10, "drift_signal", {}, AccessTier.OVERSIGHT, 100)
    with pytest.raises(DanglingCauseLink, match="not in the trail"):
        trail.append("T", 12, "context", {}, AccessTier.OVERSIGHT, 100, cause_links=["AR-000099"])
    with pytest.raises(DanglingCauseLink, match="later than"):
        trail.append("T", 5, "context", {}, AccessTier.OVERSIGHT, 100, cause_links=[first.record_id])
    second = trail.append("T", 10, "context", {}, AccessTier.OVERSIGHT, 100, cause_links=[first.record_id])
    assert second.record_id == "AR-000002"
    assert len(list(trail)) == 2


def test_every_identifying_value_is_hashed(runtime):
    record = runtime.record_audit("S", "enforcement_decision", {
        "decision": "Red-light violation fine AED 800", "zone": "al_quoz_cross_streets",
        "licence_no": "D-771204", "owner": {"emirates_id": "784-1990-1234567-1", "zone": "jumeirah"},
        "witness": None,
    }, subject_identifying=True, now=60)
    payload = record.payload
    assert payload["decision"] == "Red-light violation fine AED 800"
    assert payload["zone"] == "al_quoz_cross_streets"
    assert Pseudonymizer.is_pseudonym(payload["licence_no"])
    assert Pseudonymizer.is_pseudonym(payload["owner"]["emirates_id"])
    assert payload["owner"]["zone"] == "jumeirah"
    assert payload["witness"] is None
    exported = runtime.export_trail()
    assert "D-771204" not in exported and "784-1990-1234567-1" not in exported
