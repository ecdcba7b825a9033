import copy
import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import g4_profile, make_profile
from src.errors import SchemaError
from src.managers.calibration_manager import load_decision_table, profile_from_registry
from src.models.calibration import (Activation, AutonomyEvidence, AutonomyLevel, DecisionScope,
                                    DomainCriticality, GovernanceLevel, HumanInvolvement,
                                    LayerActivationMap)
from src.utils.config_loader import CONFIG_DIR

FULL, BASIC, OFF = Activation.FULL, Activation.BASIC, Activation.OFF


@pytest.fixture
def table_document():
    return json.loads((CONFIG_DIR / "autonomy_decision_table.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("level, layers", [
    (GovernanceLevel.G1, (FULL, OFF, OFF)),
    (GovernanceLevel.G2, (FULL, OFF, OFF)),
    (GovernanceLevel.G3, (FULL, BASIC, OFF)),
    (GovernanceLevel.G4, (FULL, FULL, BASIC)),
    (GovernanceLevel.G5, (FULL, FULL, FULL)),
])
def test_layer_activation_table(calibration, level, layers):
    activation = calibration.layer_activation(level)
    assert (activation.agent, activation.orchestration, activation.city) == layers


@pytest.mark.parametrize("scope, involvement, expected", [
    (DecisionScope.ADVISORY, HumanInvolvement.SUPERVISORY_OVERRIDE, AutonomyLevel.L2),
    (DecisionScope.BOUNDED_TASK, HumanInvolvement.PRE_APPROVAL, AutonomyLevel.L2),
    (DecisionScope.BOUNDED_TASK, HumanInvolvement.EXCEPTION_HANDLING, AutonomyLevel.L3),
    (DecisionScope.OPERATIONAL, HumanInvolvement.PRE_APPROVAL, AutonomyLevel.L3),
    (DecisionScope.REAL_TIME_CONTROL, HumanInvolvement.EXCEPTION_HANDLING, AutonomyLevel.L3),
    (DecisionScope.REAL_TIME_CONTROL, HumanInvolvement.SUPERVISORY_OVERRIDE, AutonomyLevel.L4),
])
def test_classify_autonomy(calibration, scope, involvement, expected):
    evidence = AutonomyEvidence(scope, involvement, DomainCriticality.PUBLIC_SPACE)
    classification = calibration.classify_autonomy(evidence)
    assert classification.level is expected
    assert scope.value in classification.rationale
    assert "PublicSpace" in classification.rationale


@given(st.sampled_from(DecisionScope), st.sampled_from(HumanInvolvement), st.sampled_from(DomainCriticality))
def test_classification_is_total(calibration, scope, involvement, criticality):
    level = calibration.classify_autonomy(AutonomyEvidence(scope, involvement, criticality)).level
    assert level in set(AutonomyLevel)


def _expected_level(calibration, scope, involvement, endangers, cross_org):
    autonomy = calibration.classify_autonomy(
        AutonomyEvidence(scope, involvement, DomainCriticality.CRITICAL_INFRASTRUCTURE)).level
    qualifies = autonomy is AutonomyLevel.L4 or (
        autonomy is AutonomyLevel.L3 and scope is DecisionScope.REAL_TIME_CONTROL)
    if qualifies and endangers and cross_org:
        return GovernanceLevel.G4
    if scope in (DecisionScope.OPERATIONAL, DecisionScope.REAL_TIME_CONTROL):
        return GovernanceLevel.G3
    if scope is DecisionScope.BOUNDED_TASK:
        return GovernanceLevel.G2
    return GovernanceLevel.G1


def test_g3_g4_truth_table(calibration):
    cases = itertools.product(DecisionScope, HumanInvolvement, (False, True), (False, True))
    for scope, involvement, endangers, cross_org in cases:
        profile = make_profile("X", scope=scope, involvement=involvement,
                               criticality=DomainCriticality.CRITICAL_INFRASTRUCTURE,
                               endangers=endangers, cross_org=cross_org)
        assigned = calibration.assign_governance_level(profile)
        assert assigned is _expected_level(calibration, scope, involvement, endangers, cross_org)
        if assigned is GovernanceLevel.G4:
            assert endangers and cross_org


def test_g4_needs_both_conditions(calibration):
    assert calibration.assign_governance_level(g4_profile("E")) is GovernanceLevel.G4
    one_condition = make_profile("E", scope=DecisionScope.REAL_TIME_CONTROL,
                                 involvement=HumanInvolvement.SUPERVISORY_OVERRIDE, endangers=True)
    assert calibration.assign_governance_level(one_condition) is GovernanceLevel.G3


def test_multi_agent_ecosystem_is_g5(calibration):
    profile = make_profile("city-os", scope=DecisionScope.ADVISORY, multi_agent=True)
    assert calibration.assign_governance_level(profile) is GovernanceLevel.G5


def test_effective_activation_is_per_layer_max(calibration):
    g3 = make_profile("T")
    effective = calibration.effective_activation([g3, g4_profile("E")])
    assert (effective.agent, effective.orchestration, effective.city) == (FULL, FULL, BASIC)
    assert calibration.effective_activation([]).as_codes() == "A: Full; O: Off; C: Off"


def test_agent_layer_always_full():
    with pytest.raises(ValueError):
        LayerActivationMap(BASIC, FULL, FULL)


@pytest.mark.parametrize("system_id, level", [
    ("AV Program", GovernanceLevel.G4),
    ("GTIC", GovernanceLevel.G4),
    ("UTC-UX Fusion", GovernanceLevel.G3),
    ("DNSC", GovernanceLevel.G2),
    ("Falcon Eye", GovernanceLevel.G1),
])
def test_shipped_registry_levels(registry_city, calibration, system_id, level):
    entry = registry_city.get_entry(system_id)
    assert calibration.assign_governance_level(entry.profile) is level


def test_profile_from_registry_ignores_registry_columns():
    profile = profile_from_registry({
        "id": "Rammas", "authority": "DEWA", "domain": "Customer", "key_metric": "12.7M+ inquiries",
        "evidence": {"decision_scope": "BoundedTask", "human_involvement": "ExceptionHandling",
                     "domain_criticality": "CustomerFacing"},
    })
    assert profile.id == "Rammas"
    assert profile.evidence.domain_criticality is DomainCriticality.CUSTOMER_FACING


def test_incomplete_decision_table_rejected(table_document):
    document = copy.deepcopy(table_document)
    document["cells"] = document["cells"][:-1]
    with pytest.raises(SchemaError):
        load_decision_table(document)


def test_agent_layer_off_rejected(table_document):
    document = copy.deepcopy(table_document)
    document["governance_levels"]["G1"]["layers"] = ["Off", "Off", "Off"]
    with pytest.raises(SchemaError):
        load_decision_table(document)


def test_describe_names_layers_and_posture(calibration):
    description = calibration.describe(g4_profile("E"))
    assert description["governance_level"] == "G4"
    assert description["layers"] == "A: Full; O: Full; C: Basic"
    assert description["posture"] == "supervisory"
