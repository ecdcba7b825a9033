#!/usr/bin/env python3
"""
Calibration Manager - Autonomy evidence protocol, governance levels and layer activation
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, Optional, Tuple, Union

from src.errors import SchemaError
from src.models.calibration import (Activation, AutonomyClassification, AutonomyEvidence,
                                    AutonomyLevel, DecisionScope, GovernanceLevel,
                                    HumanInvolvement, LayerActivationMap, SystemProfile)
from src.utils.config_loader import ConfigLoader, shipped_path

logger = logging.getLogger(__name__)

Cell = Tuple[DecisionScope, HumanInvolvement]


class CalibrationManager:
    """Maps autonomy evidence to L-levels, G-levels, layer activation and oversight posture"""

    def __init__(self, table: Dict[Cell, AutonomyLevel],
                 activation: Dict[GovernanceLevel, LayerActivationMap],
                 postures: Dict[GovernanceLevel, str]):
        self.table = dict(table)
        self.activation = dict(activation)
        self.postures = dict(postures)

    @classmethod
    def from_file(cls, path: Union[str, Path, None] = None,
                  loader: Optional[ConfigLoader] = None) -> "CalibrationManager":
        path = Path(path) if path else shipped_path("autonomy_decision_table.json")
        return load_decision_table(path.read_text(encoding='utf-8'), loader)

    def classify_autonomy(self, evidence: AutonomyEvidence) -> AutonomyClassification:
        level = self.table[(evidence.decision_scope, evidence.human_involvement)]
        rationale = (f"{level.value}: decision scope {evidence.decision_scope.value}, "
                     f"human involvement {evidence.human_involvement.value}, "
                     f"criticality {evidence.domain_criticality.value}")
        return AutonomyClassification(level, rationale)

    def qualifies_for_infrastructure_control(self, evidence: AutonomyEvidence) -> bool:
        """Autonomy part of the G3/G4 test: L4, or L3 exercised as real-time control"""
        level = self.classify_autonomy(evidence).level
        return level is AutonomyLevel.L4 or (
            level is AutonomyLevel.L3 and evidence.decision_scope is DecisionScope.REAL_TIME_CONTROL)

    def assign_governance_level(self, profile: SystemProfile) -> GovernanceLevel:
        scope = profile.evidence.decision_scope
        if profile.multi_agent_ecosystem:
            return GovernanceLevel.G5
        if (self.qualifies_for_infrastructure_control(profile.evidence)
                and profile.endangers_essential_services and profile.cross_org_dependencies):
            return GovernanceLevel.G4
        if scope in (DecisionScope.OPERATIONAL, DecisionScope.REAL_TIME_CONTROL):
            return GovernanceLevel.G3
        if scope is DecisionScope.BOUNDED_TASK:
            return GovernanceLevel.G2
        return GovernanceLevel.G1

    def layer_activation(self, level: GovernanceLevel) -> LayerActivationMap:
        return self.activation[level]

    def oversight_posture(self, level: GovernanceLevel) -> str:
        return self.postures[level]

    def profile_activation(self, profile: SystemProfile) -> LayerActivationMap:
        return self.layer_activation(self.assign_governance_level(profile))

    def effective_activation(self, profiles: Iterable[SystemProfile]) -> LayerActivationMap:
        """Per-layer maximum over every profile involved in one governance event"""
        effective = self.layer_activation(GovernanceLevel.G1)
        for profile in profiles:
            effective = effective.merge(self.profile_activation(profile))
        return effective

    def describe(self, profile: SystemProfile) -> Dict[str, str]:
        classification = self.classify_autonomy(profile.evidence)
        level = self.assign_governance_level(profile)
        return {
            "autonomy": classification.level.value,
            "rationale": classification.rationale,
            "governance_level": level.value,
            "layers": self.layer_activation(level).as_codes(),
            "posture": self.oversight_posture(level),
        }


def load_decision_table(source: Union[str, bytes, dict],
                        loader: Optional[ConfigLoader] = None) -> CalibrationManager:
    """Build a calibration manager from decision-table content; raises SchemaError"""
    loader = loader or ConfigLoader()
    document = loader.parse(source, "autonomy_decision_table")

    table: Dict[Cell, AutonomyLevel] = {}
    for cell in document["cells"]:
        key = (DecisionScope(cell["decision_scope"]), HumanInvolvement(cell["human_involvement"]))
        table[key] = AutonomyLevel(cell["level"])
    if len(table) != len(DecisionScope) * len(HumanInvolvement):
        raise SchemaError("autonomy_decision_table: cells do not cover every scope and involvement pair")

    activation, postures = {}, {}
    for level_id, spec in document["governance_levels"].items():
        level = GovernanceLevel(level_id)
        agent, orchestration, city = (Activation(v) for v in spec["layers"])
        try:
            activation[level] = LayerActivationMap(agent, orchestration, city)
        except ValueError as e:
            raise SchemaError(f"autonomy_decision_table: {level_id}: {e}") from e
        postures[level] = spec["posture"]

    logger.debug("Loaded autonomy decision table with %d cells", len(table))
    return CalibrationManager(table, activation, postures)


def profile_from_registry(entry: dict) -> SystemProfile:
    """System profile from one registry row; unknown keys such as key_metric are ignored"""
    return SystemProfile.from_dict(entry)
