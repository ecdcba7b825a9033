#!/usr/bin/env python3
"""
Calibration Models - Autonomy evidence, system profiles and layer activation maps
"""

from dataclasses import dataclass
from enum import Enum


class DecisionScope(str, Enum):
    ADVISORY = "Advisory"
    BOUNDED_TASK = "BoundedTask"
    OPERATIONAL = "Operational"
    REAL_TIME_CONTROL = "RealTimeControl"


class HumanInvolvement(str, Enum):
    PRE_APPROVAL = "PreApproval"
    EXCEPTION_HANDLING = "ExceptionHandling"
    MONITORING = "Monitoring"
    SUPERVISORY_OVERRIDE = "SupervisoryOverride"


class DomainCriticality(str, Enum):
    CUSTOMER_FACING = "CustomerFacing"
    PUBLIC_SPACE = "PublicSpace"
    CRITICAL_INFRASTRUCTURE = "CriticalInfrastructure"


class AutonomyLevel(str, Enum):
    L2 = "L2"
    L3 = "L3"
    L4 = "L4"

    @property
    def rank(self) -> int:
        return int(self.value[1:])


class GovernanceLevel(str, Enum):
    G1 = "G1"
    G2 = "G2"
    G3 = "G3"
    G4 = "G4"
    G5 = "G5"

    @property
    def rank(self) -> int:
        return int(self.value[1:])


class Activation(str, Enum):
    """Off < Basic < Full; Basic runs enforcement in advisory mode"""
    OFF = "Off"
    BASIC = "Basic"
    FULL = "Full"

    @property
    def rank(self) -> int:
        return {"Off": 0, "Basic": 1, "Full": 2}[self.value]

    @property
    def enabled(self) -> bool:
        return self is not Activation.OFF


@dataclass(frozen=True)
class AutonomyEvidence:
    decision_scope: DecisionScope
    human_involvement: HumanInvolvement
    domain_criticality: DomainCriticality

    @classmethod
    def from_dict(cls, data: dict) -> "AutonomyEvidence":
        return cls(
            DecisionScope(data["decision_scope"]),
            HumanInvolvement(data["human_involvement"]),
            DomainCriticality(data["domain_criticality"]),
        )


@dataclass(frozen=True)
class AutonomyClassification:
    level: AutonomyLevel
    rationale: str


@dataclass(frozen=True)
class SystemProfile:
    id: str
    authority: str
    domain: str
    evidence: AutonomyEvidence
    endangers_essential_services: bool = False
    cross_org_dependencies: bool = False
    multi_agent_ecosystem: bool = False
    name: str = ""

    @classmethod
    def from_dict(cls, data: dict) -> "SystemProfile":
        return cls(
            id=data["id"],
            authority=data["authority"],
            domain=data["domain"],
            evidence=AutonomyEvidence.from_dict(data["evidence"]),
            endangers_essential_services=bool(data.get("endangers_essential_services", False)),
            cross_org_dependencies=bool(data.get("cross_org_dependencies", False)),
            multi_agent_ecosystem=bool(data.get("multi_agent_ecosystem", False)),
            name=data.get("name", data["id"]),
        )


@dataclass(frozen=True)
class LayerActivationMap:
    agent: Activation
    orchestration: Activation
    city: Activation

    def __post_init__(self):
        if self.agent is not Activation.FULL:
            raise ValueError("Agent layer is Full at every governance level")

    def merge(self, other: "LayerActivationMap") -> "LayerActivationMap":
        """Per-layer maximum, used when one event involves several agents"""
        def higher(a: Activation, b: Activation) -> Activation:
            return a if a.rank >= b.rank else b
        return LayerActivationMap(
            higher(self.agent, other.agent),
            higher(self.orchestration, other.orchestration),
            higher(self.city, other.city),
        )

    def as_codes(self) -> str:
        return f"A: {self.agent.value}; O: {self.orchestration.value}; C: {self.city.value}"
