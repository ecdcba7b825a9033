#!/usr/bin/env python3
"""
Orchestration Models - Couplings, cascades, incidents, oversight sessions and assessments
"""

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Set, Tuple

from .catalog import Resolution
from .runtime import CouplingClass, DriftSignal


@dataclass(frozen=True)
class Coupling:
    """Edge from a dependent system to a resource provided by another system"""
    from_system: str
    to_resource: str
    coupling_class: CouplingClass
    declared_by: str
    topology_version: int
    provider: str = ""


@dataclass(frozen=True)
class KnownCouplingRisk:
    risk_id: str
    factors: Tuple[str, ...]
    agents: FrozenSet[str]
    domains: FrozenSet[str]
    registered_version: int = 0

    def matches(self, agents, factors) -> bool:
        return set(agents) <= self.agents and set(self.factors) <= set(factors)


@dataclass(frozen=True)
class Denial:
    agent_id: str
    action_id: str
    coupling: Coupling
    topology_version: int
    reason: str


@dataclass(frozen=True)
class EmergentImpactFlag:
    """Provisional cross-domain assessment raised before a cascade is confirmed"""
    assessment_id: str
    agents: FrozenSet[str]
    domains: FrozenSet[str]
    raised_at: int
    confirm_at: int


@dataclass
class CascadeEvent:
    cascade_id: str
    signals: Tuple[DriftSignal, ...]
    domains: FrozenSet[str]
    opened_at: int
    window_used: int
    known_risk: Optional[str] = None
    closed_at: Optional[int] = None

    def __post_init__(self):
        if len(self.domains) < 2:
            raise ValueError("A cascade spans at least two domains")

    @property
    def agents(self) -> List[str]:
        return sorted({s.agent_id for s in self.signals})

    @property
    def is_open(self) -> bool:
        return self.closed_at is None


@dataclass
class IncidentRecord:
    incident_id: str
    cascade_id: str
    t0: int
    regime_clocks: Dict[str, int]
    baseline_deadline: int
    notifications: Set[Tuple[str, int]]
    shared_record_id: str

    def __post_init__(self):
        if self.regime_clocks and self.baseline_deadline != min(self.regime_clocks.values()):
            raise ValueError("Baseline deadline must be the strictest regime clock")

    @property
    def due_at(self) -> int:
        return self.t0 + self.baseline_deadline

    def deadline_for(self, regime: str) -> int:
        return self.t0 + self.regime_clocks[regime]


@dataclass
class OversightSession:
    session_id: str
    cascade_id: str
    participants: Tuple[str, ...]
    acknowledgements: Dict[str, int]
    briefing_record_ids: Tuple[str, ...]
    opened_at: int
    record_id: str = ""
    deliberations: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class AttributionReport:
    outcome_record_id: str
    contributions: Dict[str, Tuple[str, ...]]
    topology_version: int

    @property
    def agents(self) -> FrozenSet[str]:
        return frozenset(self.contributions)


@dataclass(frozen=True)
class ResolutionAction:
    rule_id: str
    resolution: Resolution
    executed: bool
    detail: Dict[str, Any]
    evidence_record_id: str


@dataclass(frozen=True)
class TopologyUpdateDirective:
    directive_id: str
    risk: KnownCouplingRisk
    reason: str


@dataclass
class ConsolidatedAssessment:
    assessment_id: str
    incident_id: str
    attribution: AttributionReport
    regime_sections: Dict[str, Dict[str, Any]]
    replaces: Tuple[str, ...]
    created_at: int
    record_id: str = ""
