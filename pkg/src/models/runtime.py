#!/usr/bin/env python3
"""
Runtime Models - Envelopes, declarations, audit records and drift signals for the agent layer
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Optional, Tuple


class OperatingMode(str, Enum):
    NORMAL = "Normal"
    DEGRADED = "Degraded"
    HALTED = "Halted"

    @property
    def rank(self) -> int:
        return {"Normal": 0, "Degraded": 1, "Halted": 2}[self.value]


class CouplingClass(str, Enum):
    SAFETY_COUPLED = "SafetyCoupled"
    DATA_COUPLED = "DataCoupled"
    ADVISORY = "Advisory"


class AccessTier(str, Enum):
    PUBLIC = "Public"
    OVERSIGHT = "Oversight"
    REGULATOR = "Regulator"


class Severity(str, Enum):
    WARNING = "Warning"
    DEGRADED = "Degraded"


class Decision(str, Enum):
    ALLOW = "Allow"
    BLOCK = "Block"
    ESCALATE = "Escalate"


class ChangeKind(str, Enum):
    OPERATIONAL = "OperationalChange"
    INTEGRATION = "IntegrationChange"
    ENVIRONMENT = "EnvironmentChange"


# Action kinds that remove supply from a resource
SEVERING_ACTIONS = frozenset({"curtail", "disconnect", "shed", "isolate"})


@dataclass(frozen=True)
class MetricBounds:
    min: float
    max: float
    critical: bool = False

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError(f"Metric bounds inverted: {self.min} > {self.max}")

    def contains(self, value: float) -> bool:
        return self.min <= value <= self.max

    def violated_bound(self, value: float) -> Optional[float]:
        if value < self.min:
            return self.min
        if value > self.max:
            return self.max
        return None


@dataclass(frozen=True)
class OperatingEnvelope:
    metrics: Dict[str, MetricBounds]
    consecutive_breach_k: int = 1

    def __post_init__(self):
        if self.consecutive_breach_k < 1:
            raise ValueError("consecutive_breach_k must be at least 1")

    @classmethod
    def from_dict(cls, data: dict, default_k: int = 1) -> "OperatingEnvelope":
        metrics = {
            name: MetricBounds(float(spec["min"]), float(spec["max"]), bool(spec.get("critical", False)))
            for name, spec in data.get("metrics", {}).items()
        }
        return cls(metrics, int(data.get("consecutive_breach_k", default_k)))


@dataclass(frozen=True)
class Dependency:
    resource_id: str
    coupling_class: CouplingClass


@dataclass(frozen=True)
class Declaration:
    """Emitted on registration and on every operating-mode change"""
    agent_id: str
    dependencies: FrozenSet[Dependency]
    operating_mode: OperatingMode
    timestamp: int
    provides: FrozenSet[str] = frozenset()
    cause_record_id: Optional[str] = None


@dataclass(frozen=True)
class ProposedAction:
    action_id: str
    kind: str
    resources: Tuple[str, ...] = ()
    setpoints: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def severs(self) -> bool:
        return self.kind in SEVERING_ACTIONS


@dataclass(frozen=True)
class ClearanceToken:
    token_id: str
    agent_id: str
    action_id: str
    topology_version: int
    override: bool = False


@dataclass(frozen=True)
class PolicyDecision:
    decision: Decision
    agent_id: str
    action_id: str
    record_id: str
    enforced: bool
    coupled_resources: Tuple[str, ...] = ()
    escalated: bool = False
    reason: str = ""


@dataclass
class AuditRecord:
    record_id: str
    seq: int
    agent_id: str
    timestamp: int
    event_kind: str
    payload: Dict[str, Any]
    access_tier: AccessTier
    retention_deadline: int
    cause_links: FrozenSet[str] = frozenset()
    pseudonymized: bool = False
    tombstone: bool = False


@dataclass(frozen=True)
class DriftSignal:
    agent_id: str
    metric: str
    observed: float
    bound: float
    domain: str
    timestamp: int
    severity: Severity
    record_id: str = ""


@dataclass(frozen=True)
class EnvelopeCheck:
    agent_id: str
    timestamp: int
    breaches: Tuple[str, ...]
    record_id: str = ""

    @property
    def within(self) -> bool:
        return not self.breaches


@dataclass
class ReassessmentTask:
    task_id: str
    agent_id: str
    change: ChangeKind
    tick: int
    measures: Tuple[str, ...] = ("R-20", "R-23")
    topology_version: Optional[int] = None
    status: str = "Pending"
    conformity_affected: Optional[bool] = None
    executed_measures: Tuple[str, ...] = ()


@dataclass
class ReviewTask:
    """Human review scheduled against a service-level deadline"""
    task_id: str
    kind: str
    agent_id: str
    created: int
    due: int
    reference: str = ""
    status: str = "Pending"


@dataclass(frozen=True)
class PurgeReport:
    purged: Dict[AccessTier, int]

    @property
    def total(self) -> int:
        return sum(self.purged.values())
