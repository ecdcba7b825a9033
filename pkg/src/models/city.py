#!/usr/bin/env python3
"""
City Models - Registry entries, zones, fairness flags and contestation cases
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from .calibration import GovernanceLevel, SystemProfile
from .orchestration import AttributionReport

# Ratio reported for enforcement in a zone whose baseline share is zero
ZERO_BASELINE_RATIO = -1.0


class GovernanceBasis(str, Enum):
    BINDING = "Binding"
    VOLUNTARY = "Voluntary"


class DisclosureTier(str, Enum):
    PUBLIC = "Public"
    REGULATOR = "Regulator"


class CaseStatus(str, Enum):
    OPEN = "Open"
    UNDER_REVIEW = "UnderReview"
    RESOLVED = "Resolved"


@dataclass(frozen=True)
class RegistryEntry:
    profile: SystemProfile
    key_metric: str
    governance_basis: GovernanceBasis
    disclosure_tiers: FrozenSet[DisclosureTier]
    governance_level: GovernanceLevel
    declared_autonomy: str = ""
    confidential: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def system_id(self) -> str:
        return self.profile.id


@dataclass(frozen=True)
class Zone:
    zone_id: str
    baseline_share: float
    vulnerable: bool = False
    name: str = ""

    def __post_init__(self):
        if not 0.0 <= self.baseline_share <= 1.0:
            raise ValueError(f"Baseline share out of range for {self.zone_id}")


@dataclass(frozen=True)
class EnforcementEvent:
    zone_id: str
    timestamp: int
    agent_id: str = ""
    record_id: str = ""


@dataclass(frozen=True)
class FairnessFlag:
    zone_id: str
    observed_share: float
    baseline_share: float
    concentration_ratio: float
    cascade_active: bool
    raised_at: int
    human_review_requested: bool = False
    enforcement_held: bool = False

    @property
    def zero_baseline(self) -> bool:
        return self.baseline_share == 0


@dataclass(frozen=True)
class DisclosurePackage:
    system_id: str
    tier: DisclosureTier
    fields: Dict[str, Any]

    @property
    def field_names(self) -> FrozenSet[str]:
        return frozenset(self.fields)


@dataclass
class ContestationCase:
    case_id: str
    decision_record_id: str
    causal_chain: Optional[AttributionReport]
    decision: str
    information_relied_upon: Tuple[str, ...]
    authorities: Tuple[str, ...]
    review_path: str
    remedy: str
    status: CaseStatus = CaseStatus.OPEN
    explanations: Dict[str, str] = field(default_factory=dict)
    notifications: List[Tuple[int, str]] = field(default_factory=list)
    opened_at: int = 0

    @property
    def agents(self) -> FrozenSet[str]:
        return self.causal_chain.agents if self.causal_chain else frozenset()
