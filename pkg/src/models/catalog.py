#!/usr/bin/env python3
"""
Catalog Models - Governance measures, obligation references and conflict rules
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Tuple


class Layer(str, Enum):
    """Execution scope of a governance mechanism"""
    AGENT = "Agent"
    ORCHESTRATION = "Orchestration"
    CITY = "City"
    UNASSIGNED = "Unassigned"

    @property
    def code(self) -> str:
        return {"Agent": "A", "Orchestration": "O", "City": "C"}.get(self.value, "-")

    @property
    def rank(self) -> int:
        return {"Agent": 0, "Orchestration": 1, "City": 2}.get(self.value, -1)

    @classmethod
    def from_code(cls, code: str) -> "Layer":
        for layer in cls:
            if layer.code == code:
                return layer
        raise ValueError(f"Unknown layer code: {code}")


class MeasureKind(str, Enum):
    NOVEL = "novel"
    INTEGRATION = "integration"
    IMPLEMENTATION = "implementation"
    STUB = "stub"


class Framework(str, Enum):
    AIACT = "AIACT"
    ISO42001 = "ISO42001"
    NISTRMF = "NISTRMF"
    OTHER = "OTHER"


class Resolution(str, Enum):
    """Machine-readable resolution descriptor of a conflict rule"""
    TIERED_LOGGING = "TieredLogging"
    GRADUATED_RETENTION = "GraduatedRetention"
    CONSOLIDATED_ASSESSMENT = "ConsolidatedAssessment"
    STRICTEST_CLOCK_TRIAGE = "StrictestClockTriage"
    TIERED_DISCLOSURE = "TieredDisclosure"


@dataclass(frozen=True)
class ObligationRef:
    """Pointer to one regulatory provision; locators are opaque strings"""
    framework: Framework
    locator: str
    note: str = field(default="", compare=False)

    def __post_init__(self):
        if not self.locator or not self.locator.strip():
            raise ValueError("Obligation locator must be non-empty")

    @property
    def key(self) -> Tuple[str, str]:
        return (self.framework.value, self.locator)

    def __str__(self) -> str:
        return f"{self.framework.value}:{self.locator}"


@dataclass(frozen=True)
class GovernanceMeasure:
    id: str
    name: str
    layer: Layer
    kind: MeasureKind
    gap_addressed: str
    obligations: FrozenSet[ObligationRef]
    activatable: bool
    functions: Tuple[str, ...] = ()
    annotations: Tuple[str, ...] = ()

    @property
    def is_stub(self) -> bool:
        return self.kind is MeasureKind.STUB


@dataclass(frozen=True)
class ConflictRule:
    id: str
    tension: str
    implementing_measures: Tuple[str, ...]
    resolution: Resolution
    layer: Layer
    frameworks: str = ""


@dataclass(frozen=True)
class Catalog:
    """Immutable control catalog; measures and rules keep file order"""
    measures: Tuple[GovernanceMeasure, ...]
    rules: Tuple[ConflictRule, ...]
    census: Dict[str, int] = field(default_factory=dict, compare=False)

    def measure(self, measure_id: str) -> Optional[GovernanceMeasure]:
        for measure in self.measures:
            if measure.id == measure_id:
                return measure
        return None

    def rule(self, rule_id: str) -> Optional[ConflictRule]:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        return None

    @property
    def measure_ids(self) -> List[str]:
        return [m.id for m in self.measures]


@dataclass(frozen=True)
class Finding:
    """One invariant violation reported by catalog validation"""
    subject_id: str
    rule: str
    message: str


@dataclass
class ValidationReport:
    findings: List[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, subject_id: str, rule: str, message: str):
        self.findings.append(Finding(subject_id, rule, message))
