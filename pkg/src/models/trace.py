#!/usr/bin/env python3
"""
Trace Models - Activation log, governance events, activation trace and summary
"""

from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Tuple


class ActivationLog:
    """Collects measure activations and rule invocations as mechanisms execute

    Managers write into the log; the simulation engine drains it once per
    timeline row. Used outside a simulation it simply accumulates.
    """

    def __init__(self):
        self.measures: List[str] = []
        self.rules: List[str] = []
        self.escalated = False

    def activate(self, measure_id: str):
        if measure_id not in self.measures:
            self.measures.append(measure_id)

    def invoke(self, rule_id: str):
        if rule_id not in self.rules:
            self.rules.append(rule_id)

    def mark_escalated(self):
        self.escalated = True

    def drain(self) -> Tuple[List[str], List[str], bool]:
        snapshot = (sorted(self.measures), sorted(self.rules), self.escalated)
        self.measures, self.rules, self.escalated = [], [], False
        return snapshot

    def __bool__(self) -> bool:
        return bool(self.measures or self.rules)


@dataclass(frozen=True)
class GovernanceEvent:
    """One row of an activation trace"""
    time: int
    event: str
    agents: Tuple[str, ...]
    measures: Tuple[str, ...]
    layer: str
    rules: Tuple[str, ...]


@dataclass(frozen=True)
class DecisionFact:
    """A resident-facing decision and the accountability chain built for it"""
    record_id: str
    time: int
    attribution_agents: FrozenSet[str]
    case_id: Optional[str] = None
    case_agents: FrozenSet[str] = frozenset()


@dataclass(frozen=True)
class ScheduledTask:
    kind: str
    agent_id: str
    created: int
    due: int
    reference: str = ""


@dataclass
class TraceFacts:
    t0: int = 0
    cascade_opened_at: Optional[int] = None
    first_detection_at: Optional[int] = None
    coordination_points: List[str] = field(default_factory=list)
    decisions: List[DecisionFact] = field(default_factory=list)
    directives: List[str] = field(default_factory=list)
    learned_risks: List[Any] = field(default_factory=list)
    scheduled_tasks: List[ScheduledTask] = field(default_factory=list)
    annotations: Dict[str, Dict[str, str]] = field(default_factory=dict)


@dataclass
class ActivationTrace:
    scenario: str
    mode: str
    rows: List[GovernanceEvent] = field(default_factory=list)
    facts: TraceFacts = field(default_factory=TraceFacts)


@dataclass(frozen=True)
class ActivationSummary:
    measures_activated: int = 0
    measure_ids: Tuple[str, ...] = ()
    detection_time: int = 0
    coordination_points: int = 0
    coordination_ids: Tuple[str, ...] = ()
    rules_invoked: Tuple[str, ...] = ()
    layers_activated: Tuple[str, ...] = ()
    chain_complete: bool = False
    systemic_learning: bool = False

    @property
    def coverage(self) -> str:
        return f"{self.measures_activated} of 25 ({self.measures_activated * 100 // 25}%)"
