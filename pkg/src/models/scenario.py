#!/usr/bin/env python3
"""
Scenario Models - Agents, scripted steps and timeline events of a simulation fixture
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .calibration import SystemProfile
from .runtime import Dependency, OperatingEnvelope


# Step kinds understood by the simulation engine
STEP_KINDS = (
    "trigger",
    "action",
    "telemetry",
    "envelope_check",
    "reassess",
    "detections",
    "dilemma",
    "decision",
    "post_event_review",
    "operator_review",
    "mode",
)


@dataclass(frozen=True)
class ScenarioStep:
    kind: str
    agent: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class ScriptedStep:
    """Background agent behaviour; appears in the trace only if it activates something"""
    time: int
    step: ScenarioStep


@dataclass(frozen=True)
class ScenarioEvent:
    time: int
    event_id: str
    agents: Tuple[str, ...]
    steps: Tuple[ScenarioStep, ...]
    annotations: Dict[str, str] = field(default_factory=dict, compare=False)


@dataclass
class ScenarioAgent:
    profile: SystemProfile
    envelope: OperatingEnvelope
    provides: Tuple[str, ...] = ()
    dependencies: Tuple[Dependency, ...] = ()
    script: Tuple[ScriptedStep, ...] = ()

    @property
    def agent_id(self) -> str:
        return self.profile.id


@dataclass
class Scenario:
    name: str
    agents: List[ScenarioAgent]
    zones: List[Any]
    regimes: Dict[str, int]
    events: List[ScenarioEvent]
    config: Dict[str, Any] = field(default_factory=dict)
    description: str = ""

    def agent(self, agent_id: str) -> ScenarioAgent:
        for agent in self.agents:
            if agent.agent_id == agent_id:
                return agent
        raise KeyError(agent_id)

    @property
    def agent_ids(self) -> List[str]:
        return [a.agent_id for a in self.agents]

    @property
    def authorities(self) -> List[str]:
        seen: List[str] = []
        for agent in self.agents:
            if agent.profile.authority not in seen:
                seen.append(agent.profile.authority)
        return seen
