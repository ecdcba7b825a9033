#!/usr/bin/env python3
"""
Scenario Loader - Reads scenario fixtures and checks their cross references
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from src.errors import DanglingReference, SchemaError
from src.models.calibration import SystemProfile
from src.models.city import Zone
from src.models.runtime import CouplingClass, Dependency, OperatingEnvelope
from src.models.scenario import Scenario, ScenarioAgent, ScenarioEvent, ScenarioStep, ScriptedStep
from src.utils.config_loader import SCENARIO_DIR, ConfigLoader

logger = logging.getLogger(__name__)


def resolve_scenario_path(name_or_path: Union[str, Path]) -> Path:
    """Accept a path, or the stem of a shipped fixture such as ``corridor_cascade``"""
    path = Path(name_or_path)
    if path.exists():
        return path
    shipped = SCENARIO_DIR / f"{path.stem}.json"
    return shipped if shipped.exists() else path


def load_scenario(source: Union[str, Path, Dict[str, Any]], loader: Optional[ConfigLoader] = None,
                  default_k: int = 1) -> Scenario:
    """Load a scenario; raises SchemaError or DanglingReference"""
    loader = loader or ConfigLoader()
    if isinstance(source, dict):
        document = loader.parse(source, "scenario")
    else:
        document = loader.load(resolve_scenario_path(source), "scenario")

    config = dict(document.get("config", {}))
    k = int(config.get("consecutive_breach_k", default_k))

    agents = []
    for spec in document["agents"]:
        script = tuple(
            ScriptedStep(item["time"], ScenarioStep(item["kind"], spec["id"], dict(item.get("params", {}))))
            for item in sorted(spec.get("script", ()), key=lambda s: s["time"])
        )
        try:
            envelope = OperatingEnvelope.from_dict(spec["envelope"], default_k=k)
        except ValueError as e:
            raise SchemaError(f"scenario: agent {spec['id']}: {e}") from e
        agents.append(ScenarioAgent(
            profile=SystemProfile.from_dict(spec),
            envelope=envelope,
            provides=tuple(spec.get("provides", ())),
            dependencies=tuple(Dependency(d["resource"], CouplingClass(d["coupling"]))
                               for d in spec.get("dependencies", ())),
            script=script,
        ))

    zones = [Zone(z["zone_id"], float(z["baseline_share"]), bool(z.get("vulnerable", False)),
                  z.get("name", z["zone_id"]))
             for z in document.get("zones", ())]
    if zones and not np.isclose(sum(z.baseline_share for z in zones), 1.0, rtol=0.0, atol=1e-9):
        raise SchemaError("scenario: zone baseline shares must sum to 1")

    events = []
    for spec in document["events"]:
        steps = tuple(ScenarioStep(s["kind"], s.get("agent"), dict(s.get("params", {})))
                      for s in spec["steps"])
        events.append(ScenarioEvent(spec["time"], spec["id"], tuple(spec.get("agents", ())), steps,
                                    dict(spec.get("annotations", {}))))
    times = [e.time for e in events]
    if times != sorted(times):
        raise SchemaError("scenario: events must be sorted by time")

    scenario = Scenario(
        name=document["name"],
        agents=agents,
        zones=zones,
        regimes=dict(document.get("regimes", {})),
        events=events,
        config=config,
        description=document.get("description", ""),
    )
    check_references(scenario)
    logger.info("Loaded scenario %s: %d agents, %d events", scenario.name, len(agents), len(events))
    return scenario


def check_references(scenario: Scenario):
    agent_ids = scenario.agent_ids
    if len(set(agent_ids)) != len(agent_ids):
        raise DanglingReference(f"{scenario.name}: duplicate agent ids")
    known_agents = set(agent_ids)
    zone_ids = {z.zone_id for z in scenario.zones}
    provided = {r for a in scenario.agents for r in a.provides}

    for agent in scenario.agents:
        for dependency in agent.dependencies:
            if dependency.resource_id not in provided:
                raise DanglingReference(f"{agent.agent_id} depends on unknown resource {dependency.resource_id}")

    for event in scenario.events:
        for agent_id in event.agents:
            if agent_id not in known_agents:
                raise DanglingReference(f"{event.event_id} names unknown agent {agent_id}")
        for step in event.steps:
            if step.agent is not None and step.agent not in known_agents:
                raise DanglingReference(f"{event.event_id}: {step.kind} by unknown agent {step.agent}")
            zones = list(step.params.get("zones", {})) if step.kind == "detections" else []
            if step.kind == "decision" and "zone" in step.params:
                zones.append(step.params["zone"])
            for zone_id in zones:
                if zone_id not in zone_ids:
                    raise DanglingReference(f"{event.event_id} names unknown zone {zone_id}")
