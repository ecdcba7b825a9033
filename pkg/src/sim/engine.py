#!/usr/bin/env python3
"""
Simulation Engine - Drives scenario agents and events through the governance engine
on a simulated minute clock and records the activation trace
"""

import logging
from typing import Dict, Iterable, List, Optional, Set

from src.managers.agent_runtime_manager import AgentRuntimeManager
from src.managers.calibration_manager import CalibrationManager
from src.managers.catalog_manager import CatalogManager
from src.managers.city_manager import CityManager
from src.managers.mode_manager import WITH_FRAMEWORK, ModeManager
from src.managers.orchestration_manager import OrchestrationManager, attribute_records
from src.models.audit_trail import AuditTrail
from src.models.city import EnforcementEvent
from src.models.orchestration import Denial, KnownCouplingRisk
from src.models.runtime import ChangeKind, OperatingMode, ProposedAction
from src.models.scenario import Scenario, ScenarioEvent, ScenarioStep, ScriptedStep
from src.models.trace import (ActivationLog, ActivationTrace, DecisionFact, GovernanceEvent,
                              ScheduledTask, TraceFacts)
from src.sim.clock import INTERNAL, EventScheduler
from src.utils.config_loader import EngineConfig, load_engine_config

logger = logging.getLogger(__name__)

ESCALATED_LAYER = "A→O"


class SimulationEngine:
    """Runs scenarios against one catalog, decision table and engine config

    Every call to ``run`` builds fresh managers, so runs are independent and
    identical inputs always give identical traces.
    """

    def __init__(self, config: Optional[EngineConfig] = None, catalog: Optional[CatalogManager] = None,
                 calibration: Optional[CalibrationManager] = None):
        self.config = config or load_engine_config()
        self.catalog = catalog or CatalogManager.from_file()
        self.calibration = calibration or CalibrationManager.from_file()
        self.last_run: Optional["ScenarioRun"] = None

    def run(self, scenario: Scenario, mode: str = WITH_FRAMEWORK,
            known_risks: Iterable[KnownCouplingRisk] = ()) -> ActivationTrace:
        run = ScenarioRun(self, scenario, ModeManager(mode), tuple(known_risks))
        self.last_run = run
        return run.execute()


class ScenarioRun:
    """State of one simulation run"""

    def __init__(self, engine: SimulationEngine, scenario: Scenario, modes: ModeManager,
                 known_risks=()):
        self.scenario = scenario
        self.modes = modes
        self.catalog = engine.catalog
        self.config = engine.config.with_overrides(scenario.config)

        self.activations = ActivationLog()
        self.trail = AuditTrail()
        self.runtime = AgentRuntimeManager(self.config, engine.calibration, self.trail, self.activations)
        self.orchestration = OrchestrationManager(self.config, self.catalog, engine.calibration,
                                                  self.runtime, self.activations)
        self.city = CityManager(self.config, engine.calibration, self.runtime, self.orchestration)
        self.orchestration.regimes = dict(scenario.regimes)
        self.known_risks = known_risks

        self.scheduler = EventScheduler()
        self.trace = ActivationTrace(scenario.name, modes.get_current_mode(), facts=TraceFacts())
        self.enforcement: List[EnforcementEvent] = []
        self._escalated_rows: Set[int] = set()
        self._t0: Optional[int] = None

    # Setup

    def _register_agents(self):
        start = self.scenario.events[0].time if self.scenario.events else 0
        declarations = [
            self.runtime.register_agent(agent.profile, agent.envelope, agent.provides, agent.dependencies, start)
            for agent in self.scenario.agents
        ]
        self.runtime.drain_outbox()
        if not self.modes.governance_enabled:
            return
        self.orchestration.register_topology(declarations)
        for risk in self.known_risks:
            self.orchestration.register_known_risk(risk)

    def _schedule(self):
        for event in self.scenario.events:
            self.scheduler.schedule(event.time, event)
        for agent in self.scenario.agents:
            for scripted in agent.script:
                self.scheduler.schedule(scripted.time, scripted, INTERNAL)

    # Main loop

    def execute(self) -> ActivationTrace:
        self._register_agents()
        self.activations.drain()
        self._schedule()

        while self.scheduler.has_pending():
            now, _, item = self.scheduler.pop_next()
            if isinstance(item, ScenarioEvent):
                for step in item.steps:
                    self._step(step, now)
                self._emit_row(now, item.event_id, item.agents, timeline=True)
                if item.annotations:
                    self.trace.facts.annotations[item.event_id] = dict(item.annotations)
            elif isinstance(item, ScriptedStep):
                self._step(item.step, now)
                self._emit_row(now, f"{item.step.agent}_{item.step.kind}", (item.step.agent,), timeline=False)
            else:
                self._settle(now)
                self._emit_row(now, "governance_tick", (), timeline=False)

            if self.modes.governance_enabled:
                wakeup = self.orchestration.next_wakeup(now)
                if wakeup is not None:
                    self.scheduler.schedule_wakeup(wakeup, "wakeup")

        self._collect_facts()
        logger.info("Scenario %s (%s) produced %d trace rows", self.scenario.name,
                    self.modes.get_current_mode(), len(self.trace.rows))
        return self.trace

    def _settle(self, now: int):
        """Deliver queued declarations and alerts, then let clock-driven transitions fire"""
        if not self.modes.governance_enabled:
            self.runtime.drain_outbox()
            return
        self.orchestration.receive_alerts(self.runtime.drain_outbox(), now)
        self.orchestration.on_tick(now)

    def _emit_row(self, now: int, label: str, agents, timeline: bool):
        measures, rules, escalated = self.activations.drain()
        if not self.modes.governance_enabled:
            return
        if not timeline and not (measures or rules):
            return
        rows = self.trace.rows
        if not timeline and rows and rows[-1].time == now:
            last = rows.pop()
            index = len(rows)
            escalated = escalated or index in self._escalated_rows
            measures = sorted(set(last.measures) | set(measures))
            rules = sorted(set(last.rules) | set(rules))
            label, agents = last.event, last.agents
        if escalated:
            self._escalated_rows.add(len(rows))
        rows.append(GovernanceEvent(now, label, tuple(a for a in agents if a), tuple(measures),
                                    self._row_layer(measures, escalated), tuple(rules)))

    def _row_layer(self, measures: List[str], escalated: bool) -> str:
        if not measures:
            return "-"
        top = max((self.catalog.layer_of(m) for m in measures), key=lambda layer: layer.rank)
        if escalated and top.rank <= 1:
            return ESCALATED_LAYER
        return top.code

    # Steps

    def _step(self, step: ScenarioStep, now: int):
        if self.modes.governance_enabled:
            handler = getattr(self, f"_do_{step.kind}")
        else:
            handler = getattr(self, f"_baseline_{step.kind}", None)
        if handler is not None:
            handler(step, now)
        self._settle(now)

    def _do_trigger(self, step: ScenarioStep, now: int):
        factors = sorted(step.params.get("factors", ()))
        self.orchestration.environment_factors = factors
        if self._t0 is None:
            self._t0 = now
        logger.info("Environment at t=%d: %s", now, ", ".join(factors) or "-")

    _baseline_trigger = _do_trigger

    def _do_action(self, step: ScenarioStep, now: int):
        params = step.params
        action = ProposedAction(params["action_id"], params.get("action", params["action_id"]),
                                tuple(params.get("resources", ())),
                                {k: float(v) for k, v in params.get("setpoints", {}).items()})
        clearance = None
        if params.get("clearance"):
            result = self.orchestration.issue_clearance(step.agent, action, bool(params.get("override")), now)
            clearance = None if isinstance(result, Denial) else result
        self.runtime.enforce_policy(step.agent, action, self.orchestration.topology, clearance, now,
                                    self.orchestration.effective_activation([step.agent]).orchestration)

    def _do_telemetry(self, step: ScenarioStep, now: int):
        self.runtime.observe(step.agent, step.params["metrics"], now)

    def _do_envelope_check(self, step: ScenarioStep, now: int):
        check = self.runtime.confirm_envelope(step.agent, step.params["metrics"], now)
        if not check.within:
            self.runtime.set_mode(step.agent, OperatingMode.DEGRADED, now, cause_links=[check.record_id])

    def _do_reassess(self, step: ScenarioStep, now: int):
        params = step.params
        task = self.runtime.reassessment_trigger(step.agent, ChangeKind(params["change"]), now,
                                                 self.orchestration.topology.version)
        if params.get("execute", True):
            self.runtime.execute_reassessment(task, bool(params.get("conformity_affected", False)), now)

    def _do_detections(self, step: ScenarioStep, now: int):
        self._record_detections(step, now)
        involved = {step.agent}
        cascade = self.orchestration.open_cascade
        if cascade is not None:
            involved.update(cascade.agents)
        involved.update(s.agent_id for s in self.orchestration.correlator.assessment)
        city = self.orchestration.effective_activation(involved).city
        if city.enabled and self.scenario.zones:
            cascade_active = cascade is not None or self.orchestration.correlator.confirm_at is not None
            self.city.monitor_fairness(self.enforcement, self.scenario.zones, cascade_active,
                                       now=now, activation=city)

    def _record_detections(self, step: ScenarioStep, now: int):
        context = self.trail.latest(step.agent, "context")
        causes = [context.record_id] if context else []
        for zone_id, count in sorted(step.params.get("zones", {}).items()):
            for _ in range(int(count)):
                record = self.runtime.record_audit(step.agent, "enforcement_detection", {"zone": zone_id},
                                                   cause_links=causes, now=now)
                self.enforcement.append(EnforcementEvent(zone_id, now, step.agent, record.record_id))

    _baseline_detections = _record_detections

    def _do_dilemma(self, step: ScenarioStep, now: int):
        for spec in step.params.get("rules", ()):
            rule = self.catalog.resolve_rule(spec["rule"])
            context = {k: v for k, v in spec.items() if k != "rule"}
            incident = self.orchestration.current_incident
            if rule.id in ("T3", "T4") and incident is not None:
                context.setdefault("incident", incident)
            if rule.id == "T4" and incident is None:
                context.setdefault("cascade", self.orchestration.open_cascade)
                context.setdefault("regimes", self.orchestration.regimes)
                if context["cascade"] is None:
                    logger.warning("t=%d: %s dilemma skipped, no open cascade to triage", now, rule.id)
                    continue
            if rule.id == "T3" and context.get("incident") is None:
                logger.warning("t=%d: %s dilemma skipped, no incident to consolidate", now, rule.id)
                continue
            self.orchestration.resolve_conflict(rule, context, now)

        topic = step.params.get("deliberation")
        cascade = self.orchestration.open_cascade
        session = self.orchestration.sessions.get(cascade.cascade_id) if cascade else None
        if topic and session is not None:
            self.orchestration.deliberate(session, topic, now)

    def _do_decision(self, step: ScenarioStep, now: int):
        record = self._record_decision(step, now)
        agents = frozenset(attribute_records(self.trail, record.record_id, self.config.governance_owners))
        city = self.orchestration.effective_activation(agents).city
        if not city.enabled:
            self.trace.facts.decisions.append(DecisionFact(record.record_id, now, agents))
            return
        case = self.city.open_contestation(record.record_id, now=now)
        for language in step.params.get("languages", self.config.languages):
            self.city.render_explanation(case, language)
        self.trace.facts.decisions.append(
            DecisionFact(record.record_id, now, case.causal_chain.agents, case.case_id, case.agents))

    def _record_decision(self, step: ScenarioStep, now: int):
        params = step.params
        cause = self.trail.latest(step.agent, "enforcement_detection") or self.trail.latest(step.agent, "context")
        payload: Dict = {"decision": params.get("decision", "penalty"), **params.get("subject", {})}
        if "zone" in params:
            payload["zone"] = params["zone"]
            payload["held"] = self.city.is_held(params["zone"])
        return self.runtime.record_audit(step.agent, "enforcement_decision", payload,
                                         subject_identifying=True,
                                         cause_links=[cause.record_id] if cause else [], now=now)

    def _baseline_decision(self, step: ScenarioStep, now: int):
        record = self._record_decision(step, now)
        self.trace.facts.decisions.append(DecisionFact(record.record_id, now, frozenset()))

    def _do_post_event_review(self, step: ScenarioStep, now: int):
        incident = self.orchestration.current_incident
        if incident is None:
            logger.info("Post-event review at t=%d: no incident to consolidate", now)
            return
        _, directive = self.orchestration.consolidate_assessment(incident, now=now,
                                                                 force=bool(step.params.get("force")))
        if step.params.get("apply_directive", True):
            self.orchestration.apply_directive(directive, now)

    def _do_operator_review(self, step: ScenarioStep, now: int):
        self.runtime.complete_review(step.agent, now, step.params.get("outcome", "Approved"))

    def _do_mode(self, step: ScenarioStep, now: int):
        self.runtime.set_mode(step.agent, OperatingMode(step.params["mode"]), now)

    # Facts

    def _collect_facts(self):
        facts = self.trace.facts
        facts.t0 = self._t0 if self._t0 is not None else 0
        if not self.modes.governance_enabled:
            return
        if self.orchestration.cascades:
            facts.cascade_opened_at = self.orchestration.cascades[0].opened_at
        facts.first_detection_at = next((r.time for r in self.trace.rows if "R-10" in r.measures), None)
        for incident in self.orchestration.incidents.values():
            for mechanism in self.orchestration.coordination.get(incident.incident_id, ()):
                facts.coordination_points.append(mechanism)
        facts.directives = [d.directive_id for d in self.orchestration.directives]
        facts.learned_risks = [d.risk for d in self.orchestration.directives]
        facts.scheduled_tasks = [ScheduledTask(t.kind, t.agent_id, t.created, t.due, t.reference)
                                 for t in self.runtime.review_tasks]
        facts.scheduled_tasks.extend(
            ScheduledTask(f"reassessment:{t.change.value}", t.agent_id, t.tick, t.tick, t.task_id)
            for t in self.runtime.pending_tasks())
