#!/usr/bin/env python3
"""
Orchestration Manager - Orchestration-layer mechanisms
Interaction topology and clearance, declaration intake, cascade correlation, incident triage,
joint oversight, attribution, conflict-resolution dispatch and consolidated assessment
"""

import logging
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from src.errors import (DanglingResource, EmptyRegimeSet, MissingContext, OpenIncident,
                        SingleAuthority, UnknownAgent, UnknownRecord)
from src.models.audit_trail import AuditTrail
from src.models.calibration import Activation, LayerActivationMap
from src.models.catalog import ConflictRule, Resolution
from src.models.orchestration import (AttributionReport, CascadeEvent, ConsolidatedAssessment,
                                      Denial, EmergentImpactFlag, IncidentRecord,
                                      KnownCouplingRisk, OversightSession, ResolutionAction,
                                      TopologyUpdateDirective)
from src.models.runtime import (AuditRecord, ChangeKind, ClearanceToken, CouplingClass,
                                Declaration, DriftSignal, OperatingMode, PolicyDecision,
                                ProposedAction)
from src.models.topology import Topology
from src.models.trace import ActivationLog
from src.utils.pseudonymizer import is_identifying

logger = logging.getLogger(__name__)

OWNER = "orchestration"


def correlation_boundary(timestamp: int, window: int) -> int:
    """Next multiple of the correlation window at or after ``timestamp``"""
    return int(math.ceil(timestamp / window)) * window


class Correlator:
    """Two-stage cross-domain correlation

    A coupled pair of signals from distinct domains inside the window raises a
    provisional assessment; the cascade is confirmed at the next window
    boundary, or at once when the pair matches a registered coupling risk.
    Later linked signals join the assessment or the open cascade.
    """

    def __init__(self, window: int):
        if window <= 0:
            raise ValueError("Correlation window must be positive")
        self.window = window
        self.pending: List[DriftSignal] = []
        self.assessment: List[DriftSignal] = []
        self.confirm_at: Optional[int] = None
        self.known_risk: Optional[KnownCouplingRisk] = None
        self.cascade: Optional[CascadeEvent] = None
        self._cascades = 0

    @staticmethod
    def _linked(signal: DriftSignal, members: Sequence[DriftSignal], topology: Topology) -> bool:
        return any(topology.connected(signal.agent_id, m.agent_id) for m in members)

    def offer(self, signal: DriftSignal, topology: Topology, factors: Iterable[str] = ()) -> str:
        """Feed one signal; returns joined-cascade, joined, flagged or pending"""
        if self.cascade is not None and self.cascade.is_open and self._linked(signal, self.cascade.signals, topology):
            self.cascade.signals = self.cascade.signals + (signal,)
            self.cascade.domains = self.cascade.domains | {signal.domain}
            return "joined-cascade"

        if self.confirm_at is not None and self._linked(signal, self.assessment, topology):
            earliest = min(s.timestamp for s in self.assessment)
            if signal.timestamp - earliest <= self.window:
                self.assessment.append(signal)
                return "joined"

        self.pending = [s for s in self.pending if signal.timestamp - s.timestamp <= self.window]
        partners = [s for s in self.pending
                    if s.domain != signal.domain and topology.connected(s.agent_id, signal.agent_id)]
        self.pending.append(signal)
        if self.confirm_at is not None or not partners:
            return "pending"

        self.assessment = sorted(partners + [signal], key=lambda s: (s.timestamp, s.record_id))
        agents = {s.agent_id for s in self.assessment}
        self.known_risk = topology.matching_risk(agents, factors)
        self.confirm_at = signal.timestamp if self.known_risk else correlation_boundary(signal.timestamp, self.window)
        return "flagged"

    def due(self, now: int) -> bool:
        return self.confirm_at is not None and now >= self.confirm_at

    def confirm(self, now: int) -> CascadeEvent:
        self._cascades += 1
        cascade = CascadeEvent(
            cascade_id=f"CX-{self._cascades:03d}",
            signals=tuple(self.assessment),
            domains=frozenset(s.domain for s in self.assessment),
            opened_at=now,
            window_used=self.window,
            known_risk=self.known_risk.risk_id if self.known_risk else None,
        )
        self.cascade = cascade
        confirmed_ids = {id(s) for s in self.assessment}
        self.pending = [s for s in self.pending if id(s) not in confirmed_ids]
        self.assessment, self.confirm_at, self.known_risk = [], None, None
        return cascade


def correlate(signals: Iterable[DriftSignal], topology: Topology, window_minutes: int = 30,
              factors: Iterable[str] = ()) -> Optional[CascadeEvent]:
    """Replay a signal stream and return the first confirmed cascade, if any"""
    correlator = Correlator(window_minutes)
    for signal in sorted(signals, key=lambda s: (s.timestamp, s.record_id)):
        if correlator.confirm_at is not None and signal.timestamp > correlator.confirm_at:
            break
        correlator.offer(signal, topology, factors)
    if correlator.confirm_at is None:
        return None
    return correlator.confirm(correlator.confirm_at)


def strictest_clock(regimes: Dict[str, int]) -> int:
    if not regimes:
        raise EmptyRegimeSet("at least one regime window is required")
    return min(regimes.values())


def attribute_records(trail: AuditTrail, outcome_record_id: str,
                      excluded_owners: Iterable[str] = ()) -> Dict[str, Tuple[str, ...]]:
    """Owners of the outcome and of every causal ancestor, with their record ids"""
    if outcome_record_id not in trail:
        raise UnknownRecord(outcome_record_id)
    excluded = set(excluded_owners)
    contributions: Dict[str, List[str]] = {}
    for record_id in trail.ancestors(outcome_record_id) | {outcome_record_id}:
        owner = trail.get(record_id).agent_id
        if owner not in excluded:
            contributions.setdefault(owner, []).append(record_id)
    return {owner: tuple(sorted(ids)) for owner, ids in sorted(contributions.items())}


class OrchestrationManager:
    """Single logical owner of topology, cascade and incident state"""

    def __init__(self, config, catalog, calibration, runtime,
                 activations: Optional[ActivationLog] = None):
        self.config = config
        self.catalog = catalog
        self.calibration = calibration
        self.runtime = runtime
        self.trail: AuditTrail = runtime.trail
        self.activations = activations if activations is not None else runtime.activations
        self.city = None

        self.topology_history: List[Topology] = []
        self.correlator = Correlator(config.correlation_window)
        self.environment_factors: List[str] = []
        self.regimes: Dict[str, int] = {}
        self.flags: List[EmergentImpactFlag] = []
        self.cascades: List[CascadeEvent] = []
        self.incidents: Dict[str, IncidentRecord] = {}
        self.sessions: Dict[str, OversightSession] = {}
        self.assessments: List[ConsolidatedAssessment] = []
        self.directives: List[TopologyUpdateDirective] = []
        self.coordination: Dict[str, List[str]] = {}
        self._clearances = 0
        self._incidents = 0

    # Topology

    @property
    def topology(self) -> Topology:
        if not self.topology_history:
            return Topology(0, {}, {})
        return self.topology_history[-1]

    def _authorities(self) -> Dict[str, str]:
        return {aid: agent.profile.authority for aid, agent in self.runtime.agents.items()}

    def register_topology(self, declarations: Iterable[Declaration]) -> Topology:
        by_agent: Dict[str, Declaration] = {}
        for declaration in declarations:
            if declaration.agent_id not in self.runtime.agents:
                raise UnknownAgent(declaration.agent_id)
            by_agent[declaration.agent_id] = declaration

        provided = {r for d in by_agent.values() for r in d.provides}
        for declaration in by_agent.values():
            for dependency in declaration.dependencies:
                if dependency.resource_id not in provided:
                    raise DanglingResource(f"{declaration.agent_id} depends on {dependency.resource_id}")

        version = self.topology.version + 1
        topology = Topology(version, by_agent, self._authorities(), self.topology.known_risks)
        self.topology_history.append(topology)
        if topology.is_empty():
            logger.warning("Topology version %d registered with no declarations", version)
        else:
            logger.info("Topology version %d registered with %d couplings", version, len(topology.couplings))
        return topology

    def update_topology(self, declarations: Iterable[Declaration]) -> Topology:
        merged = dict(self.topology.declarations)
        merged.update({d.agent_id: d for d in declarations})
        return self.register_topology(merged.values())

    def topology_at(self, version: int) -> Topology:
        for topology in self.topology_history:
            if topology.version == version:
                return topology
        raise KeyError(version)

    def effective_activation(self, agent_ids: Iterable[str]) -> LayerActivationMap:
        profiles = [self.runtime.agents[a].profile for a in agent_ids if a in self.runtime.agents]
        return self.calibration.effective_activation(profiles)

    def issue_clearance(self, agent_id: str, action: ProposedAction, override: bool = False,
                        now: int = 0, topology: Optional[Topology] = None) -> Union[ClearanceToken, Denial]:
        topology = topology or self.topology
        if self.effective_activation([agent_id]).orchestration is Activation.OFF:
            logger.warning("Clearance requested by %s with orchestration layer off", agent_id)
        self.activations.activate("R-01")

        if action.severs and not override:
            for coupling in topology.safety_couplings(action.resources):
                dependent = self.runtime.agents.get(coupling.from_system)
                if dependent and dependent.mode.rank >= OperatingMode.DEGRADED.rank:
                    self._record("clearance_denied", {
                        "agent": agent_id, "action_id": action.action_id,
                        "resource": coupling.to_resource, "dependent": coupling.from_system,
                    }, now)
                    return Denial(agent_id, action.action_id, coupling, topology.version,
                                  f"{coupling.from_system} is {dependent.mode.value}")

        self._clearances += 1
        token = ClearanceToken(f"CT-{self._clearances:04d}", agent_id, action.action_id,
                               topology.version, override)
        self._record("clearance_issued", {"token": token.token_id, "agent": agent_id,
                                          "action_id": action.action_id, "override": override}, now)
        return token

    # Declaration-and-alert intake

    def receive_alerts(self, alerts: Iterable[Union[Declaration, DriftSignal, PolicyDecision]], now: int):
        queue = list(alerts)
        while queue:
            alert = queue.pop(0)
            if isinstance(alert, PolicyDecision):
                self._intake_escalation(alert, now)
            elif isinstance(alert, Declaration):
                self._intake_declaration(alert, now)
            elif isinstance(alert, DriftSignal):
                self._intake_signal(alert, now)
            queue.extend(self.runtime.drain_outbox())

    def _intake_escalation(self, decision: PolicyDecision, now: int):
        self.activations.activate("R-01")
        self._record("topology_violation", {
            "agent": decision.agent_id, "action_id": decision.action_id,
            "resources": list(decision.coupled_resources), "decision": decision.decision.value,
        }, now, cause_links=[decision.record_id])

    def _intake_declaration(self, declaration: Declaration, now: int):
        if declaration.operating_mode is OperatingMode.NORMAL:
            return
        if self.effective_activation([declaration.agent_id]).orchestration is Activation.OFF:
            return
        dependents = []
        for resource in sorted(declaration.provides):
            dependents.extend(self.topology.dependents_of(resource, CouplingClass.SAFETY_COUPLED))
        if not dependents:
            return

        self.activations.activate("R-01")
        causes = [declaration.cause_record_id] if declaration.cause_record_id else []
        for coupling in dependents:
            context = self.runtime.record_audit(coupling.from_system, "context", {
                "provider": declaration.agent_id,
                "resource": coupling.to_resource,
                "provider_mode": declaration.operating_mode.value,
            }, cause_links=causes, now=now)
            self.runtime.set_mode(coupling.from_system, OperatingMode.DEGRADED, now,
                                  cause_links=[context.record_id])
            logger.info("Context from %s forwarded to safety-coupled dependent %s",
                        declaration.agent_id, coupling.from_system)

    def _intake_signal(self, signal: DriftSignal, now: int):
        if self.effective_activation([signal.agent_id]).orchestration is Activation.OFF:
            return
        outcome = self.correlator.offer(signal, self.topology, self.environment_factors)
        if outcome == "pending":
            return

        self.activations.activate("R-03")
        if outcome == "flagged":
            members = self.correlator.assessment
            flag = EmergentImpactFlag(
                assessment_id=f"EA-{len(self.flags) + 1:03d}",
                agents=frozenset(s.agent_id for s in members),
                domains=frozenset(s.domain for s in members),
                raised_at=now,
                confirm_at=self.correlator.confirm_at,
            )
            self.flags.append(flag)
            self._record("emergent_impact_flag", {"assessment": flag.assessment_id,
                                                  "domains": sorted(flag.domains)},
                         now, cause_links=[s.record_id for s in members if s.record_id])
            for agent_id in sorted(flag.agents):
                self._share_context(agent_id, members, now)
            logger.info("Emergent-impact flag %s over %s, confirmation due t=%d",
                        flag.assessment_id, sorted(flag.domains), flag.confirm_at)
        else:
            members = (self.correlator.cascade.signals if outcome == "joined-cascade"
                       else self.correlator.assessment)
            self._share_context(signal.agent_id, members, now)
        self.on_tick(now)

    def _share_context(self, agent_id: str, members: Sequence[DriftSignal], now: int):
        causes = sorted({s.record_id for s in members if s.record_id})
        self.runtime.record_audit(agent_id, "context", {
            "assessment_members": sorted({s.agent_id for s in members}),
            "domains": sorted({s.domain for s in members}),
        }, cause_links=causes, now=now)

    # Clock-driven transitions

    def on_tick(self, now: int) -> Optional[CascadeEvent]:
        confirmed = None
        if self.correlator.due(now):
            confirmed = self._confirm_cascade(now)
        cascade = self.open_cascade
        if cascade is not None and cascade is not confirmed and self._quiet_since(cascade) is not None:
            if now >= self._quiet_since(cascade) + self.config.closure_window:
                cascade.closed_at = now
                logger.info("Cascade %s closed at t=%d", cascade.cascade_id, now)
        return confirmed

    def next_wakeup(self, now: int) -> Optional[int]:
        candidates = []
        if self.correlator.confirm_at is not None:
            candidates.append(self.correlator.confirm_at)
        cascade = self.open_cascade
        if cascade is not None and self._quiet_since(cascade) is not None:
            candidates.append(self._quiet_since(cascade) + self.config.closure_window)
        future = [t for t in candidates if t > now]
        return min(future) if future else None

    def _quiet_since(self, cascade: CascadeEvent) -> Optional[int]:
        since = cascade.opened_at
        for agent_id in cascade.agents:
            agent = self.runtime.agents.get(agent_id)
            if agent is None or agent.mode is not OperatingMode.NORMAL:
                return None
            since = max(since, agent.mode_since)
        return since

    @property
    def open_cascade(self) -> Optional[CascadeEvent]:
        for cascade in reversed(self.cascades):
            if cascade.is_open:
                return cascade
        return None

    def _confirm_cascade(self, now: int) -> CascadeEvent:
        cascade = self.correlator.confirm(now)
        self.cascades.append(cascade)
        self.activations.activate("R-03")
        self._record("cascade_confirmed", {"cascade": cascade.cascade_id, "domains": sorted(cascade.domains)},
                     now, cause_links=[s.record_id for s in cascade.signals if s.record_id])
        logger.info("Cascade %s confirmed at t=%d across %s", cascade.cascade_id, now, sorted(cascade.domains))

        if self.effective_activation(cascade.agents).orchestration is Activation.FULL:
            if self.regimes:
                self.open_incident(cascade, self.regimes, now)
            authorities = sorted({self.runtime.agents[a].profile.authority for a in cascade.agents})
            if len(authorities) >= 2:
                self.escalate_joint_oversight(cascade, authorities, now)
        return cascade

    # Incidents and oversight

    def open_incident(self, cascade: CascadeEvent, applicable_regimes: Dict[str, int], t0: int) -> IncidentRecord:
        if not cascade.is_open:
            raise OpenIncident(f"{cascade.cascade_id} is closed")
        baseline = strictest_clock(applicable_regimes)
        existing = self.incidents.get(cascade.cascade_id)
        if existing is not None:
            return existing

        shared = self._record("incident_record", {
            "cascade": cascade.cascade_id, "regimes": dict(sorted(applicable_regimes.items())),
            "baseline": baseline,
        }, t0, cause_links=[s.record_id for s in cascade.signals if s.record_id in self.trail])
        self._incidents += 1
        incident = IncidentRecord(
            incident_id=f"IN-{self._incidents:03d}",
            cascade_id=cascade.cascade_id,
            t0=t0,
            regime_clocks=dict(applicable_regimes),
            baseline_deadline=baseline,
            notifications={(regime, t0) for regime in applicable_regimes},
            shared_record_id=shared.record_id,
        )
        self.incidents[cascade.cascade_id] = incident
        self.coordination.setdefault(incident.incident_id, [])
        self.activations.activate("R-05")
        self.activations.invoke("T4")
        logger.info("Incident %s opened at t=%d, strictest clock %d min", incident.incident_id, t0, baseline)
        return incident

    def escalate_joint_oversight(self, cascade: CascadeEvent, authorities: Iterable[str],
                                 now: Optional[int] = None) -> OversightSession:
        participants = tuple(dict.fromkeys(authorities))
        if len(participants) < 2:
            raise SingleAuthority(f"{cascade.cascade_id}: {participants}")
        now = cascade.opened_at if now is None else now
        briefing = tuple(s.record_id for s in cascade.signals if s.record_id in self.trail)
        record = self._record("oversight_session", {"cascade": cascade.cascade_id,
                                                    "participants": list(participants)},
                              now, cause_links=briefing)
        session = OversightSession(
            session_id=f"OS-{len(self.sessions) + 1:03d}",
            cascade_id=cascade.cascade_id,
            participants=participants,
            acknowledgements={authority: now for authority in participants},
            briefing_record_ids=briefing,
            opened_at=now,
            record_id=record.record_id,
        )
        self.sessions[cascade.cascade_id] = session
        self.activations.activate("R-06")
        self._coordination_point("R-06", cascade.cascade_id)
        logger.info("Joint oversight %s opened with %s", session.session_id, ", ".join(participants))
        return session

    def deliberate(self, session: OversightSession, topic: str, now: int) -> AuditRecord:
        record = self._record("oversight_deliberation", {"session": session.session_id, "topic": topic},
                              now, cause_links=[session.record_id] if session.record_id in self.trail else [])
        session.deliberations.append(topic)
        self.activations.activate("R-06")
        return record

    def _coordination_point(self, mechanism: str, cascade_id: Optional[str] = None):
        incident = self.incidents.get(cascade_id) if cascade_id else self.current_incident
        if incident is None:
            return
        points = self.coordination.setdefault(incident.incident_id, [])
        if mechanism not in points:
            points.append(mechanism)

    @property
    def current_incident(self) -> Optional[IncidentRecord]:
        if not self.incidents:
            return None
        return list(self.incidents.values())[-1]

    def export_incident(self, incident: IncidentRecord) -> str:
        lines = [
            f"incident_id\t{incident.incident_id}",
            f"cascade_id\t{incident.cascade_id}",
            f"t0\t{incident.t0}",
            f"baseline\t{incident.baseline_deadline}",
            f"due_at\t{incident.due_at}",
            f"shared_record_id\t{incident.shared_record_id}",
            "regime\twindow\tdeadline\tnotified_at",
        ]
        sent = dict(incident.notifications)
        for regime in sorted(incident.regime_clocks):
            lines.append(f"{regime}\t{incident.regime_clocks[regime]}\t"
                         f"{incident.deadline_for(regime)}\t{sent.get(regime, '-')}")
        return "\n".join(lines) + "\n"

    # Attribution

    def attribute(self, trail: Optional[AuditTrail], outcome_record_id: str,
                  topology: Optional[Topology] = None) -> AttributionReport:
        trail = trail if trail is not None else self.trail
        topology = topology or self.topology
        contributions = attribute_records(trail, outcome_record_id, self.config.governance_owners)
        report = AttributionReport(outcome_record_id, contributions, topology.version)
        self.activations.activate("R-24")
        self._coordination_point("R-24")
        logger.debug("Attribution of %s: %s", outcome_record_id, sorted(contributions))
        return report

    # Conflict resolution

    def resolve_conflict(self, rule: ConflictRule, context: Dict[str, Any],
                         now: int = 0) -> Tuple[ResolutionAction, AuditRecord]:
        """Dispatch a conflict rule to its resolution mechanism

        Nothing is logged as activated unless the handler returns; a handler
        that raises leaves the activation log untouched.
        """
        handler = {
            Resolution.TIERED_LOGGING: self._resolve_tiered_logging,
            Resolution.GRADUATED_RETENTION: self._resolve_retention,
            Resolution.CONSOLIDATED_ASSESSMENT: self._resolve_consolidation,
            Resolution.STRICTEST_CLOCK_TRIAGE: self._resolve_triage,
            Resolution.TIERED_DISCLOSURE: self._resolve_disclosure,
        }[rule.resolution]
        executed, detail = handler(rule, context, now)
        self.activations.activate("R-02")
        self.activations.invoke(rule.id)
        if executed:
            for measure_id in rule.implementing_measures:
                self.activations.activate(measure_id)

        evidence = self._record("conflict_resolution", {
            "rule": rule.id, "resolution": rule.resolution.value, "executed": executed,
            "detail": {k: v for k, v in detail.items() if isinstance(v, (str, int, float, bool, list, dict))},
        }, now)
        action = ResolutionAction(rule.id, rule.resolution, executed, detail, evidence.record_id)
        logger.info("Rule %s resolved via %s (executed=%s)", rule.id, rule.resolution.value, executed)
        return action, evidence

    @staticmethod
    def _need(context: Dict[str, Any], rule: ConflictRule, *keys: str):
        missing = [k for k in keys if context.get(k) is None]
        if missing:
            raise MissingContext(f"{rule.id} needs {', '.join(missing)}")

    def _resolve_tiered_logging(self, rule, context, now):
        self._need(context, rule, "logging_scope")
        tiers = {}
        for name in context["logging_scope"]:
            tiers[name] = "Regulator (pseudonymized)" if is_identifying(name) else "Oversight"
        return False, {"tiers": tiers, "minimized": sorted(n for n in tiers if is_identifying(n))}

    def _resolve_retention(self, rule, context, now):
        self._need(context, rule, "retention_at")
        report = self.runtime.apply_retention(self.trail, context["retention_at"])
        return report.total > 0, {"purged": report.total}

    def _resolve_consolidation(self, rule, context, now):
        self._need(context, rule, "incident")
        assessment, directive = self.consolidate_assessment(context["incident"], now=now,
                                                            force=bool(context.get("force")))
        return True, {"assessment": assessment.assessment_id, "directive": directive.directive_id}

    def _resolve_triage(self, rule, context, now):
        incident = context.get("incident")
        if incident is not None:
            return False, {"incident": incident.incident_id, "baseline": incident.baseline_deadline,
                           "due_at": incident.due_at}
        self._need(context, rule, "cascade", "regimes")
        incident = self.open_incident(context["cascade"], context["regimes"], now)
        return True, {"incident": incident.incident_id, "baseline": incident.baseline_deadline}

    def _resolve_disclosure(self, rule, context, now):
        self._need(context, rule, "system_id", "tier")
        if self.city is None:
            raise MissingContext(f"{rule.id} needs the city registry")
        package = self.city.publish_disclosure(context["system_id"], context["tier"])
        return True, {"system": package.system_id, "tier": package.tier.value,
                      "fields": sorted(package.fields)}

    # Consolidated assessment and topology feedback

    def consolidate_assessment(self, incident: IncidentRecord, trail: Optional[AuditTrail] = None,
                               topology: Optional[Topology] = None, now: int = 0,
                               force: bool = False) -> Tuple[ConsolidatedAssessment, TopologyUpdateDirective]:
        cascade = next((c for c in self.cascades if c.cascade_id == incident.cascade_id), None)
        if cascade is not None and cascade.is_open and not force:
            raise OpenIncident(f"{incident.incident_id} is still active")
        topology = topology or self.topology
        attribution = self.attribute(trail, incident.shared_record_id, topology)

        triage_refs = self.catalog.trace_backward("R-05")
        sections = {}
        sent = dict(incident.notifications)
        for regime, window in sorted(incident.regime_clocks.items()):
            sections[regime] = {
                "window": window,
                "deadline": incident.deadline_for(regime),
                "notified_at": sent.get(regime),
                "obligations": sorted(str(o) for o in triage_refs if o.locator.startswith(regime)),
                "contributors": sorted(attribution.contributions),
            }

        record = self._record("consolidated_assessment", {
            "incident": incident.incident_id, "regimes": sorted(sections),
        }, now, cause_links=[incident.shared_record_id])
        assessment = ConsolidatedAssessment(
            assessment_id=f"CA-{len(self.assessments) + 1:03d}",
            incident_id=incident.incident_id,
            attribution=attribution,
            regime_sections=sections,
            replaces=tuple(f"{regime} assessment" for regime in sorted(sections)),
            created_at=now,
            record_id=record.record_id,
        )
        self.assessments.append(assessment)

        agents = frozenset(cascade.agents) if cascade else attribution.agents
        domains = cascade.domains if cascade else frozenset()
        risk = KnownCouplingRisk(
            risk_id=f"KR-{len(self.directives) + 1:03d}",
            factors=tuple(sorted(self.environment_factors)),
            agents=agents,
            domains=domains,
            registered_version=topology.version + 1,
        )
        directive = TopologyUpdateDirective(f"TD-{len(self.directives) + 1:03d}", risk,
                                            f"compound event behind {incident.incident_id}")
        self.directives.append(directive)

        self.activations.activate("R-12")
        self.activations.invoke("T3")
        self._coordination_point("R-12", incident.cascade_id)
        logger.info("Consolidated assessment %s for %s", assessment.assessment_id, incident.incident_id)
        return assessment, directive

    def apply_directive(self, directive: TopologyUpdateDirective, now: int = 0) -> Topology:
        current = self.topology
        topology = current.with_known_risk(directive.risk)
        self.topology_history.append(topology)
        self.activations.activate("R-01")
        self._record("topology_update", {"directive": directive.directive_id, "risk": directive.risk.risk_id,
                                         "version": topology.version}, now)
        for agent_id in sorted(directive.risk.agents):
            if agent_id in self.runtime.agents:
                self.runtime.reassessment_trigger(agent_id, ChangeKind.INTEGRATION, now, topology.version)
        logger.info("Topology version %d registers known coupling risk %s", topology.version,
                    directive.risk.risk_id)
        return topology

    def register_known_risk(self, risk: KnownCouplingRisk) -> Topology:
        """Seed a coupling risk learned in an earlier run"""
        topology = self.topology.with_known_risk(risk)
        self.topology_history.append(topology)
        return topology

    def _record(self, event_kind: str, payload: Dict[str, Any], now: int,
                cause_links: Iterable[str] = ()) -> AuditRecord:
        return self.runtime.record_audit(OWNER, event_kind, payload, cause_links=cause_links, now=now)
