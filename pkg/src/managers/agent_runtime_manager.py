#!/usr/bin/env python3
"""
Agent Runtime Manager - Agent-layer mechanisms
Runtime policy enforcement, envelope drift detection, privacy-preserving audit logging,
retention, reassessment triggers and the declaration-and-alert outbox
"""

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, Iterable, List, Optional, Tuple, Union

from src.errors import UnknownMetric, UnregisteredAgent
from src.models.audit_trail import AuditTrail
from src.models.calibration import Activation, HumanInvolvement, SystemProfile
from src.models.runtime import (AccessTier, AuditRecord, ChangeKind, ClearanceToken, Decision,
                                Declaration, Dependency, DriftSignal, EnvelopeCheck,
                                OperatingEnvelope, OperatingMode, PolicyDecision, ProposedAction,
                                PurgeReport, ReassessmentTask, ReviewTask, Severity)
from src.models.topology import Topology
from src.models.trace import ActivationLog
from src.utils.config_loader import EngineConfig
from src.utils.pseudonymizer import Pseudonymizer

logger = logging.getLogger(__name__)

# Retention class of each audit event kind
EVENT_CLASSES = {
    "policy_decision": "enforcement",
    "enforcement_detection": "enforcement",
    "enforcement_decision": "enforcement",
    "drift_signal": "telemetry",
    "envelope_check": "telemetry",
    "heartbeat": "telemetry",
    "declaration": "declaration",
    "context": "declaration",
}

Alert = Union[Declaration, DriftSignal, PolicyDecision]


@dataclass
class RegisteredAgent:
    profile: SystemProfile
    envelope: OperatingEnvelope
    provides: Tuple[str, ...] = ()
    dependencies: Tuple[Dependency, ...] = ()
    mode: OperatingMode = OperatingMode.NORMAL
    mode_since: int = 0
    breach_counts: Dict[str, int] = field(default_factory=dict)

    def declaration(self, timestamp: int, cause_record_id: Optional[str] = None) -> Declaration:
        return Declaration(
            agent_id=self.profile.id,
            dependencies=frozenset(self.dependencies),
            operating_mode=self.mode,
            timestamp=timestamp,
            provides=frozenset(self.provides),
            cause_record_id=cause_record_id,
        )


class AgentRuntimeManager:
    """Owns every registered agent's envelope, mode and audit trail view"""

    def __init__(self, config: EngineConfig, calibration=None, trail: Optional[AuditTrail] = None,
                 activations: Optional[ActivationLog] = None,
                 pseudonymizer: Optional[Pseudonymizer] = None):
        self.config = config
        self.calibration = calibration
        self.trail = trail if trail is not None else AuditTrail()
        self.activations = activations if activations is not None else ActivationLog()
        self.pseudonymizer = pseudonymizer or Pseudonymizer(config.pseudonym_key)
        self.agents: Dict[str, RegisteredAgent] = {}
        self.outbox: Deque[Alert] = deque()
        self.tasks: Dict[str, ReassessmentTask] = {}
        self._task_index: Dict[Tuple[str, ChangeKind, int], str] = {}
        self.review_tasks: List[ReviewTask] = []

    # Registration and modes

    def register_agent(self, profile: SystemProfile, envelope: OperatingEnvelope,
                       provides: Iterable[str] = (), dependencies: Iterable[Dependency] = (),
                       now: int = 0) -> Declaration:
        agent = RegisteredAgent(profile, envelope, tuple(provides), tuple(dependencies), mode_since=now)
        self.agents[profile.id] = agent
        record = self.record_audit(profile.id, "declaration",
                                   {"mode": agent.mode.value, "provides": sorted(agent.provides)},
                                   now=now)
        declaration = agent.declaration(now, record.record_id)
        self.outbox.append(declaration)
        logger.info("Registered agent %s (%s)", profile.id, profile.authority)
        return declaration

    def _require(self, agent_id: str) -> RegisteredAgent:
        agent = self.agents.get(agent_id)
        if agent is None:
            raise UnregisteredAgent(agent_id)
        return agent

    def mode_of(self, agent_id: str) -> OperatingMode:
        return self._require(agent_id).mode

    def set_mode(self, agent_id: str, mode: OperatingMode, now: int,
                 cause_links: Iterable[str] = ()) -> Optional[Declaration]:
        """Change an agent's operating mode; a Declaration is emitted only on change"""
        agent = self._require(agent_id)
        if agent.mode is mode:
            return None
        previous, agent.mode, agent.mode_since = agent.mode, mode, now
        record = self.record_audit(agent_id, "declaration",
                                   {"mode": mode.value, "previous": previous.value},
                                   cause_links=cause_links, now=now)
        declaration = agent.declaration(now, record.record_id)
        self.outbox.append(declaration)
        logger.info("Agent %s mode %s -> %s at t=%d", agent_id, previous.value, mode.value, now)
        return declaration

    def drain_outbox(self) -> List[Alert]:
        alerts = list(self.outbox)
        self.outbox.clear()
        return alerts

    # Runtime policy enforcement

    def enforce_policy(self, agent_id: str, action: ProposedAction, topology_view: Optional[Topology],
                       clearance: Optional[ClearanceToken] = None, now: int = 0,
                       orchestration: Optional[Activation] = None) -> PolicyDecision:
        """Evaluate a proposed action against coupling guards and the envelope

        ``orchestration`` is the orchestration-layer activation that decides
        whether a guard violation blocks, escalates in advisory mode or only
        leaves a record; it defaults to the agent's own governance level.
        """
        agent = self._require(agent_id)
        coupled = topology_view.safety_couplings(action.resources) if topology_view else []
        coupled_resources = tuple(sorted({c.to_resource for c in coupled}))
        cleared = self._clearance_valid(clearance, agent_id, action, topology_view)

        for metric in action.setpoints:
            if metric not in agent.envelope.metrics:
                raise UnknownMetric(f"{agent_id}: {metric}")
        out_of_bounds = sorted(m for m, v in action.setpoints.items()
                               if not agent.envelope.metrics[m].contains(v))

        if orchestration is None:
            orchestration = (self.calibration.profile_activation(agent.profile).orchestration
                             if self.calibration else Activation.OFF)

        escalated = False
        if coupled and not cleared:
            if orchestration is Activation.FULL:
                decision, enforced, escalated = Decision.BLOCK, True, True
                reason = "safety-coupled resource without clearance"
            elif orchestration is Activation.BASIC:
                decision, enforced, escalated = Decision.ESCALATE, False, True
                reason = "safety-coupled resource without clearance (advisory)"
            else:
                decision, enforced = Decision.ALLOW, False
                reason = "safety-coupled resource without clearance (orchestration off)"
        elif out_of_bounds:
            decision, enforced = Decision.BLOCK, True
            reason = f"setpoints outside envelope: {','.join(out_of_bounds)}"
        else:
            decision, enforced = Decision.ALLOW, False
            reason = "cleared" if coupled else "within bounds"

        record = self.record_audit(agent_id, "policy_decision", {
            "action_id": action.action_id,
            "action_kind": action.kind,
            "resources": list(action.resources),
            "coupled_resources": list(coupled_resources),
            "decision": decision.value,
            "clearance": clearance.token_id if clearance else None,
            "reason": reason,
        }, now=now)

        if coupled or action.setpoints:
            self.activations.activate("R-09")
        result = PolicyDecision(decision, agent_id, action.action_id, record.record_id,
                                enforced, coupled_resources, escalated, reason)
        if escalated:
            self.activations.mark_escalated()
            self.outbox.append(result)
        if decision is Decision.ALLOW and agent.profile.evidence.human_involvement is HumanInvolvement.PRE_APPROVAL:
            self.schedule_review(agent_id, "operator_approval", now, record.record_id)

        logger.debug("Policy %s for %s/%s: %s", decision.value, agent_id, action.action_id, reason)
        return result

    @staticmethod
    def _clearance_valid(clearance: Optional[ClearanceToken], agent_id: str,
                         action: ProposedAction, topology_view: Optional[Topology]) -> bool:
        if clearance is None:
            return False
        version = topology_view.version if topology_view else clearance.topology_version
        return (clearance.agent_id == agent_id and clearance.action_id == action.action_id
                and clearance.topology_version == version)

    # Drift detection

    def observe(self, agent_id: str, telemetry: Dict[str, float], tick: int) -> Optional[DriftSignal]:
        """Debounced envelope check; at most one signal per call, critical breaches first"""
        agent = self._require(agent_id)
        envelope = agent.envelope
        for metric in telemetry:
            if metric not in envelope.metrics:
                raise UnknownMetric(f"{agent_id}: {metric}")

        breaches = []
        for metric in sorted(telemetry):
            value = float(telemetry[metric])
            bounds = envelope.metrics[metric]
            bound = bounds.violated_bound(value)
            if bound is None:
                agent.breach_counts[metric] = 0
                continue
            agent.breach_counts[metric] = agent.breach_counts.get(metric, 0) + 1
            if agent.breach_counts[metric] >= envelope.consecutive_breach_k:
                breaches.append((not bounds.critical, metric, value, bound))

        if not breaches:
            return None

        _, metric, value, bound = min(breaches)
        severity = Severity.DEGRADED if envelope.metrics[metric].critical else Severity.WARNING
        context = self.trail.latest(agent_id, "context")
        record = self.record_audit(agent_id, "drift_signal", {
            "metric": metric, "observed": value, "bound": bound, "severity": severity.value,
        }, cause_links=[context.record_id] if context else [], now=tick)
        signal = DriftSignal(agent_id, metric, value, bound, agent.profile.domain.lower(), tick,
                             severity, record.record_id)

        if severity is Severity.DEGRADED:
            self.activations.activate("R-10")
            self.set_mode(agent_id, OperatingMode.DEGRADED, tick, cause_links=[record.record_id])
        self.outbox.append(signal)
        logger.debug("Drift %s on %s.%s=%s (bound %s)", severity.value, agent_id, metric, value, bound)
        return signal

    def confirm_envelope(self, agent_id: str, telemetry: Dict[str, float], now: int) -> EnvelopeCheck:
        """Explicit envelope check requested when an agent flags its own anomaly"""
        agent = self._require(agent_id)
        breaches = []
        for metric, value in sorted(telemetry.items()):
            bounds = agent.envelope.metrics.get(metric)
            if bounds is None:
                raise UnknownMetric(f"{agent_id}: {metric}")
            if not bounds.contains(float(value)):
                breaches.append(metric)
        record = self.record_audit(agent_id, "envelope_check",
                                   {"metrics": sorted(telemetry), "breaches": breaches}, now=now)
        self.activations.activate("R-10")
        return EnvelopeCheck(agent_id, now, tuple(breaches), record.record_id)

    # Audit logging and retention

    def record_audit(self, agent_id: str, event_kind: str, payload: Dict, subject_identifying: bool = False,
                     cause_links: Iterable[str] = (), now: int = 0,
                     access_tier: AccessTier = AccessTier.OVERSIGHT,
                     event_class: Optional[str] = None) -> AuditRecord:
        event_class = event_class or EVENT_CLASSES.get(event_kind, "default")
        stored = self.pseudonymizer.apply(payload) if subject_identifying else dict(payload)
        return self.trail.append(
            agent_id=agent_id,
            timestamp=now,
            event_kind=event_kind,
            payload=stored,
            access_tier=access_tier,
            retention_deadline=now + self.config.retention_for(event_class),
            cause_links=cause_links,
            pseudonymized=subject_identifying,
        )

    def apply_retention(self, trail: Optional[AuditTrail] = None, now: int = 0) -> PurgeReport:
        trail = trail if trail is not None else self.trail
        purged = {tier: 0 for tier in AccessTier}
        for record in trail:
            if record.tombstone or record.retention_deadline >= now:
                continue
            record.payload = {}
            record.tombstone = True
            purged[record.access_tier] += 1
        report = PurgeReport(purged)
        if report.total:
            logger.info("Retention purge at t=%d tombstoned %d records", now, report.total)
        return report

    def export_trail(self, trail: Optional[AuditTrail] = None) -> str:
        trail = trail if trail is not None else self.trail
        lines = []
        for record in sorted(trail, key=lambda r: (r.timestamp, r.record_id)):
            lines.append("\t".join([
                record.record_id,
                str(record.timestamp),
                record.agent_id,
                record.event_kind,
                record.access_tier.value,
                "1" if record.tombstone else "0",
                ",".join(sorted(record.cause_links)) or "-",
                json.dumps(record.payload, sort_keys=True, separators=(",", ":")),
            ]))
        return "".join(line + "\n" for line in lines)

    # Reassessment and human review

    def reassessment_trigger(self, agent_id: str, change: ChangeKind, tick: int,
                             topology_version: Optional[int] = None) -> ReassessmentTask:
        self._require(agent_id)
        key = (agent_id, change, tick)
        if key in self._task_index:
            return self.tasks[self._task_index[key]]
        task = ReassessmentTask(f"RT-{len(self.tasks) + 1:04d}", agent_id, change, tick,
                                topology_version=topology_version)
        self.tasks[task.task_id] = task
        self._task_index[key] = task.task_id
        logger.info("Reassessment %s queued for %s (%s)", task.task_id, agent_id, change.value)
        return task

    def execute_reassessment(self, task: Union[str, ReassessmentTask], conformity_affected: bool,
                             now: int) -> ReassessmentTask:
        """Risk review always runs; conformity re-assessment only when assumptions changed"""
        task = self.tasks[task] if isinstance(task, str) else task
        executed = ("R-20", "R-23") if conformity_affected else ("R-20",)
        for measure_id in executed:
            self.activations.activate(measure_id)
        self.record_audit(task.agent_id, "reassessment", {
            "task_id": task.task_id, "change": task.change.value,
            "conformity_affected": conformity_affected,
        }, now=now)
        task.status = "Completed"
        task.conformity_affected = conformity_affected
        task.executed_measures = executed
        return task

    def pending_tasks(self) -> List[ReassessmentTask]:
        return [t for t in self.tasks.values() if t.status == "Pending"]

    def schedule_review(self, agent_id: str, kind: str, now: int, reference: str = "") -> ReviewTask:
        task = ReviewTask(f"HR-{len(self.review_tasks) + 1:04d}", kind, agent_id, now,
                          now + self.config.human_review_sla, reference)
        self.review_tasks.append(task)
        return task

    def complete_review(self, agent_id: str, now: int, outcome: str = "Approved") -> List[ReviewTask]:
        completed = []
        for task in self.review_tasks:
            if task.agent_id == agent_id and task.status == "Pending":
                task.status = outcome
                completed.append(task)
        if completed:
            self.record_audit(agent_id, "operator_review",
                              {"tasks": [t.task_id for t in completed], "outcome": outcome},
                              cause_links=[t.reference for t in completed if t.reference in self.trail],
                              now=now)
        return completed
