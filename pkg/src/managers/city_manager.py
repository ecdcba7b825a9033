#!/usr/bin/env python3
"""
City Manager - City-layer mechanisms
City-wide AI registry, tiered disclosure, collective fairness monitoring,
contestation linked to the causal chain and explanation rendering
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from src.errors import DuplicateSystem, UnknownRecord, UnknownSystem, UnknownZone, UnsupportedLanguage
from src.managers.calibration_manager import profile_from_registry
from src.managers.orchestration_manager import attribute_records
from src.models.audit_trail import AuditTrail
from src.models.calibration import Activation, SystemProfile
from src.models.city import (CaseStatus, ContestationCase, DisclosurePackage, DisclosureTier,
                             EnforcementEvent, FairnessFlag, GovernanceBasis, RegistryEntry, Zone,
                             ZERO_BASELINE_RATIO)
from src.models.orchestration import AttributionReport
from src.models.topology import Topology
from src.utils.config_loader import ConfigLoader, shipped_path

logger = logging.getLogger(__name__)

OWNER = "city"

# Allowed case transitions
CASE_FLOW = {
    CaseStatus.OPEN: (CaseStatus.UNDER_REVIEW,),
    CaseStatus.UNDER_REVIEW: (CaseStatus.RESOLVED,),
    CaseStatus.RESOLVED: (),
}

EXPLANATION_TEMPLATES = {
    "en": (
        "Case {case_id}\n"
        "Decision: {decision}\n"
        "Information relied upon:\n{information}\n"
        "Contributing systems: {systems}\n"
        "Responsible authorities: {authorities}\n"
        "Review available: {review_path}\n"
        "Possible remedy: {remedy}\n"
        "Status: {status}\n"
    ),
    "ar": (
        "القضية {case_id}\n"
        "القرار: {decision}\n"
        "المعلومات التي استند إليها القرار:\n{information}\n"
        "الأنظمة المساهمة: {systems}\n"
        "الجهات المسؤولة: {authorities}\n"
        "المراجعة المتاحة: {review_path}\n"
        "سبل الانتصاف الممكنة: {remedy}\n"
        "الحالة: {status}\n"
    ),
}


class CityManager:
    """Registry, disclosure, fairness and contestation state of one city"""

    def __init__(self, config, calibration, runtime=None, orchestration=None, activations=None):
        self.config = config
        self.calibration = calibration
        self.runtime = runtime
        self.orchestration = orchestration
        if activations is None and runtime is not None:
            activations = runtime.activations
        self.activations = activations
        self.registry: Dict[str, RegistryEntry] = {}
        self.flags: List[FairnessFlag] = []
        self.cases: Dict[str, ContestationCase] = {}
        if orchestration is not None:
            orchestration.city = self

    def _activate(self, measure_id: str):
        if self.activations is not None:
            self.activations.activate(measure_id)

    # Registry

    def register_system(self, profile: SystemProfile, key_metric: str,
                        governance_basis: Union[GovernanceBasis, str],
                        declared_autonomy: str = "", confidential: Optional[Dict] = None) -> RegistryEntry:
        if profile.id in self.registry:
            raise DuplicateSystem(profile.id)
        entry = RegistryEntry(
            profile=profile,
            key_metric=key_metric,
            governance_basis=GovernanceBasis(governance_basis),
            disclosure_tiers=frozenset(DisclosureTier),
            governance_level=self.calibration.assign_governance_level(profile),
            declared_autonomy=declared_autonomy,
            confidential=dict(confidential or {}),
        )
        self.registry[profile.id] = entry
        logger.debug("Registered %s (%s, %s)", profile.id, profile.authority, entry.governance_level.value)
        return entry

    def load_registry(self, path: Union[str, Path, None] = None,
                      loader: Optional[ConfigLoader] = None) -> List[RegistryEntry]:
        loader = loader or ConfigLoader()
        path = Path(path) if path else shipped_path("uae_inventory.json")
        document = loader.load(path, "uae_inventory")
        entries = [
            self.register_system(profile_from_registry(system), system["key_metric"],
                                 system["governance_basis"], system.get("declared_autonomy", ""),
                                 system.get("confidential"))
            for system in document["systems"]
        ]
        logger.info("Loaded registry with %d systems from %s", len(entries), path.name)
        return entries

    def get_entry(self, system_id: str) -> RegistryEntry:
        entry = self.registry.get(system_id)
        if entry is None:
            raise UnknownSystem(system_id)
        return entry

    def list_systems(self, authority: Optional[str] = None, domain: Optional[str] = None,
                     level=None, basis=None) -> List[RegistryEntry]:
        basis = GovernanceBasis(basis) if basis is not None else None
        return [
            e for e in self.registry.values()
            if (authority is None or e.profile.authority == authority)
            and (domain is None or e.profile.domain == domain)
            and (level is None or e.governance_level.value == getattr(level, "value", level))
            and (basis is None or e.governance_basis is basis)
        ]

    # Tiered disclosure

    def publish_disclosure(self, system: Union[str, RegistryEntry],
                           tier: Union[DisclosureTier, str]) -> DisclosurePackage:
        entry = system if isinstance(system, RegistryEntry) else self.get_entry(system)
        if entry.system_id not in self.registry:
            raise UnknownSystem(entry.system_id)
        tier = DisclosureTier(tier)
        profile = entry.profile
        description = self.calibration.describe(profile)

        fields = {
            "system": entry.system_id,
            "name": profile.name or entry.system_id,
            "authority": profile.authority,
            "domain": profile.domain,
            "declared_autonomy": entry.declared_autonomy or description["autonomy"],
            "autonomy_level": description["autonomy"],
            "governance_level": entry.governance_level.value,
            "governance_basis": entry.governance_basis.value,
            "key_metric": entry.key_metric,
            "layers": description["layers"],
        }
        if tier is DisclosureTier.REGULATOR:
            fields.update({
                "autonomy_rationale": description["rationale"],
                "decision_scope": profile.evidence.decision_scope.value,
                "human_involvement": profile.evidence.human_involvement.value,
                "domain_criticality": profile.evidence.domain_criticality.value,
                "endangers_essential_services": profile.endangers_essential_services,
                "cross_org_dependencies": profile.cross_org_dependencies,
                "trail_access": f"trail://{entry.system_id}",
            })
            for name, value in sorted(entry.confidential.items()):
                fields[f"confidential.{name}"] = value
        logger.debug("Disclosure of %s at tier %s with %d fields", entry.system_id, tier.value, len(fields))
        return DisclosurePackage(entry.system_id, tier, fields)

    # Collective fairness monitoring

    def monitor_fairness(self, events: Iterable[EnforcementEvent], zones: Sequence[Zone],
                         cascade_active: bool = False, threshold: Optional[float] = None,
                         now: Optional[int] = None, window: Optional[int] = None,
                         activation: Activation = Activation.BASIC) -> List[FairnessFlag]:
        """Flag every zone whose share of enforcement is at least ``threshold`` times its baseline

        A zone with a zero baseline share is flagged as soon as it sees any
        enforcement, with ``ZERO_BASELINE_RATIO`` in place of the ratio.
        """
        threshold = self.config.fairness_threshold if threshold is None else threshold
        if threshold <= 1:
            raise ValueError(f"Fairness threshold must exceed 1, got {threshold}")
        index = {zone.zone_id: i for i, zone in enumerate(zones)}
        baseline = np.array([zone.baseline_share for zone in zones], dtype=float)
        if not np.isclose(baseline.sum(), 1.0, rtol=0.0, atol=1e-9):
            raise ValueError(f"Zone baseline shares sum to {baseline.sum()}, expected 1")

        events = list(events)
        for event in events:
            if event.zone_id not in index:
                raise UnknownZone(event.zone_id)
        if now is not None:
            window = self.config.fairness_window if window is None else window
            events = [e for e in events if now - window <= e.timestamp <= now]
        if not events:
            return []
        now = max(e.timestamp for e in events) if now is None else now

        counts = np.bincount([index[e.zone_id] for e in events], minlength=len(zones))
        observed = counts / counts.sum()
        ratios = np.divide(observed, baseline, out=np.zeros_like(observed), where=baseline > 0)
        zero_baseline = (baseline == 0) & (counts > 0)

        flags = []
        for i in np.flatnonzero((ratios >= threshold) | zero_baseline):
            zone = zones[i]
            review = cascade_active and zone.vulnerable
            flag = FairnessFlag(
                zone_id=zone.zone_id,
                observed_share=float(observed[i]),
                baseline_share=zone.baseline_share,
                concentration_ratio=ZERO_BASELINE_RATIO if zero_baseline[i] else float(ratios[i]),
                cascade_active=cascade_active,
                raised_at=now,
                human_review_requested=review,
                enforcement_held=review and activation is Activation.FULL,
            )
            flags.append(flag)
            self._record_flag(flag, [e for e in events if e.zone_id == zone.zone_id])

        if flags:
            self.flags.extend(flags)
            self._activate("R-08")
        return flags

    def _record_flag(self, flag: FairnessFlag, zone_events: List[EnforcementEvent]):
        if self.runtime is None:
            return
        trail = self.runtime.trail
        causes = sorted({e.record_id for e in zone_events if e.record_id and e.record_id in trail})
        payload = {
            "zone": flag.zone_id,
            "ratio": round(flag.concentration_ratio, 6),
            "human_review": flag.human_review_requested,
            "held": flag.enforcement_held,
        }
        if flag.zero_baseline:
            payload["zero_baseline"] = True
        record = self.runtime.record_audit(OWNER, "fairness_flag", payload, cause_links=causes,
                                           now=flag.raised_at)
        if flag.human_review_requested:
            agents = sorted({e.agent_id for e in zone_events if e.agent_id}) or [OWNER]
            self.runtime.schedule_review(agents[0], "fairness_review", flag.raised_at, record.record_id)
        review = " (human review requested)" if flag.human_review_requested else ""
        if flag.zero_baseline:
            logger.warning("Fairness flag on %s: enforcement in a zone with zero baseline share%s",
                           flag.zone_id, review)
        else:
            logger.info("Fairness flag on %s: ratio %.2f%s", flag.zone_id, flag.concentration_ratio, review)

    def is_held(self, zone_id: str) -> bool:
        return any(f.zone_id == zone_id and f.enforcement_held for f in self.flags)

    # Contestation

    def open_contestation(self, decision_record_id: str, trail: Optional[AuditTrail] = None,
                          topology: Optional[Topology] = None, now: Optional[int] = None) -> ContestationCase:
        trail = trail if trail is not None else self.runtime.trail
        decision = trail.find(decision_record_id)
        if decision is None:
            raise UnknownRecord(decision_record_id)

        if self.orchestration is not None:
            chain = self.orchestration.attribute(trail, decision_record_id, topology)
        else:
            version = topology.version if topology else 0
            chain = AttributionReport(decision_record_id,
                                      attribute_records(trail, decision_record_id,
                                                        self.config.governance_owners), version)

        relied_upon = []
        for record_id in sorted(trail.ancestors(decision_record_id)):
            record = trail.get(record_id)
            if record.agent_id in chain.contributions:
                relied_upon.append(f"{record_id} {record.event_kind} ({record.agent_id})")

        now = decision.timestamp if now is None else now
        case = ContestationCase(
            case_id=f"CC-{len(self.cases) + 1:03d}",
            decision_record_id=decision_record_id,
            causal_chain=chain,
            decision=str(decision.payload.get("decision", decision.event_kind)),
            information_relied_upon=tuple(relied_upon),
            authorities=tuple(sorted({self._authority_of(a) for a in chain.agents})),
            review_path=self.config.review_path,
            remedy=self.config.remedy,
            opened_at=now,
        )
        case.notifications.append((now, case.status.value))
        self.cases[case.case_id] = case
        if self.runtime is not None:
            self.runtime.record_audit(OWNER, "contestation_case", {
                "case": case.case_id, "agents": sorted(chain.agents),
            }, cause_links=[decision_record_id], now=now)
        self._activate("R-04")
        logger.info("Contestation %s opened on %s spanning %s", case.case_id, decision_record_id,
                    ", ".join(case.authorities))
        return case

    def _authority_of(self, agent_id: str) -> str:
        if self.runtime is not None and agent_id in self.runtime.agents:
            return self.runtime.agents[agent_id].profile.authority
        if agent_id in self.registry:
            return self.registry[agent_id].profile.authority
        return agent_id

    def get_case(self, case_id: str) -> ContestationCase:
        try:
            return self.cases[case_id]
        except KeyError:
            raise UnknownRecord(case_id) from None

    def advance_case(self, case: Union[str, ContestationCase], status: Union[CaseStatus, str],
                     now: int = 0) -> ContestationCase:
        case = self.get_case(case) if isinstance(case, str) else case
        status = CaseStatus(status)
        if status not in CASE_FLOW[case.status]:
            raise ValueError(f"{case.case_id}: cannot move from {case.status.value} to {status.value}")
        if case.causal_chain is None:
            raise ValueError(f"{case.case_id}: causal chain missing")
        case.status = status
        case.notifications.append((now, status.value))
        logger.info("Case %s is now %s", case.case_id, status.value)
        return case

    def render_explanation(self, case: ContestationCase, language: str) -> str:
        if language not in self.config.languages or language not in EXPLANATION_TEMPLATES:
            raise UnsupportedLanguage(language)
        systems = ", ".join(f"{a} ({self._authority_of(a)})" for a in sorted(case.agents)) or "-"
        text = EXPLANATION_TEMPLATES[language].format(
            case_id=case.case_id,
            decision=case.decision,
            information="\n".join(f"  - {item}" for item in case.information_relied_upon) or "  -",
            systems=systems,
            authorities=", ".join(case.authorities) or "-",
            review_path=case.review_path,
            remedy=case.remedy,
            status=case.status.value,
        )
        case.explanations[language] = text
        self._activate("R-16")
        return text
