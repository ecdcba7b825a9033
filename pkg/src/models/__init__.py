"""Domain types shared by the governance managers and the simulator"""

from .audit_trail import AuditTrail
from .calibration import (Activation, AutonomyClassification, AutonomyEvidence, AutonomyLevel,
                          DecisionScope, DomainCriticality, GovernanceLevel, HumanInvolvement,
                          LayerActivationMap, SystemProfile)
from .catalog import (Catalog, ConflictRule, Finding, Framework, GovernanceMeasure, Layer,
                      MeasureKind, ObligationRef, Resolution, ValidationReport)
from .city import (CaseStatus, ContestationCase, DisclosurePackage, DisclosureTier,
                   EnforcementEvent, FairnessFlag, GovernanceBasis, RegistryEntry, Zone)
from .orchestration import (AttributionReport, CascadeEvent, ConsolidatedAssessment, Coupling,
                            Denial, EmergentImpactFlag, IncidentRecord, KnownCouplingRisk,
                            OversightSession, ResolutionAction, TopologyUpdateDirective)
from .runtime import (AccessTier, AuditRecord, ChangeKind, ClearanceToken, CouplingClass,
                      Decision, Declaration, Dependency, DriftSignal, EnvelopeCheck, MetricBounds,
                      OperatingEnvelope, OperatingMode, PolicyDecision, ProposedAction,
                      PurgeReport, ReassessmentTask, ReviewTask, Severity)
from .scenario import Scenario, ScenarioAgent, ScenarioEvent, ScenarioStep, ScriptedStep
from .topology import Topology
from .trace import (ActivationLog, ActivationSummary, ActivationTrace, DecisionFact,
                    GovernanceEvent, ScheduledTask, TraceFacts)

__all__ = [
    'AuditTrail', 'Topology', 'ActivationLog',
    'Activation', 'AutonomyClassification', 'AutonomyEvidence', 'AutonomyLevel', 'DecisionScope',
    'DomainCriticality', 'GovernanceLevel', 'HumanInvolvement', 'LayerActivationMap', 'SystemProfile',
    'Catalog', 'ConflictRule', 'Finding', 'Framework', 'GovernanceMeasure', 'Layer', 'MeasureKind',
    'ObligationRef', 'Resolution', 'ValidationReport',
    'CaseStatus', 'ContestationCase', 'DisclosurePackage', 'DisclosureTier', 'EnforcementEvent',
    'FairnessFlag', 'GovernanceBasis', 'RegistryEntry', 'Zone',
    'AttributionReport', 'CascadeEvent', 'ConsolidatedAssessment', 'Coupling', 'Denial',
    'EmergentImpactFlag', 'IncidentRecord', 'KnownCouplingRisk', 'OversightSession',
    'ResolutionAction', 'TopologyUpdateDirective',
    'AccessTier', 'AuditRecord', 'ChangeKind', 'ClearanceToken', 'CouplingClass', 'Decision',
    'Declaration', 'Dependency', 'DriftSignal', 'EnvelopeCheck', 'MetricBounds', 'OperatingEnvelope',
    'OperatingMode', 'PolicyDecision', 'ProposedAction', 'PurgeReport', 'ReassessmentTask',
    'ReviewTask', 'Severity',
    'Scenario', 'ScenarioAgent', 'ScenarioEvent', 'ScenarioStep', 'ScriptedStep',
    'ActivationSummary', 'ActivationTrace', 'DecisionFact', 'GovernanceEvent', 'ScheduledTask',
    'TraceFacts',
]
