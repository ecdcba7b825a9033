#!/usr/bin/env python3
"""
Catalog Manager - Loads the control catalog, answers traceability queries and checks integrity
"""

import logging
from collections import Counter
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from src.errors import IntegrityError, UnknownMeasure, UnknownRule
from src.models.catalog import (Catalog, ConflictRule, Framework, GovernanceMeasure, Layer,
                                MeasureKind, ObligationRef, Resolution, ValidationReport)
from src.utils.config_loader import ConfigLoader, shipped_path

logger = logging.getLogger(__name__)

CATALOG_SIZE = 25
STUB_IDS = frozenset({"R-11", "R-15", "R-17", "R-18", "R-21", "R-22", "R-25"})
NOVEL_IDS = frozenset({"R-01", "R-02", "R-03", "R-04", "R-05"})

# Layer assignments named in the framework description; the rest of the
# Orchestration share is not published, so that layer is checked as a superset
KNOWN_LAYERS: Dict[str, Layer] = {
    **{mid: Layer.AGENT for mid in ("R-09", "R-10", "R-19", "R-20", "R-23")},
    **{mid: Layer.CITY for mid in ("R-04", "R-08", "R-13", "R-14", "R-16")},
    **{mid: Layer.ORCHESTRATION for mid in ("R-01", "R-02", "R-03", "R-05", "R-06", "R-07", "R-12", "R-24")},
}

RULE_MAP: Dict[str, Tuple[Tuple[str, ...], Layer, Resolution]] = {
    "T1": (("R-19",), Layer.AGENT, Resolution.TIERED_LOGGING),
    "T2": (("R-19", "R-07"), Layer.ORCHESTRATION, Resolution.GRADUATED_RETENTION),
    "T3": (("R-12",), Layer.ORCHESTRATION, Resolution.CONSOLIDATED_ASSESSMENT),
    "T4": (("R-05",), Layer.ORCHESTRATION, Resolution.STRICTEST_CLOCK_TRIAGE),
    "T5": (("R-14",), Layer.CITY, Resolution.TIERED_DISCLOSURE),
}


class CatalogManager:
    """Read-only view over one loaded catalog"""

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        self._forward: Dict[Tuple[str, str], Set[str]] = {}
        for measure in catalog.measures:
            for obligation in measure.obligations:
                self._forward.setdefault(obligation.key, set()).add(measure.id)

    @classmethod
    def from_file(cls, path: Union[str, Path, None] = None,
                  loader: Optional[ConfigLoader] = None) -> "CatalogManager":
        path = Path(path) if path else shipped_path("control_catalog.json")
        return cls(load_catalog(path.read_text(encoding='utf-8'), loader))

    def trace_forward(self, obligation: ObligationRef) -> Set[str]:
        return set(self._forward.get(obligation.key, set()))

    def trace_backward(self, measure_id: str) -> Set[ObligationRef]:
        return set(self.get_measure(measure_id).obligations)

    def get_measure(self, measure_id: str) -> GovernanceMeasure:
        measure = self.catalog.measure(measure_id)
        if measure is None:
            raise UnknownMeasure(measure_id)
        return measure

    def layer_of(self, measure_id: str) -> Layer:
        return self.get_measure(measure_id).layer

    def resolve_rule(self, tension_id: str) -> ConflictRule:
        rule = self.catalog.rule(tension_id)
        if rule is None:
            raise UnknownRule(tension_id)
        return rule

    def measures_for_rule(self, rule_id: str) -> List[GovernanceMeasure]:
        return [self.get_measure(mid) for mid in self.resolve_rule(rule_id).implementing_measures]

    def list_measures(self, layer: Optional[Layer] = None,
                      kind: Optional[MeasureKind] = None) -> List[GovernanceMeasure]:
        return [m for m in self.catalog.measures
                if (layer is None or m.layer is layer) and (kind is None or m.kind is kind)]

    def is_activatable(self, measure_id: str) -> bool:
        measure = self.catalog.measure(measure_id)
        return bool(measure and measure.activatable)

    def validate(self) -> ValidationReport:
        return validate_catalog(self.catalog)


def load_catalog(source: Union[str, bytes, dict], loader: Optional[ConfigLoader] = None) -> Catalog:
    """Parse catalog content; raises SchemaError or IntegrityError"""
    loader = loader or ConfigLoader()
    document = loader.parse(source, "control_catalog")

    measures = []
    for entry in document["measures"]:
        obligations = frozenset(
            ObligationRef(Framework(o["framework"]), o["locator"], o.get("note", ""))
            for o in entry["obligations"]
        )
        measures.append(GovernanceMeasure(
            id=entry["id"],
            name=entry["name"],
            layer=Layer(entry["layer"]),
            kind=MeasureKind(entry["kind"]),
            gap_addressed=entry["gap_addressed"],
            obligations=obligations,
            activatable=entry["activatable"],
            functions=tuple(entry.get("functions", ())),
            annotations=tuple(entry.get("annotations", ())),
        ))

    rules = [
        ConflictRule(
            id=entry["id"],
            tension=entry["tension"],
            implementing_measures=tuple(entry["implementing_measures"]),
            resolution=Resolution(entry["resolution"]),
            layer=Layer(entry["layer"]),
            frameworks=entry.get("frameworks", ""),
        )
        for entry in document["rules"]
    ]

    catalog = Catalog(tuple(measures), tuple(rules), dict(document.get("census", {})))
    report = validate_catalog(catalog)
    if not report.ok:
        details = "; ".join(f"{f.subject_id} [{f.rule}] {f.message}" for f in report.findings)
        raise IntegrityError(details)
    logger.info("Loaded catalog with %d measures and %d rules", len(measures), len(rules))
    return catalog


def validate_catalog(catalog: Catalog) -> ValidationReport:
    report = ValidationReport()

    counts = Counter(m.id for m in catalog.measures)
    for measure_id, count in sorted(counts.items()):
        if count > 1:
            report.add(measure_id, "unique-ids", f"appears {count} times")
    if len(catalog.measures) != CATALOG_SIZE:
        report.add("catalog", "entry-count", f"{len(catalog.measures)} entries, expected {CATALOG_SIZE}")

    for measure in catalog.measures:
        _check_measure(measure, report)

    activatable = sum(1 for m in catalog.measures if m.activatable)
    if len(catalog.measures) == CATALOG_SIZE and activatable != CATALOG_SIZE - len(STUB_IDS):
        report.add("catalog", "activatable-count", f"{activatable} activatable measures")

    _check_rules(catalog, report)
    _check_census(catalog, report)
    return report


def _check_measure(measure: GovernanceMeasure, report: ValidationReport):
    stub_facts = (
        measure.kind is MeasureKind.STUB,
        measure.id in STUB_IDS,
        not measure.activatable,
        measure.layer is Layer.UNASSIGNED,
    )
    if len(set(stub_facts)) != 1:
        report.add(measure.id, "stub-set", "kind, id, activatable and layer disagree on stub status")
    if measure.is_stub and measure.obligations:
        report.add(measure.id, "stub-obligations", "stub carries obligation references")
    if (measure.kind is MeasureKind.NOVEL) != (measure.id in NOVEL_IDS):
        report.add(measure.id, "novel-set", f"kind {measure.kind.value} does not match the novel range")
    if not measure.is_stub and not measure.obligations:
        report.add(measure.id, "obligations-present", "no obligation reference")
    expected = KNOWN_LAYERS.get(measure.id)
    if expected is not None and measure.layer is not expected:
        report.add(measure.id, "layer-census", f"layer {measure.layer.value}, expected {expected.value}")


def _check_rules(catalog: Catalog, report: ValidationReport):
    rule_ids = [r.id for r in catalog.rules]
    if sorted(rule_ids) != sorted(RULE_MAP):
        report.add("rules", "rule-count", f"rules {rule_ids}, expected {sorted(RULE_MAP)}")

    for rule in catalog.rules:
        expected = RULE_MAP.get(rule.id)
        if expected and (rule.implementing_measures, rule.layer, rule.resolution) != expected:
            measures, layer, resolution = expected
            report.add(rule.id, "rule-mapping",
                       f"expected {','.join(measures)} at {layer.value} via {resolution.value}")
        for measure_id in rule.implementing_measures:
            measure = catalog.measure(measure_id)
            if measure is None or not measure.activatable:
                report.add(rule.id, "rule-references", f"{measure_id} is missing or not activatable")


def _check_census(catalog: Catalog, report: ValidationReport):
    census = catalog.census
    for kind in (MeasureKind.INTEGRATION, MeasureKind.IMPLEMENTATION):
        claimed = census.get(kind.value)
        known = sum(1 for m in catalog.measures if m.kind is kind)
        if claimed is not None and known > claimed:
            report.add("catalog", "census-split", f"{known} {kind.value} measures exceed the claimed {claimed}")
    claimed_orchestration = census.get("orchestration_claimed")
    known_orchestration = sum(1 for m in catalog.measures if m.layer is Layer.ORCHESTRATION)
    if claimed_orchestration is not None and known_orchestration > claimed_orchestration:
        report.add("catalog", "census-split",
                   f"{known_orchestration} orchestration measures exceed the claimed {claimed_orchestration}")
