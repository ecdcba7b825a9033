#!/usr/bin/env python3
"""
Trace Reports - Activation summary, TSV/text rendering and TSV parsing
"""

import logging
from typing import Iterable, List, Optional, Union

from src.errors import UnknownFormat
from src.managers.catalog_manager import CatalogManager
from src.models.catalog import Layer
from src.models.trace import ActivationSummary, ActivationTrace, GovernanceEvent
from src.ui.layout_manager import LayoutManager

logger = logging.getLogger(__name__)

COLUMNS = ("time_min", "event", "agents", "measures", "layer", "rules")
FORMATS = ("tsv", "text")
EMPTY = "-"

FOOTER = ("Times are fixture estimates on a simulated minute clock, not measurements; "
          "the results are structural, not quantitative.")


def summarize(trace: ActivationTrace, catalog: Optional[CatalogManager] = None) -> ActivationSummary:
    """Summary computed from the trace rows and facts alone"""
    if not trace.rows and not trace.facts.decisions:
        return ActivationSummary()
    catalog = catalog or CatalogManager.from_file()
    facts = trace.facts

    measure_ids = sorted({m for row in trace.rows for m in row.measures})
    rules = sorted({r for row in trace.rows for r in row.rules})
    layers = sorted({catalog.layer_of(m) for m in measure_ids}, key=lambda layer: layer.rank)

    if facts.cascade_opened_at is not None:
        detection = facts.cascade_opened_at - facts.t0
    elif facts.first_detection_at is not None:
        detection = facts.first_detection_at - facts.t0
    else:
        detection = 0

    chain_complete = bool(facts.decisions) and all(
        d.case_id is not None and d.case_agents == d.attribution_agents for d in facts.decisions)

    return ActivationSummary(
        measures_activated=len(measure_ids),
        measure_ids=tuple(measure_ids),
        detection_time=detection,
        coordination_points=len(facts.coordination_points),
        coordination_ids=tuple(facts.coordination_points),
        rules_invoked=tuple(rules),
        layers_activated=tuple(layer.code for layer in layers if layer is not Layer.UNASSIGNED),
        chain_complete=chain_complete,
        systemic_learning=bool(facts.directives),
    )


def _cells(row: GovernanceEvent) -> List[str]:
    return [
        str(row.time),
        row.event,
        ",".join(row.agents) or EMPTY,
        ",".join(sorted(row.measures)) or EMPTY,
        row.layer or EMPTY,
        ",".join(sorted(row.rules)) or EMPTY,
    ]


def ordered_rows(rows: Iterable[GovernanceEvent]) -> List[GovernanceEvent]:
    return sorted(rows, key=lambda r: (r.time, r.event))


def emit_trace(trace: Union[ActivationTrace, List[GovernanceEvent]], fmt: str = "tsv") -> bytes:
    """Render the trace as TSV (golden-file format) or as a text table with a caveat footer"""
    if fmt not in FORMATS:
        raise UnknownFormat(fmt)
    rows = ordered_rows(trace.rows if isinstance(trace, ActivationTrace) else trace)
    if fmt == "tsv":
        lines = ["\t".join(COLUMNS)] + ["\t".join(_cells(row)) for row in rows]
        text = "".join(line + "\n" for line in lines)
    else:
        text = LayoutManager().render_table(COLUMNS, [_cells(row) for row in rows]) + "\n" + FOOTER + "\n"
    return text.encode("utf-8")


def emit_summary(summary: ActivationSummary) -> bytes:
    pairs = [
        ("measures_activated", f"{summary.coverage}: {', '.join(summary.measure_ids) or EMPTY}"),
        ("detection_time_min", summary.detection_time),
        ("coordination_points", f"{summary.coordination_points}: {', '.join(summary.coordination_ids) or EMPTY}"),
        ("rules_invoked", f"{len(summary.rules_invoked)} of 5: {', '.join(summary.rules_invoked) or EMPTY}"),
        ("layers_activated", ", ".join(summary.layers_activated) or EMPTY),
        ("chain_complete", str(summary.chain_complete).lower()),
        ("systemic_learning", str(summary.systemic_learning).lower()),
    ]
    return (LayoutManager().render_pairs(pairs) + "\n" + FOOTER + "\n").encode("utf-8")


def _split(cell: str):
    return () if cell == EMPTY else tuple(cell.split(","))


def parse_trace_tsv(data: Union[str, bytes]) -> List[GovernanceEvent]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or tuple(lines[0].split("\t")) != COLUMNS:
        raise ValueError("not an activation trace: header missing")
    rows = []
    for number, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(COLUMNS):
            raise ValueError(f"line {number}: expected {len(COLUMNS)} columns, got {len(cells)}")
        time, event, agents, measures, layer, rules = cells
        rows.append(GovernanceEvent(int(time), event, _split(agents), _split(measures),
                                    layer, _split(rules)))
    return rows


def query_rows(rows: Iterable[GovernanceEvent], measure: Optional[str] = None,
               layer: Optional[str] = None, rule: Optional[str] = None,
               agent: Optional[str] = None) -> List[GovernanceEvent]:
    """Filter trace rows; ``layer`` matches A→O rows for both A and O"""
    def layer_matches(row):
        return layer is None or row.layer == layer or (row.layer == "A→O" and layer in ("A", "O"))

    return [
        row for row in rows
        if (measure is None or measure in row.measures)
        and layer_matches(row)
        and (rule is None or rule in row.rules)
        and (agent is None or agent in row.agents)
    ]
