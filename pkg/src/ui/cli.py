#!/usr/bin/env python3
"""
CLI - Command-line surface of the governance control plane
Exit codes: 0 success, 1 governance error, 2 schema or reference error
"""

import argparse
import logging
import sys
from typing import List, Optional, Sequence

from src.errors import DanglingReference, GovernanceError, SchemaError, UnknownMeasure, UnknownRecord
from src.main import GovernanceControlPlane, configure_logging
from src.managers.mode_manager import BASELINE, WITH_FRAMEWORK
from src.managers.orchestration_manager import strictest_clock
from src.models.calibration import (AutonomyEvidence, DecisionScope, DomainCriticality,
                                    HumanInvolvement, SystemProfile)
from src.models.catalog import Framework, Layer, MeasureKind, ObligationRef
from src.sim.trace import emit_summary, emit_trace, parse_trace_tsv, query_rows, summarize
from src.ui.layout_manager import LayoutManager
from src.utils.file_operations import FileOperations

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_SCHEMA = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="govctl", description="Governance control plane for smart-city AI agents")
    parser.add_argument("--config", help="engine config file (default: config/engine_config.json)")
    parser.add_argument("--catalog", help="control catalog file (default: config/control_catalog.json)")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    parser.add_argument("--log-file", help='log file path, or "auto" for logs/govctl_<timestamp>.log')
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and print its activation trace")
    run.add_argument("--scenario", required=True, help="scenario file or shipped fixture name")
    run.add_argument("--baseline", action="store_true", help="run with governance disabled")
    run.add_argument("--trace-out", help="write the TSV trace to this path")
    run.add_argument("--format", default="text", choices=("text", "tsv"))
    run.add_argument("--summary", action="store_true", help="also print the activation summary")

    validate = sub.add_parser("validate", help="validate the catalog and optional scenario files")
    validate.add_argument("--scenario", action="append", default=[])

    query = sub.add_parser("trace-query", help="catalog traceability between measures and obligations")
    direction = query.add_mutually_exclusive_group(required=True)
    direction.add_argument("--measure", help="measure id; prints the obligations it implements")
    direction.add_argument("--obligation", metavar="FRAMEWORK:LOCATOR",
                           help="obligation reference; prints the measures that implement it")

    row_filter = sub.add_parser("trace-filter", help="filter rows of a TSV activation trace")
    row_filter.add_argument("--trace", required=True)
    row_filter.add_argument("--measure")
    row_filter.add_argument("--layer", choices=("A", "O", "C"))
    row_filter.add_argument("--rule")
    row_filter.add_argument("--agent")

    catalog = sub.add_parser("catalog", help="catalog queries")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)
    listing = catalog_sub.add_parser("list")
    listing.add_argument("--layer", choices=("A", "O", "C", "-"))
    listing.add_argument("--kind", choices=[k.value for k in MeasureKind])

    classify = sub.add_parser("classify", help="classify autonomy and governance level")
    classify.add_argument("--system", help="registry system id")
    classify.add_argument("--scope", choices=[s.value for s in DecisionScope])
    classify.add_argument("--involvement", choices=[h.value for h in HumanInvolvement])
    classify.add_argument("--criticality", choices=[c.value for c in DomainCriticality],
                          default=DomainCriticality.PUBLIC_SPACE.value)
    classify.add_argument("--endangers", action="store_true", help="endangers essential services")
    classify.add_argument("--cross-org", action="store_true", help="has cross-organisational dependencies")
    classify.add_argument("--multi-agent", action="store_true", help="multi-agent ecosystem")

    deadlines = sub.add_parser("deadlines", help="strictest-clock incident deadlines")
    deadlines.add_argument("--regime", action="append", default=[], metavar="NAME=MINUTES")
    deadlines.add_argument("--t0", type=int, default=0)
    deadlines.add_argument("--scenario", help="report the incident opened by this scenario instead")

    registry = sub.add_parser("registry", help="city-wide AI registry")
    registry_sub = registry.add_subparsers(dest="registry_command", required=True)
    reg_list = registry_sub.add_parser("list")
    reg_list.add_argument("--basis", choices=("Binding", "Voluntary"))
    reg_list.add_argument("--authority")
    reg_list.add_argument("--domain")
    reg_list.add_argument("--level", choices=("G1", "G2", "G3", "G4", "G5"))

    disclose = sub.add_parser("disclose", help="tiered disclosure package of a registered system")
    disclose.add_argument("--system", required=True)
    disclose.add_argument("--tier", required=True, choices=("Public", "Regulator"))

    contest = sub.add_parser("contest", help="open a contestation case on a decision of a scenario run")
    contest.add_argument("--scenario", required=True)
    contest.add_argument("--decision", help="decision record id (default: the run's first resident-facing decision)")

    explain = sub.add_parser("explain", help="render the explanation of a contestation case")
    explain.add_argument("--scenario", required=True)
    explain.add_argument("--case", default="CC-001")
    explain.add_argument("--lang", default="en")
    return parser


def _print(text):
    sys.stdout.write(text.decode("utf-8") if isinstance(text, bytes) else text)


# Commands

def cmd_run(plane: GovernanceControlPlane, args) -> int:
    trace = plane.run(args.scenario, BASELINE if args.baseline else WITH_FRAMEWORK)
    if args.trace_out:
        ok, result = FileOperations.write_report(args.trace_out, emit_trace(trace, "tsv"))
        if not ok:
            raise GovernanceError(f"could not write trace: {result}")
        logger.info("Trace written to %s", result)
    _print(emit_trace(trace, args.format))
    if args.summary:
        _print("\n")
        _print(emit_summary(summarize(trace, plane.catalog)))
    return EXIT_OK


def cmd_validate(plane: GovernanceControlPlane, args) -> int:
    report = plane.catalog.validate()
    for finding in report.findings:
        _print(f"{finding.subject_id}\t{finding.rule}\t{finding.message}\n")
    for source in args.scenario:
        scenario = plane.load_scenario(source)
        _print(f"{scenario.name}: {len(scenario.agents)} agents, {len(scenario.events)} events\n")
    _print("catalog ok\n" if report.ok else f"{len(report.findings)} findings\n")
    return EXIT_OK if report.ok else EXIT_ERROR


def _parse_obligation(value: str) -> ObligationRef:
    framework, sep, locator = value.partition(":")
    if not sep or not locator.strip():
        raise SchemaError(f"obligation must be FRAMEWORK:LOCATOR, got {value!r}")
    try:
        return ObligationRef(Framework(framework), locator)
    except ValueError:
        raise SchemaError(f"unknown framework {framework!r}, expected one of "
                          f"{', '.join(f.value for f in Framework)}") from None


def cmd_trace_query(plane: GovernanceControlPlane, args) -> int:
    if args.obligation:
        measures = sorted(plane.catalog.trace_forward(_parse_obligation(args.obligation)))
        _print("".join(f"{m}\n" for m in measures))
        return EXIT_OK
    try:
        refs = plane.catalog.trace_backward(args.measure)
    except UnknownMeasure as e:
        raise DanglingReference(f"unknown measure {e}") from None
    _print("".join(f"{o}\n" for o in sorted(refs, key=lambda o: o.key)))
    return EXIT_OK


def cmd_trace_filter(plane: GovernanceControlPlane, args) -> int:
    ok, text = FileOperations.read_report(args.trace)
    if not ok:
        raise GovernanceError(f"could not read trace: {text}")
    try:
        rows = parse_trace_tsv(text)
    except ValueError as e:
        raise SchemaError(str(e)) from e
    _print(emit_trace(query_rows(rows, args.measure, args.layer, args.rule, args.agent), "tsv"))
    return EXIT_OK


def cmd_catalog(plane: GovernanceControlPlane, args) -> int:
    layer = Layer.from_code(args.layer) if args.layer and args.layer != "-" else (
        Layer.UNASSIGNED if args.layer == "-" else None)
    kind = MeasureKind(args.kind) if args.kind else None
    rows = [(m.id, m.layer.code, m.kind.value, m.name) for m in plane.catalog.list_measures(layer, kind)]
    _print(LayoutManager().render_table(("id", "layer", "kind", "name"), rows))
    return EXIT_OK


def cmd_classify(plane: GovernanceControlPlane, args) -> int:
    if args.system:
        profile = plane.city.get_entry(args.system).profile
    else:
        if not (args.scope and args.involvement):
            raise GovernanceError("classify needs --system or both --scope and --involvement")
        evidence = AutonomyEvidence(DecisionScope(args.scope), HumanInvolvement(args.involvement),
                                    DomainCriticality(args.criticality))
        profile = SystemProfile("cli", "-", "-", evidence, args.endangers, args.cross_org, args.multi_agent)
    _print(LayoutManager().render_pairs(plane.calibration.describe(profile).items()))
    return EXIT_OK


def _parse_regimes(values: List[str]):
    regimes = {}
    for value in values:
        name, _, minutes = value.partition("=")
        if not name or not minutes.isdigit():
            raise SchemaError(f"regime must look like NAME=MINUTES, got {value!r}")
        regimes[name] = int(minutes)
    return regimes


def cmd_deadlines(plane: GovernanceControlPlane, args) -> int:
    if args.scenario:
        plane.run(args.scenario)
        orchestration = plane.last_run.orchestration
        if orchestration.current_incident is None:
            raise GovernanceError("the scenario opened no incident")
        _print(orchestration.export_incident(orchestration.current_incident))
        return EXIT_OK
    regimes = _parse_regimes(args.regime)
    baseline = strictest_clock(regimes)
    rows = [(name, window, args.t0 + window) for name, window in sorted(regimes.items())]
    _print(LayoutManager().render_table(("regime", "window", "deadline"), rows))
    _print(f"\nbaseline\t{baseline}\ndue_at\t{args.t0 + baseline}\n")
    return EXIT_OK


def cmd_registry(plane: GovernanceControlPlane, args) -> int:
    entries = plane.city.list_systems(args.authority, args.domain, args.level, args.basis)
    rows = [(e.system_id, e.profile.authority, e.profile.domain, e.declared_autonomy,
             e.governance_level.value, e.governance_basis.value, e.key_metric) for e in entries]
    _print(LayoutManager().render_table(
        ("system", "authority", "domain", "autonomy", "level", "governance", "key_metric"), rows))
    return EXIT_OK


def cmd_disclose(plane: GovernanceControlPlane, args) -> int:
    package = plane.city.publish_disclosure(args.system, args.tier)
    _print(LayoutManager().render_pairs(sorted(package.fields.items())))
    return EXIT_OK


def _case_for(plane: GovernanceControlPlane, args):
    plane.run(args.scenario)
    run = plane.last_run
    decision = getattr(args, "decision", None)
    if decision is None:
        if not run.trace.facts.decisions:
            raise UnknownRecord("the scenario made no resident-facing decision")
        decision = run.trace.facts.decisions[0].record_id
    for case in run.city.cases.values():
        if case.decision_record_id == decision:
            return run, case
    return run, run.city.open_contestation(decision)


def cmd_contest(plane: GovernanceControlPlane, args) -> int:
    _, case = _case_for(plane, args)
    _print(LayoutManager().render_pairs([
        ("case", case.case_id),
        ("decision_record", case.decision_record_id),
        ("status", case.status.value),
        ("agents", ", ".join(sorted(case.agents))),
        ("authorities", ", ".join(case.authorities)),
        ("review_path", case.review_path),
        ("remedy", case.remedy),
    ]))
    return EXIT_OK


def cmd_explain(plane: GovernanceControlPlane, args) -> int:
    plane.run(args.scenario)
    city = plane.last_run.city
    _print(city.render_explanation(city.get_case(args.case), args.lang))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "validate": cmd_validate,
    "trace-query": cmd_trace_query,
    "trace-filter": cmd_trace_filter,
    "catalog": cmd_catalog,
    "classify": cmd_classify,
    "deadlines": cmd_deadlines,
    "registry": cmd_registry,
    "disclose": cmd_disclose,
    "contest": cmd_contest,
    "explain": cmd_explain,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    configure_logging(level, args.log_file)
    try:
        plane = GovernanceControlPlane(args.config, args.catalog)
        return COMMANDS[args.command](plane, args)
    except (SchemaError, DanglingReference) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except GovernanceError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR
