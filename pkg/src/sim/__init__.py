"""Deterministic scenario simulation: clock, scenario loading, engine and trace reports"""

from .clock import EventScheduler, SimulationClock
from .engine import SimulationEngine
from .scenario_loader import load_scenario
from .trace import emit_summary, emit_trace, parse_trace_tsv, query_rows, summarize

__all__ = ['EventScheduler', 'SimulationClock', 'SimulationEngine', 'load_scenario',
           'emit_summary', 'emit_trace', 'parse_trace_tsv', 'query_rows', 'summarize']
