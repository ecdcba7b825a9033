#!/usr/bin/env python3
"""
Audit Trail - Shared inter-agent record store with causal links
"""

from typing import Any, Dict, Iterable, Iterator, Optional, Set

import networkx as nx

from src.errors import DanglingCauseLink, UnknownRecord
from .runtime import AccessTier, AuditRecord


class AuditTrail:
    """Append-only trail; shared by every agent, records never change once written"""

    def __init__(self):
        self._records: Dict[str, AuditRecord] = {}
        self._causes = nx.DiGraph()
        self._seq = 0

    def append(self, agent_id: str, timestamp: int, event_kind: str, payload: Dict[str, Any],
               access_tier: AccessTier, retention_deadline: int,
               cause_links: Iterable[str] = (), pseudonymized: bool = False) -> AuditRecord:
        links = frozenset(cause_links)
        for cause_id in links:
            cause = self._records.get(cause_id)
            if cause is None:
                raise DanglingCauseLink(f"{cause_id} is not in the trail")
            if cause.timestamp > timestamp:
                raise DanglingCauseLink(f"{cause_id} is later than the record citing it")

        self._seq += 1
        record = AuditRecord(
            record_id=f"AR-{self._seq:06d}",
            seq=self._seq,
            agent_id=agent_id,
            timestamp=timestamp,
            event_kind=event_kind,
            payload=dict(payload),
            access_tier=access_tier,
            retention_deadline=retention_deadline,
            cause_links=links,
            pseudonymized=pseudonymized,
        )
        self._records[record.record_id] = record
        self._causes.add_node(record.record_id)
        for cause_id in links:
            self._causes.add_edge(cause_id, record.record_id)
        return record

    def get(self, record_id: str) -> AuditRecord:
        try:
            return self._records[record_id]
        except KeyError:
            raise UnknownRecord(record_id) from None

    def find(self, record_id: str) -> Optional[AuditRecord]:
        return self._records.get(record_id)

    def ancestors(self, record_id: str) -> Set[str]:
        if record_id not in self._records:
            raise UnknownRecord(record_id)
        return set(nx.ancestors(self._causes, record_id))

    def latest(self, agent_id: str, event_kind: Optional[str] = None) -> Optional[AuditRecord]:
        for record in reversed(list(self._records.values())):
            if record.agent_id == agent_id and (event_kind is None or record.event_kind == event_kind):
                return record
        return None

    def __contains__(self, record_id: str) -> bool:
        return record_id in self._records

    def __iter__(self) -> Iterator[AuditRecord]:
        return iter(self._records.values())

    def __len__(self) -> int:
        return len(self._records)
