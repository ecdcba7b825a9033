#!/usr/bin/env python3
"""
Interaction Topology - Versioned coupling graph between agent systems
"""

from typing import Dict, Iterable, List, Optional, Tuple

import networkx as nx

from .orchestration import Coupling, KnownCouplingRisk
from .runtime import CouplingClass, Declaration


class Topology:
    """Immutable snapshot of the declared coupling graph at one version

    Nodes are ``("agent", id)`` and ``("resource", id)``. Providers point at the
    resources they supply and resources point at their dependents, so a directed
    path follows the direction in which a disturbance propagates.
    """

    def __init__(self, version: int, declarations: Dict[str, Declaration],
                 authorities: Dict[str, str], known_risks: Tuple[KnownCouplingRisk, ...] = ()):
        self.version = version
        self.declarations = dict(declarations)
        self.authorities = dict(authorities)
        self.known_risks = tuple(known_risks)
        self.providers: Dict[str, str] = {}
        self.couplings: List[Coupling] = []
        self.graph = nx.DiGraph()
        self._build()

    def _build(self):
        for agent_id in sorted(self.declarations):
            self.graph.add_node(("agent", agent_id))
            for resource in sorted(self.declarations[agent_id].provides):
                self.providers[resource] = agent_id
                self.graph.add_edge(("agent", agent_id), ("resource", resource))

        for agent_id in sorted(self.declarations):
            declaration = self.declarations[agent_id]
            for dependency in sorted(declaration.dependencies, key=lambda d: d.resource_id):
                coupling = Coupling(
                    from_system=agent_id,
                    to_resource=dependency.resource_id,
                    coupling_class=dependency.coupling_class,
                    declared_by=self.authorities.get(agent_id, ""),
                    topology_version=self.version,
                    provider=self.providers.get(dependency.resource_id, ""),
                )
                self.couplings.append(coupling)
                self.graph.add_edge(("resource", dependency.resource_id), ("agent", agent_id),
                                    coupling_class=dependency.coupling_class)

    @property
    def agents(self) -> List[str]:
        return sorted(self.declarations)

    def is_empty(self) -> bool:
        return not self.declarations

    def provider_of(self, resource_id: str) -> Optional[str]:
        return self.providers.get(resource_id)

    def dependents_of(self, resource_id: str,
                      coupling_class: Optional[CouplingClass] = None) -> List[Coupling]:
        return [c for c in self.couplings
                if c.to_resource == resource_id
                and (coupling_class is None or c.coupling_class is coupling_class)]

    def safety_couplings(self, resources: Iterable[str]) -> List[Coupling]:
        wanted = set(resources)
        return [c for c in self.couplings
                if c.to_resource in wanted and c.coupling_class is CouplingClass.SAFETY_COUPLED]

    def connected(self, agent_a: str, agent_b: str) -> bool:
        """True when a declared coupling path joins the two agents in either direction"""
        a, b = ("agent", agent_a), ("agent", agent_b)
        if a not in self.graph or b not in self.graph:
            return False
        if a == b:
            return True
        return nx.has_path(self.graph.to_undirected(as_view=True), a, b)

    def edges(self) -> List[Tuple[str, str, CouplingClass]]:
        """Provider-to-dependent edges, for display and diffing"""
        return sorted((c.provider, c.from_system, c.coupling_class) for c in self.couplings)

    def matching_risk(self, agents: Iterable[str], factors: Iterable[str]) -> Optional[KnownCouplingRisk]:
        agents, factors = list(agents), list(factors)
        for risk in self.known_risks:
            if risk.matches(agents, factors):
                return risk
        return None

    def with_known_risk(self, risk: KnownCouplingRisk) -> "Topology":
        return Topology(self.version + 1, self.declarations, self.authorities,
                        self.known_risks + (risk,))

    def __repr__(self) -> str:
        return f"Topology(version={self.version}, agents={self.agents}, couplings={len(self.couplings)})"
