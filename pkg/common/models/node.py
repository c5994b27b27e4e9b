import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from common.models.adjudication import DetectionBudget
from common.models.energy import EnergyLedger
from common.models.hierarchy import Role, RoleType


class NodeKind(str, Enum):
    LEADER = "Leader"
    FOLLOWER = "Follower"
    SINK = "Sink"

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: 'Position') -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class NodeId:
    value: int
    position_tag: Position

    def __int__(self):
        return self.value


class RadioModel(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    comm_range: float = Field(default=30.0, gt=0)
    signal_exponent: float = Field(default=2.0, ge=1)
    reference_strength: float = Field(default=1.0, gt=0)


@dataclass(kw_only=True)
class Node:
    node_id: NodeId
    kind: NodeKind
    ledger: EnergyLedger
    budget: DetectionBudget
    role: RoleType = RoleType.LEAF_NODE
    cluster_id: Optional[int] = None
    sector_id: Optional[int] = None
    reachable: bool = True
    unassigned: bool = False
    quarantined: bool = False

    @property
    def uid(self) -> int:
        return self.node_id.value

    @property
    def position(self) -> Position:
        return self.node_id.position_tag

    @property
    def alive(self) -> bool:
        return self.ledger.alive

    @property
    def is_leader(self) -> bool:
        return self.kind is NodeKind.LEADER

    @property
    def is_follower(self) -> bool:
        return self.kind is NodeKind.FOLLOWER

    @property
    def eligible(self) -> bool:
        """Alive, reachable and not isolated: the minimum for holding any role."""
        return self.alive and self.reachable and not self.quarantined

    def role_info(self) -> Role:
        return Role.of(self.role, self.budget.dp)


class NeighborMap:
    """Symmetric within-range relation plus BFS hop counts from the sink."""

    def __init__(self, graph: nx.Graph, sink: int):
        self.graph = graph
        self.sink = sink
        self._sink_hops = nx.single_source_shortest_path_length(graph, sink)
        self._hops_from = {sink: self._sink_hops}

    def neighbors(self, node: int) -> tuple:
        return tuple(sorted(self.graph.neighbors(node)))

    def are_neighbors(self, a: int, b: int) -> bool:
        return self.graph.has_edge(a, b)

    def is_reachable(self, node: int) -> bool:
        return node in self._sink_hops

    def hop_distance(self, node: int) -> Optional[int]:
        return self._sink_hops.get(node)

    def hops_between(self, source: int, target: int) -> Optional[int]:
        if source not in self._hops_from:
            self._hops_from[source] = nx.single_source_shortest_path_length(self.graph, source)
        return self._hops_from[source].get(target)

    @property
    def unreachable(self) -> list:
        return sorted(n for n in self.graph.nodes if n not in self._sink_hops)
