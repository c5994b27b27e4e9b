from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class RoleType(str, Enum):
    LEAF_NODE = "LeafNode"
    SECTOR_COORDINATOR = "SectorCoordinator"
    SECTOR_MONITOR = "SectorMonitor"
    FORWARDING_SECTOR_HEAD = "ForwardingSectorHead"
    CLUSTER_COORDINATOR = "ClusterCoordinator"
    SINK_NODE = "SinkNode"

    def __repr__(self):
        return str(self.value)

    @property
    def priority(self) -> int:
        return ROLE_PRIORITIES[self]

    @property
    def detects(self) -> bool:
        return self not in (RoleType.LEAF_NODE, RoleType.FORWARDING_SECTOR_HEAD)


# 5 is the lowest priority, 1 the highest.
ROLE_PRIORITIES = {
    RoleType.LEAF_NODE: 5,
    RoleType.SECTOR_COORDINATOR: 4,
    RoleType.SECTOR_MONITOR: 3,
    RoleType.FORWARDING_SECTOR_HEAD: 3,
    RoleType.CLUSTER_COORDINATOR: 2,
    RoleType.SINK_NODE: 1,
}


@dataclass(frozen=True)
class Role:
    role: RoleType
    priority: int
    detection_power: float

    @classmethod
    def of(cls, role: RoleType, budget_dp: float) -> 'Role':
        detection_power = budget_dp if role.detects else 0.0
        return cls(role=role, priority=role.priority, detection_power=detection_power)


class ReconfigTrigger(str, Enum):
    COORDINATOR_DEVIATES = "CoordinatorDeviates"
    NODE_SUSPECTED_HIGH_CONSUMPTION = "NodeSuspectedHighConsumption"
    DETECTION_POWER_EXHAUSTED = "DetectionPowerExhausted"
    COORDINATOR_DEAD = "CoordinatorDead"

    def __repr__(self):
        return str(self.value)


class ScopeKind(str, Enum):
    CLUSTER = "cluster"
    SECTOR = "sector"


@dataclass(frozen=True)
class Scope:
    kind: ScopeKind
    identifier: int

    @classmethod
    def cluster(cls, cluster_id: int) -> 'Scope':
        return cls(ScopeKind.CLUSTER, cluster_id)

    @classmethod
    def sector(cls, sector_id: int) -> 'Scope':
        return cls(ScopeKind.SECTOR, sector_id)

    def __str__(self):
        return f"{self.kind.value}:{self.identifier}"


@dataclass(frozen=True)
class ClusterSnapshot:
    cluster_id: int
    holder: int
    coordinator: int
    members: tuple
    sectors: tuple
    epoch: int


@dataclass(kw_only=True)
class Cluster:
    id: int
    coordinator: int
    members: set = field(default_factory=set)
    sector_ids: list = field(default_factory=list)
    backup: Optional[ClusterSnapshot] = None
    degraded: bool = False


@dataclass(kw_only=True)
class Sector:
    id: int
    cluster_id: int
    coordinator: int
    monitor: Optional[int] = None
    forwarding_head: Optional[int] = None
    members: set = field(default_factory=set)
    monitor_fallback: bool = False
    # Non-sectorized mode: the cluster coordinator holds every sector role.
    pseudo: bool = False
    degraded: bool = False
