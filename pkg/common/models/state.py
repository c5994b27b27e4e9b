from dataclasses import dataclass, field
from typing import Optional

from common.models.adjudication import DetectionCounters
from common.models.node import NeighborMap
from common.models.scenario import ScenarioConfig
from common.models.simulation import LogEntry, PhaseState


@dataclass(kw_only=True)
class NetworkState:
    """Authoritative mutable state of one run. Owned by the event loop."""
    scenario: ScenarioConfig
    repositories: dict
    nodes: dict = field(default_factory=dict)
    neighbor_map: Optional[NeighborMap] = None
    clusters: dict = field(default_factory=dict)
    sectors: dict = field(default_factory=dict)
    schedules: dict = field(default_factory=dict)
    profiles: dict = field(default_factory=dict)
    buffers: dict = field(default_factory=dict)
    suspected: dict = field(default_factory=dict)
    counters: DetectionCounters = field(default_factory=DetectionCounters)
    attackers: dict = field(default_factory=dict)
    phase: PhaseState = field(default_factory=PhaseState)
    clock: float = 0.0
    epoch: int = 0
    packet_seq: int = 0
    data_packets: int = 0
    control_packets: int = 0
    generated: int = 0
    delivered: list = field(default_factory=list)
    rejected: int = 0
    quarantined_at: dict = field(default_factory=dict)
    sids_flags: int = 0
    sids_benign_flags: int = 0
    evaluations: int = 0
    benign_evaluations: int = 0
    log: list = field(default_factory=list)

    def repo(self, repo_type):
        return self.repositories[repo_type]

    def record(self, entry_type, subject, detail: str):
        self.log.append(LogEntry(time=self.clock, type=entry_type, subject=str(subject), detail=detail))

    def next_packet_id(self) -> int:
        self.packet_seq += 1
        return self.packet_seq

    def sector_of(self, node_id: int):
        sector_id = self.nodes[node_id].sector_id
        return None if sector_id is None else self.sectors.get(sector_id)
