from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Any, Optional

from common.helpers.exceptions import ConfigError, PhaseError


class PacketKind(str, Enum):
    DATA = "data"
    WAKE = "wake"

    def __repr__(self):
        return str(self.value)


@dataclass(kw_only=True)
class Packet:
    packet_id: Optional[int]
    origin: Optional[int]
    payload_size: int
    created_at: Optional[float]
    slot: int
    hops: list = field(default_factory=list)
    kind: PacketKind = PacketKind.DATA

    @property
    def malformed(self) -> bool:
        return self.packet_id is None or self.origin is None or self.created_at is None

    def hop(self, node: int):
        if not self.hops or self.hops[-1] != node:
            self.hops.append(node)


@dataclass(kw_only=True)
class SlotSchedule:
    """TDMA frame of one sector. Slot indices run 0..frame_length-1 within an epoch."""
    frame_length: int
    slot_capacity: int
    epoch_length: float
    assignments: dict = field(default_factory=dict)

    @classmethod
    def build(cls, leaves, *, slots_per_leaf: int, frame_length: int, slot_capacity: int,
              epoch_length: float, strict: bool = True):
        """
        Consecutive slots per leaf in the order given. Returns the schedule and the
        leaves that did not fit; with `strict` an overflow raises ConfigError instead.
        """
        leaves = list(leaves)
        fitting = frame_length // slots_per_leaf
        if strict and len(leaves) > fitting:
            raise ConfigError(
                f"unschedulable sector: {len(leaves)} leaves need {len(leaves) * slots_per_leaf} slots, "
                f"frame has {frame_length}"
            )
        schedule = cls(frame_length=frame_length, slot_capacity=slot_capacity, epoch_length=epoch_length)
        for index, leaf in enumerate(leaves[:fitting]):
            first = index * slots_per_leaf
            schedule.assignments[leaf] = tuple(range(first, first + slots_per_leaf))
        return schedule, leaves[fitting:]

    @property
    def slot_duration(self) -> float:
        return self.epoch_length / self.frame_length

    @property
    def leaves(self) -> list:
        return sorted(self.assignments)

    def slots_of(self, leaf: int) -> tuple:
        return self.assignments.get(leaf, ())

    def owns(self, leaf: int, slot: int) -> bool:
        return slot in self.slots_of(leaf)

    def window_units(self, leaf: int, slot_budget: Optional[float] = None) -> float:
        """Packets the leaf may send per epoch: owned slots times the per-slot budget."""
        per_slot = self.slot_capacity if slot_budget is None else slot_budget
        return len(self.slots_of(leaf)) * per_slot

    def slot_at(self, timestamp: float) -> int:
        offset = timestamp % self.epoch_length
        return min(int(offset // self.slot_duration), self.frame_length - 1)

    def slot_start(self, epoch: int, slot: int) -> float:
        return epoch * self.epoch_length + slot * self.slot_duration

    def remove(self, leaf: int):
        self.assignments.pop(leaf, None)


class Phase(str, Enum):
    INITIALIZATION = "Initialization"
    CLUSTER_FORMATION = "ClusterFormation"
    SECTOR_FORMATION = "SectorFormation"
    IDS_ACTIVATION = "IdsActivation"
    RECONFIGURATION = "Reconfiguration"
    DATA_TRANSFER = "DataTransfer"

    def __repr__(self):
        return str(self.value)


LEGAL_TRANSITIONS = {
    Phase.INITIALIZATION: (Phase.CLUSTER_FORMATION,),
    Phase.CLUSTER_FORMATION: (Phase.SECTOR_FORMATION,),
    Phase.SECTOR_FORMATION: (Phase.IDS_ACTIVATION,),
    Phase.IDS_ACTIVATION: (Phase.DATA_TRANSFER,),
    Phase.DATA_TRANSFER: (Phase.RECONFIGURATION,),
    Phase.RECONFIGURATION: (Phase.DATA_TRANSFER,),
}


@dataclass
class PhaseState:
    phase: Phase = Phase.INITIALIZATION
    ids_active: bool = False

    def advance(self, target: Phase) -> Phase:
        if target not in LEGAL_TRANSITIONS[self.phase]:
            raise PhaseError(f"illegal phase transition {self.phase.value} -> {target.value}")
        if self.phase is Phase.IDS_ACTIVATION:
            self.ids_active = True
        self.phase = target
        return target

    @property
    def data_allowed(self) -> bool:
        return self.ids_active and self.phase in (Phase.DATA_TRANSFER, Phase.RECONFIGURATION)


@dataclass(frozen=True)
class MetricsFrame:
    time: float
    alive_count: int
    total_energy_consumed: float
    truedetect: int
    phantomdetect: int
    accuracy: float
    data_packets: int
    control_packets: int
    overhead_ratio: float
    quarantined_count: int


class EventType(IntEnum):
    EPOCH_START = 1
    TRANSMIT = 2
    EPOCH_END = 3


@dataclass(order=True)
class SimEvent:
    time: float
    seq: int
    kind: EventType = field(compare=False)
    subject: Optional[int] = field(default=None, compare=False)
    payload: dict = field(default_factory=dict, compare=False)


class LogType(str, Enum):
    PHASE = "PHASE"
    ELECTION = "ELECTION"
    VERDICT = "VERDICT"
    RULING = "RULING"
    QUARANTINE = "QUARANTINE"
    REJECT = "REJECT"
    RECONFIGURE = "RECONFIGURE"
    DEGRADED = "DEGRADED"
    DEATH = "DEATH"
    ATTACK = "ATTACK"

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class LogEntry:
    time: float
    type: LogType
    subject: str
    detail: str


@dataclass
class RunResult:
    events: list
    metrics: list
    state: Any
    summary: dict
