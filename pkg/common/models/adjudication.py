from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Ruling(str, Enum):
    MALICIOUS = "Malicious"
    CLEARED = "Cleared"
    STILL_SUSPECTED = "StillSuspected"

    def __repr__(self):
        return str(self.value)


class RejectReason(str, Enum):
    QUARANTINED = "Quarantined"
    SLOT_MISMATCH = "SlotMismatch"
    DUPLICATE = "Duplicate"
    CORRUPTED = "Corrupted"

    def __repr__(self):
        return str(self.value)


@dataclass(frozen=True)
class ValidationResult:
    accepted: bool
    reason: Optional[RejectReason] = None

    @classmethod
    def accept(cls) -> 'ValidationResult':
        return cls(accepted=True)

    @classmethod
    def reject(cls, reason: RejectReason) -> 'ValidationResult':
        return cls(accepted=False, reason=reason)


@dataclass(frozen=True)
class QuarantineEntry:
    """
    One isolated node.

    `monitor` is set when the node held the sector monitor role at isolation time and
    `scout` when it held the forwarding head role. `na` is an opaque annotation.
    """
    node_id: int
    member_id: Optional[int]
    na: str
    monitor: bool
    compromised: bool
    trust: float
    scout: bool
    malicious: bool
    since: int


@dataclass(frozen=True)
class ForwardingEntry:
    node_id: int
    member_id: Optional[int]
    na: str
    packet_id: int
    node_info: str
    next_hop: int
    timestamp: float


@dataclass(frozen=True)
class ValidEntry:
    node_id: int
    member_id: Optional[int]
    na: str
    reputation: float
    packet_id: int


@dataclass(kw_only=True)
class DetectionBudget:
    dp: float
    dp_min: float
    cost_per_evaluation: float
    initial_dp: Optional[float] = None

    def __post_init__(self):
        if self.initial_dp is None:
            self.initial_dp = self.dp

    @classmethod
    def none(cls) -> 'DetectionBudget':
        return cls(dp=0.0, dp_min=0.0, cost_per_evaluation=0.0)

    @property
    def active(self) -> bool:
        return self.dp > self.dp_min

    def drain(self) -> float:
        self.dp = max(0.0, self.dp - self.cost_per_evaluation)
        return self.dp

    def disable(self):
        self.dp = 0.0


@dataclass(frozen=True)
class DetectionCounters:
    truedetect: int = 0
    phantomdetect: int = 0

    @property
    def accuracy(self) -> float:
        total = self.truedetect + self.phantomdetect
        if total == 0:
            return 1.0
        return self.truedetect / total
