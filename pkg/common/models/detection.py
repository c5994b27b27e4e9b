from dataclasses import dataclass, field
from typing import Optional

from common.helpers.exceptions import ConfigError

CASE_NUMBERS = (1, 2, 3, 4, 5)


@dataclass(frozen=True)
class DetectionThresholds:
    tnec: float
    th_lifetime: float
    th_wake: float
    th_sleep: float
    th_buffer: float
    energy_jump_delta: float
    t_scount: int
    t_per: float
    t_reput: float
    # Nominal packets per owned slot; None measures the window in slot capacity.
    slot_budget: Optional[float] = None

    def __post_init__(self):
        for name in ('tnec', 'th_lifetime', 'th_wake', 'th_sleep', 'energy_jump_delta', 't_scount', 't_per'):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if not 0 <= self.t_reput <= 1:
            raise ConfigError("t_reput must lie in [0, 1]")
        if not 0 < self.th_buffer <= 100:
            raise ConfigError("th_buffer must lie in (0, 100]")
        if self.slot_budget is not None and self.slot_budget <= 0:
            raise ConfigError("slot_budget must be > 0")


@dataclass(frozen=True)
class CaseEvidence:
    observed: float
    threshold: float
    detail: str = ''


@dataclass(frozen=True)
class InsomniaVerdict:
    node: int
    epoch: int
    case_flags: tuple
    evidence: dict = field(default_factory=dict)

    @property
    def insomnia(self) -> bool:
        return any(self.case_flags)

    @property
    def raised_cases(self) -> tuple:
        return tuple(number for number, flag in zip(CASE_NUMBERS, self.case_flags) if flag)

    def describe(self) -> str:
        if not self.insomnia:
            return "insomnia=0"
        parts = [f"case{n}:{self.evidence[n].detail}" for n in self.raised_cases]
        return "insomnia=1 " + " ".join(parts)


@dataclass(frozen=True)
class ReputationRecord:
    node: int
    reputation: float = 1.0
    suspected_count: int = 0
    observations: int = 0

    @property
    def suspected_percentage(self) -> float:
        if self.observations == 0:
            return 0.0
        return self.suspected_count / self.observations * 100


@dataclass(frozen=True)
class AcquisitionVector:
    leaf: int
    slot: tuple
    packets: tuple
    observed_wake: float
    observed_sleep: float
    reported_residual: float
    induced_wake: float = 0.0


@dataclass(frozen=True)
class LedgerView:
    """What a sector coordinator knows about one leaf's battery at an epoch boundary."""
    epoch: int
    residual_energy: float
    last_recorded_energy: float
    consumption: float
    observed_rate: float


@dataclass(frozen=True)
class NormalProfile:
    node: int
    rate: int
    nominal_awake: float
    nominal_sleep: float
    nec: float
    tnec: float
    mode_durations: Optional[dict] = None
