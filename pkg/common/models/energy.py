from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class EnergyMode(str, Enum):
    SLEEP = "sleep"
    TRANSMIT = "transmit"
    IDLE = "idle"
    WAKEUP = "wakeup"
    COMPUTE = "compute"
    SENSING = "sensing"

    def __repr__(self):
        return str(self.value)


class EnergyProfile(BaseModel):
    """Per-mode power ratings in watts."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    pw_sleep: float = Field(default=0.0001, ge=0)
    pw_transmit: float = Field(default=0.06, ge=0)
    pw_idle: float = Field(default=0.02, ge=0)
    pw_wakeup: float = Field(default=0.02, ge=0)
    pw_compute: float = Field(default=0.025, ge=0)
    pw_sensing: float = Field(default=0.025, ge=0)

    def power(self, mode: EnergyMode) -> float:
        return getattr(self, f'pw_{mode.value}')

    @property
    def is_ordered(self) -> bool:
        return self.pw_sleep < self.pw_idle < self.pw_transmit


class DutyCycle(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)

    epoch_length: float = Field(default=10.0, gt=0)
    wake_duration: float = Field(default=1.0, ge=0)
    sleep_duration: float = Field(default=8.9, ge=0)

    @model_validator(mode='after')
    def _fits_epoch(self):
        if self.wake_duration + self.sleep_duration > self.epoch_length:
            raise ValueError("wake_duration + sleep_duration must not exceed epoch_length")
        return self


def _empty_durations():
    return {mode: 0.0 for mode in EnergyMode}


@dataclass(frozen=True)
class EpochUsage:
    awake: float
    sleep: float
    induced: float = 0.0


@dataclass(kw_only=True)
class EnergyLedger:
    """
    Battery bookkeeping for one node.

    `consumed` is summed independently of `residual_energy` so conservation can be
    checked against it. `activity` collects non-sleep seconds since the last epoch
    settlement and is cleared by it.
    """
    initial_power: float
    residual_energy: float
    last_recorded_energy: Optional[float] = None
    mode_durations: dict = field(default_factory=_empty_durations)
    standard_lifetime: float = 0.0
    consumed: float = 0.0
    activity: float = 0.0
    forced_awake: bool = False
    last_usage: Optional[EpochUsage] = None
    consumption_history: list = field(default_factory=list)

    @classmethod
    def full(cls, capacity: float, standard_lifetime: float = 0.0) -> 'EnergyLedger':
        return cls(initial_power=capacity, residual_energy=capacity, standard_lifetime=standard_lifetime)

    @property
    def alive(self) -> bool:
        return self.residual_energy > 0
