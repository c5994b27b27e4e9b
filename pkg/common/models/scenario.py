from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from common.models.energy import DutyCycle, EnergyProfile
from common.models.node import RadioModel


class StrictModel(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class SimulationMode(str, Enum):
    SECTORIZED = "sectorized"
    NON_SECTORIZED = "non-sectorized"

    def __repr__(self):
        return str(self.value)


class IdsMode(str, Enum):
    FULL = "full"
    SIDS_ONLY = "sids_only"
    DISABLED = "disabled"

    def __repr__(self):
        return str(self.value)


class Placement(str, Enum):
    UNIFORM = "uniform"
    GRID = "grid"


class Archetype(str, Enum):
    FLOODER = "Flooder"
    UNSLOTTED_SENDER = "UnslottedSender"
    WAKE_INJECTOR = "WakeInjector"
    ENERGY_SPOOFER = "EnergySpoofer"

    def __repr__(self):
        return str(self.value)


class FieldConfig(StrictModel):
    # Geometry is checked semantically at deployment so that programmatic
    # configs and loaded files fail the same way.
    width: float = 100.0
    height: float = 100.0
    leader_count: int = Field(default=8, ge=0)
    follower_count: int = Field(default=60, ge=0)
    sink_position: tuple[float, float] = (50.0, 50.0)
    leader_energy: float = Field(default=200.0, gt=0)
    follower_energy: float = Field(default=25.0, gt=0)
    sink_energy: float = Field(default=1.0e6, gt=0)
    placement: Placement = Placement.UNIFORM

    @model_validator(mode='after')
    def _heterogeneous(self):
        if self.leader_energy <= self.follower_energy:
            raise ValueError("leader_energy must be greater than follower_energy")
        return self

    @property
    def node_count(self) -> int:
        return self.leader_count + self.follower_count + 1


class EnergyConfig(StrictModel):
    leader: EnergyProfile = EnergyProfile()
    follower: EnergyProfile = EnergyProfile()
    sink: EnergyProfile = EnergyProfile()
    standard_lifetime: float = Field(default=31_536_000.0, ge=0)
    # Authentic wake-up coin value. Stored for completeness, no procedure reads it.
    awc: float = Field(default=1.0, ge=0)
    crlt_window: int = Field(default=5, ge=1)

    @model_validator(mode='after')
    def _sleep_is_cheapest(self):
        for kind in ('leader', 'follower', 'sink'):
            if not getattr(self, kind).is_ordered:
                raise ValueError(f"{kind} profile must satisfy pw_sleep < pw_idle < pw_transmit")
        return self


class TrafficConfig(StrictModel):
    nominal_rate: int = Field(default=2, ge=1)
    per_leaf_rates: dict[int, int] = Field(default_factory=dict)
    payload_size: int = Field(default=32, ge=1)
    airtime: float = Field(default=0.01, ge=0)
    sensing_time: float = Field(default=0.01, ge=0)
    compute_time: float = Field(default=0.005, ge=0)
    control_airtime: float = Field(default=0.01, ge=0)
    aggregate_airtime: float = Field(default=0.01, ge=0)
    evaluation_time: float = Field(default=0.005, ge=0)
    adjudication_time: float = Field(default=0.005, ge=0)
    validation_time: float = Field(default=0.001, ge=0)

    @model_validator(mode='after')
    def _positive_rates(self):
        for leaf, rate in self.per_leaf_rates.items():
            if rate < 1:
                raise ValueError(f"per_leaf_rates[{leaf}] must be >= 1")
        return self

    def rate_of(self, leaf: int) -> int:
        return self.per_leaf_rates.get(leaf, self.nominal_rate)


class SlotConfig(StrictModel):
    frame_length: int = Field(default=128, ge=1)
    slots_per_leaf: int = Field(default=1, ge=1)
    slot_capacity: int = Field(default=4, ge=1)


class ThresholdConfig(StrictModel):
    tolerance: float = Field(default=0.2, ge=0)
    th_lifetime: float = Field(default=10.0, ge=0)
    th_wake: Optional[float] = Field(default=None, ge=0)
    th_sleep: Optional[float] = Field(default=None, ge=0)
    th_buffer: float = Field(default=100.0, gt=0, le=100)
    energy_jump_delta: float = Field(default=0.5, ge=0)
    t_scount: int = Field(default=3, ge=0)
    t_per: float = Field(default=50.0, ge=0)
    t_reput: float = Field(default=0.1, ge=0, le=1)


class ReputationConfig(StrictModel):
    initial: float = Field(default=1.0, ge=0, le=1)
    penalty: float = Field(default=0.2, ge=0, le=1)
    reward: float = Field(default=0.05, ge=0, le=1)

    @model_validator(mode='after')
    def _reward_below_penalty(self):
        # Alternating flag and clear must drift reputation downward.
        if self.reward >= self.penalty:
            raise ValueError(f"reward {self.reward} must be smaller than penalty {self.penalty}")
        return self


class BudgetConfig(StrictModel):
    initial_dp: float = Field(default=100.0, ge=0)
    dp_min: float = Field(default=10.0, ge=0)
    cost_per_evaluation: float = Field(default=1.0, ge=0)


class ReconfigurationConfig(StrictModel):
    sc_consumption_factor: float = Field(default=8.0, gt=0)


class AttackerSpec(StrictModel):
    node: Optional[int] = Field(default=None, ge=1)
    archetype: Archetype
    intensity: float = Field(default=1.0, gt=0)
    start_epoch: int = Field(default=1, ge=0)
    end_epoch: Optional[int] = Field(default=None, ge=1)
    victims: Optional[list[int]] = None

    @model_validator(mode='after')
    def _window(self):
        if self.end_epoch is not None and self.start_epoch >= self.end_epoch:
            raise ValueError("start_epoch must be before end_epoch")
        return self

    def active_at(self, epoch: int) -> bool:
        if epoch < self.start_epoch:
            return False
        return self.end_epoch is None or epoch < self.end_epoch

    @property
    def packets_per_burst(self) -> int:
        return max(1, int(round(self.intensity)))


class ScenarioConfig(StrictModel):
    seed: int = Field(ge=0)
    horizon: int = Field(default=200, ge=1)
    mode: SimulationMode = SimulationMode.SECTORIZED
    ids_mode: IdsMode = IdsMode.FULL
    field: FieldConfig = FieldConfig()
    energy: EnergyConfig = EnergyConfig()
    duty: DutyCycle = DutyCycle()
    traffic: TrafficConfig = TrafficConfig()
    radio: RadioModel = RadioModel()
    slots: SlotConfig = SlotConfig()
    thresholds: ThresholdConfig = ThresholdConfig()
    reputation: ReputationConfig = ReputationConfig()
    budget: BudgetConfig = BudgetConfig()
    reconfiguration: ReconfigurationConfig = ReconfigurationConfig()
    attackers: list[AttackerSpec] = Field(default_factory=list)

    @model_validator(mode='after')
    def _attackers_are_followers(self):
        first_follower = self.field.leader_count + 1
        last_follower = self.field.leader_count + self.field.follower_count
        seen = set()
        for index, spec in enumerate(self.attackers):
            if spec.node is not None:
                if not first_follower <= spec.node <= last_follower:
                    raise ValueError(
                        f"attackers[{index}].node {spec.node} is not a follower id "
                        f"({first_follower}..{last_follower})"
                    )
                if spec.node in seen:
                    raise ValueError(f"attackers[{index}].node {spec.node} is already an attacker")
                seen.add(spec.node)
            if spec.archetype is Archetype.FLOODER:
                per_slot_nominal = self._busiest_rate(spec.node) / self.slots.slots_per_leaf
                if spec.packets_per_burst <= per_slot_nominal:
                    raise ValueError(
                        f"attackers[{index}].intensity must exceed the nominal per-slot rate {per_slot_nominal}"
                    )
            if spec.archetype is Archetype.ENERGY_SPOOFER:
                delta = self.thresholds.energy_jump_delta
                if abs(spec.intensity - 1.0) <= delta:
                    raise ValueError(
                        f"attackers[{index}].intensity must differ from 1 by more than energy_jump_delta {delta}"
                    )
        return self

    def _busiest_rate(self, node: Optional[int]) -> int:
        """Rate of a pinned leaf, otherwise the highest rate any leaf may carry."""
        if node is not None:
            return self.traffic.rate_of(node)
        return max([self.traffic.nominal_rate, *self.traffic.per_leaf_rates.values()])
