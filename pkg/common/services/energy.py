import math

from common.app_logger import get_logger
from common.models import (
    DutyCycle,
    EnergyLedger,
    EnergyMode,
    EnergyProfile,
    EpochUsage,
    NodeKind,
    NormalProfile,
)

logger = get_logger(__name__)

INFINITE_LIFETIME = math.inf


def accrue(ledger: EnergyLedger, mode: EnergyMode, duration: float, profile: EnergyProfile) -> EnergyLedger:
    """Drain `duration` seconds of `mode`. Only the affordable part is booked once RE runs out."""
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    if not ledger.alive:
        logger.debug(f"DeadNode: ignored {mode.value} accrual of {duration}s")
        return ledger

    power = profile.power(mode)
    cost = power * duration
    if cost >= ledger.residual_energy:
        duration = ledger.residual_energy / power
        cost = ledger.residual_energy
        ledger.residual_energy = 0.0
    else:
        ledger.residual_energy -= cost

    ledger.mode_durations[mode] += duration
    ledger.consumed += cost
    return ledger


def nominal_mode_durations(duty: DutyCycle, rate: int, traffic) -> dict:
    """Seconds per mode in one attack-free epoch of a leaf sending `rate` packets."""
    transmit = rate * traffic.airtime
    sensing = rate * traffic.sensing_time
    compute = rate * traffic.compute_time
    active = transmit + sensing + compute
    sleep = min(duty.sleep_duration, max(0.0, duty.epoch_length - duty.wake_duration - active))
    idle = max(0.0, duty.epoch_length - duty.wake_duration - active - sleep)
    return {
        EnergyMode.SLEEP: sleep,
        EnergyMode.WAKEUP: duty.wake_duration,
        EnergyMode.IDLE: idle,
        EnergyMode.TRANSMIT: transmit,
        EnergyMode.SENSING: sensing,
        EnergyMode.COMPUTE: compute,
    }


def normal_energy_consumption(profile: EnergyProfile, duty: DutyCycle, traffic: int, timing) -> float:
    durations = nominal_mode_durations(duty, traffic, timing)
    return sum(profile.power(mode) * seconds for mode, seconds in durations.items())


def threshold_energy_consumption(nec: float, tolerance: float) -> float:
    return nec * (1 + tolerance)


def calculated_remaining_lifetime(ledger, observed_rate: float) -> float:
    if observed_rate <= 0:
        return INFINITE_LIFETIME
    return ledger.residual_energy / observed_rate


class EnergyService:

    def __init__(self, scenario):
        self.scenario = scenario
        self.duty = scenario.duty
        self.profiles = {
            NodeKind.LEADER: scenario.energy.leader,
            NodeKind.FOLLOWER: scenario.energy.follower,
            NodeKind.SINK: scenario.energy.sink,
        }

    def profile_for(self, node) -> EnergyProfile:
        return self.profiles[node.kind]

    def spend(self, node, mode: EnergyMode, duration: float) -> bool:
        """Book an activity. Returns True when this accrual killed the node."""
        if not node.alive:
            logger.debug(f"DeadNode {node.uid}: dropped {mode.value} activity")
            return False
        accrue(node.ledger, mode, duration, self.profile_for(node))
        if mode is not EnergyMode.SLEEP:
            node.ledger.activity += duration
        return not node.alive

    def settle(self, node) -> EpochUsage:
        """
        Close the epoch for one node: wake-up window, then sleep for what the duty cycle
        allows, then idle for the remainder. A node kept awake by inbound wake-up traffic
        sleeps 0 s and the lost sleep is booked as induced wake time.
        """
        ledger = node.ledger
        duty = self.duty
        profile = self.profile_for(node)
        activity = ledger.activity

        available_sleep = min(duty.sleep_duration, max(0.0, duty.epoch_length - duty.wake_duration - activity))
        if ledger.forced_awake:
            sleep, induced = 0.0, available_sleep
        else:
            sleep, induced = available_sleep, 0.0
        idle = max(0.0, duty.epoch_length - duty.wake_duration - activity - sleep)

        accrue(ledger, EnergyMode.WAKEUP, duty.wake_duration, profile)
        accrue(ledger, EnergyMode.SLEEP, sleep, profile)
        accrue(ledger, EnergyMode.IDLE, idle, profile)

        usage = EpochUsage(awake=duty.wake_duration + activity + idle, sleep=sleep, induced=induced)
        ledger.last_usage = usage
        ledger.activity = 0.0
        ledger.forced_awake = False
        return usage

    def record_epoch(self, node):
        """Snapshot LRE after detection and keep the per-epoch consumption for CRLT."""
        ledger = node.ledger
        if ledger.last_recorded_energy is not None:
            ledger.consumption_history.append(ledger.last_recorded_energy - ledger.residual_energy)
            del ledger.consumption_history[:-self.scenario.energy.crlt_window]
        ledger.last_recorded_energy = ledger.residual_energy

    def observed_rate(self, ledger: EnergyLedger, current: float) -> float:
        """Mean consumption over the trailing window, current epoch included."""
        window = self.scenario.energy.crlt_window
        samples = ledger.consumption_history[-(window - 1):] if window > 1 else []
        samples = samples + [current]
        return sum(samples) / len(samples)

    def induced_energy(self, node, induced_seconds: float) -> float:
        profile = self.profile_for(node)
        return induced_seconds * (profile.pw_idle - profile.pw_sleep)

    def normal_profile(self, node_id: int, kind: NodeKind, rate: int) -> NormalProfile:
        profile = self.profiles[kind]
        durations = nominal_mode_durations(self.duty, rate, self.scenario.traffic)
        nec = sum(profile.power(mode) * seconds for mode, seconds in durations.items())
        nominal_sleep = durations[EnergyMode.SLEEP]
        return NormalProfile(
            node=node_id,
            rate=rate,
            nominal_awake=self.duty.epoch_length - nominal_sleep,
            nominal_sleep=nominal_sleep,
            nec=nec,
            tnec=threshold_energy_consumption(nec, self.scenario.thresholds.tolerance),
            mode_durations=durations,
        )
