from common.app_logger import get_logger
from common.helpers.exceptions import VerdictUnavailable
from common.models import (
    AcquisitionVector,
    CaseEvidence,
    DetectionThresholds,
    InsomniaVerdict,
    LedgerView,
    NormalProfile,
    ReputationRecord,
    SlotSchedule,
)
from common.services.energy import calculated_remaining_lifetime

logger = get_logger(__name__)

EPSILON = 1e-12


def _energy_rate_case(av, view, thresholds):
    crlt = calculated_remaining_lifetime(view, view.observed_rate)
    over_budget = view.consumption > thresholds.tnec
    short_lived = crlt < thresholds.th_lifetime
    detail = f"ec={view.consumption:.6f}>tnec={thresholds.tnec:.6f} or crlt={crlt:.3f}<{thresholds.th_lifetime}"
    if short_lived and not over_budget:
        return True, CaseEvidence(observed=crlt, threshold=thresholds.th_lifetime, detail=detail)
    return over_budget or short_lived, CaseEvidence(observed=view.consumption, threshold=thresholds.tnec,
                                                    detail=detail)


def _duty_case(av, view, thresholds):
    flagged = (
        (av.observed_wake > thresholds.th_wake and av.observed_sleep < thresholds.th_sleep)
        or av.observed_sleep == 0
    )
    detail = f"wake={av.observed_wake:.3f}/{thresholds.th_wake:.3f} sleep={av.observed_sleep:.3f}/{thresholds.th_sleep:.3f}"
    return flagged, CaseEvidence(observed=av.observed_sleep, threshold=thresholds.th_sleep, detail=detail)


def _slot_case(av, schedule):
    owned = set(schedule.slots_of(av.leaf))
    foreign = [p.slot for p in av.packets if p.slot not in owned]
    detail = f"foreign_slots={sorted(set(foreign))} owned={sorted(owned)}"
    return bool(foreign), CaseEvidence(observed=len(foreign), threshold=0, detail=detail)


def _energy_jump_case(av, view, thresholds):
    lre = view.last_recorded_energy
    jump = abs(lre - av.reported_residual)
    limit = thresholds.energy_jump_delta * max(lre, EPSILON)
    detail = f"|lre-re|={jump:.6f}>{limit:.6f}"
    return jump > limit, CaseEvidence(observed=jump, threshold=limit, detail=detail)


def _buffer_case(av, schedule, thresholds):
    total = len(av.packets)
    window = schedule.window_units(av.leaf, thresholds.slot_budget)
    if window == 0:
        percentage = float('inf') if total else 0.0
    else:
        percentage = total / window * 100
    detail = f"tot={total} window={window:g} pct={percentage:.1f}>{thresholds.th_buffer}"
    return percentage > thresholds.th_buffer, CaseEvidence(observed=percentage, threshold=thresholds.th_buffer,
                                                           detail=detail)


def evaluate_insomnia(av: AcquisitionVector, ledger_view: LedgerView, schedule: SlotSchedule,
                      thresholds: DetectionThresholds) -> InsomniaVerdict:
    """Five-case check. Every comparison is strict, so values sitting on a threshold pass."""
    outcomes = (
        _energy_rate_case(av, ledger_view, thresholds),
        _duty_case(av, ledger_view, thresholds),
        _slot_case(av, schedule),
        _energy_jump_case(av, ledger_view, thresholds),
        _buffer_case(av, schedule, thresholds),
    )
    flags = tuple(flag for flag, _ in outcomes)
    evidence = {number: ev for number, (flag, ev) in enumerate(outcomes, start=1) if flag}
    return InsomniaVerdict(node=av.leaf, epoch=ledger_view.epoch, case_flags=flags, evidence=evidence)


def penalize(record: ReputationRecord, amount: float) -> ReputationRecord:
    return ReputationRecord(
        node=record.node,
        reputation=max(0.0, record.reputation - amount),
        suspected_count=record.suspected_count + 1,
        observations=record.observations,
    )


def reward(record: ReputationRecord, amount: float) -> ReputationRecord:
    return ReputationRecord(
        node=record.node,
        reputation=min(1.0, record.reputation + amount),
        suspected_count=record.suspected_count,
        observations=record.observations,
    )


def observe(record: ReputationRecord) -> ReputationRecord:
    return ReputationRecord(
        node=record.node,
        reputation=record.reputation,
        suspected_count=record.suspected_count,
        observations=record.observations + 1,
    )


class DetectionService:
    """SIDS bookkeeping hosted by sector coordinators."""

    def __init__(self, scenario, energy_service):
        self.scenario = scenario
        self.energy_service = energy_service

    def thresholds_for(self, profile: NormalProfile) -> DetectionThresholds:
        config = self.scenario.thresholds
        tolerance = config.tolerance
        th_wake = config.th_wake if config.th_wake is not None else profile.nominal_awake * (1 + tolerance)
        th_sleep = config.th_sleep if config.th_sleep is not None else profile.nominal_sleep * (1 - tolerance)
        return DetectionThresholds(
            tnec=profile.tnec,
            th_lifetime=config.th_lifetime,
            th_wake=th_wake,
            th_sleep=max(0.0, th_sleep),
            th_buffer=config.th_buffer,
            energy_jump_delta=config.energy_jump_delta,
            t_scount=config.t_scount,
            t_per=config.t_per,
            t_reput=config.t_reput,
            slot_budget=profile.rate / self.scenario.slots.slots_per_leaf,
        )

    def ledger_view(self, node, epoch: int, consumption_offset: float = 0.0) -> LedgerView:
        """
        `consumption_offset` is subtracted from this epoch's consumption; the monitor uses
        it to discount energy burnt by inbound wake-up traffic.
        """
        ledger = node.ledger
        if ledger.last_recorded_energy is None:
            raise VerdictUnavailable(f"node {node.uid} has no recorded energy baseline")
        consumption = max(0.0, ledger.last_recorded_energy - ledger.residual_energy - consumption_offset)
        return LedgerView(
            epoch=epoch,
            residual_energy=ledger.residual_energy,
            last_recorded_energy=ledger.last_recorded_energy,
            consumption=consumption,
            observed_rate=self.energy_service.observed_rate(ledger, consumption),
        )

    def acquisition_vector(self, node, packets, schedule: SlotSchedule, reported_residual: float) -> AcquisitionVector:
        usage = node.ledger.last_usage
        sleep = usage.sleep if usage else 0.0
        return AcquisitionVector(
            leaf=node.uid,
            slot=schedule.slots_of(node.uid),
            packets=tuple(packets),
            observed_wake=self.scenario.duty.epoch_length - sleep,
            observed_sleep=sleep,
            reported_residual=reported_residual,
            induced_wake=usage.induced if usage else 0.0,
        )
