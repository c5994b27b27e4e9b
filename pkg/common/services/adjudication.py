from dataclasses import replace
from typing import Callable, Optional

from common.app_logger import get_logger
from common.helpers.exceptions import AdjudicationUnavailable
from common.models import (
    DetectionCounters,
    LogType,
    QuarantineEntry,
    RejectReason,
    RoleType,
    Ruling,
    ValidationResult,
)
from common.repositories.factory import RepoType
from common.services.detection import evaluate_insomnia
from common.services.topology import SINK_ID

logger = get_logger(__name__)


def adjudicate(suspect: int, record, history, thresholds, budget, recheck) -> Ruling:
    """
    Final ruling on one suspect. `recheck` is the monitor's own re-evaluation of the
    suspect's latest vector.

    A clean re-check is tested first and returns Cleared even when the record already
    meets the count, percentage or reputation conditions for Malicious. Those conditions
    only convict when the re-check still shows insomnia.
    """
    if not budget.active:
        raise AdjudicationUnavailable(f"detection budget exhausted (dp={budget.dp}, dp_min={budget.dp_min})")
    budget.drain()

    if not recheck.insomnia:
        return Ruling.CLEARED
    if not any(v.insomnia for v in history if v.node == suspect):
        return Ruling.STILL_SUSPECTED
    if (
        record.suspected_count >= thresholds.t_scount
        or record.suspected_percentage > thresholds.t_per
        or record.reputation < thresholds.t_reput
    ):
        return Ruling.MALICIOUS
    return Ruling.STILL_SUSPECTED


def validate_at_cc(pkt, forwarding, valid_list, quarantine, schedule) -> ValidationResult:
    if pkt.malformed or forwarding is None:
        return ValidationResult.reject(RejectReason.CORRUPTED)
    if quarantine.is_quarantined(pkt.origin):
        return ValidationResult.reject(RejectReason.QUARANTINED)
    if valid_list.exists({'packet_id': pkt.packet_id}):
        return ValidationResult.reject(RejectReason.DUPLICATE)
    if schedule is None or schedule.slot_at(forwarding.timestamp) != pkt.slot or not schedule.owns(pkt.origin, pkt.slot):
        return ValidationResult.reject(RejectReason.SLOT_MISMATCH)
    return ValidationResult.accept()


def score_ruling(node: int, ruling: Ruling, ground_truth, counters: DetectionCounters) -> DetectionCounters:
    if ruling is not Ruling.MALICIOUS:
        return counters
    if node in ground_truth:
        return replace(counters, truedetect=counters.truedetect + 1)
    return replace(counters, phantomdetect=counters.phantomdetect + 1)


def _no_control(sender, receiver=None):
    return None


class AdjudicationService:
    """EXIDS hosted by sector monitors, cluster coordinators and the sink."""

    def __init__(self, scenario, energy_service, on_control: Optional[Callable] = None):
        self.scenario = scenario
        self.energy_service = energy_service
        self.on_control = on_control or _no_control

    def recheck(self, node, av, epoch: int, detection_service, schedule, thresholds):
        """Re-evaluate with the sleep lost to inbound wake-up traffic given back."""
        induced = av.induced_wake
        view = detection_service.ledger_view(node, epoch, self.energy_service.induced_energy(node, induced))
        corrected = replace(
            av,
            observed_sleep=av.observed_sleep + induced,
            observed_wake=av.observed_wake - induced,
            induced_wake=0.0,
        )
        return evaluate_insomnia(corrected, view, schedule, thresholds)

    def quarantine(self, node_id: int, state, monitor: Optional[int], epoch: int) -> tuple:
        """
        Isolate a node. Returns the entry and the Role the node held; idempotent, so a
        second call returns the existing entry and None.
        """
        registry = state.repo(RepoType.QUARANTINE)
        existing = registry.get_one({'node_id': node_id})
        if existing is not None:
            return existing, None

        node = state.nodes[node_id]
        previous = node.role_info()
        record = state.repo(RepoType.REPUTATION).get_record(node_id)
        entry = registry.save(QuarantineEntry(
            node_id=node_id,
            member_id=node.cluster_id,
            na='',
            monitor=previous.role is RoleType.SECTOR_MONITOR,
            compromised=True,
            trust=record.reputation,
            scout=previous.role is RoleType.FORWARDING_SECTOR_HEAD,
            malicious=True,
            since=epoch,
        ))

        node.quarantined = True
        node.role = RoleType.LEAF_NODE
        sector = state.sector_of(node_id)
        if sector is not None:
            sector.members.discard(node_id)
            state.schedules[sector.id].remove(node_id)
            state.suspected.get(sector.id, {}).pop(node_id, None)
        if node.cluster_id is not None and node.cluster_id in state.clusters:
            state.clusters[node.cluster_id].members.discard(node_id)
        node.sector_id = None
        state.buffers.pop(node_id, None)
        state.quarantined_at[node_id] = epoch

        self._announce(node, monitor, state)
        state.record(LogType.QUARANTINE, node_id,
                     f"since={epoch} trust={record.reputation:.6f} previous_role={previous.role.value} "
                     f"priority={previous.priority}")
        logger.info(f"Quarantined node {node_id} at epoch {epoch} (was {previous.role.value})")
        return entry, previous

    def _announce(self, node, monitor: Optional[int], state):
        cluster = state.clusters.get(node.cluster_id) if node.cluster_id is not None else None
        coordinator = cluster.coordinator if cluster else None
        if monitor is not None and coordinator is not None and monitor != coordinator:
            self.on_control(monitor, coordinator)
        if coordinator is not None and coordinator != node.uid:
            self.on_control(coordinator, SINK_ID)
        for cluster_id in sorted(state.clusters):
            other = state.clusters[cluster_id]
            if other.coordinator != coordinator and not other.degraded:
                self.on_control(SINK_ID, other.coordinator)
