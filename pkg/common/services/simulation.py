import heapq
from dataclasses import replace

import numpy as np

from common.app_logger import get_logger
from common.helpers.exceptions import PhaseError, SimulationError, VerdictUnavailable, AdjudicationUnavailable
from common.models import (
    EnergyMode,
    EventType,
    ForwardingEntry,
    IdsMode,
    LogType,
    MetricsFrame,
    NetworkState,
    Packet,
    PacketKind,
    Phase,
    ReconfigTrigger,
    RejectReason,
    RunResult,
    Ruling,
    Scope,
    SimEvent,
    ValidEntry,
)
from common.repositories.factory import RepoType, RepositoryFactory
from common.services.adjudication import AdjudicationService, adjudicate, score_ruling, validate_at_cc
from common.services.attack import AttackService
from common.services.detection import DetectionService, evaluate_insomnia, observe, penalize, reward
from common.services.energy import EnergyService
from common.services.hierarchy import HierarchyService
from common.services.topology import SINK_ID, TopologyService

logger = get_logger(__name__)

RNG_STREAMS = ('topology', 'election', 'traffic', 'attack')
TIME_EPSILON = 1e-9
# Data packets are placed inside this fraction of their slot, away from the edges.
SLOT_MARGIN = (0.1, 0.9)


class EventQueue:
    """Min-heap on (time, insertion sequence); equal times pop in insertion order."""

    def __init__(self):
        self._heap = []
        self._seq = 0

    def push(self, time: float, kind: EventType, subject=None, payload=None) -> SimEvent:
        event = SimEvent(time=time, seq=self._seq, kind=kind, subject=subject, payload=payload or {})
        self._seq += 1
        heapq.heappush(self._heap, event)
        return event

    def pop(self) -> SimEvent:
        return heapq.heappop(self._heap)

    def __len__(self):
        return len(self._heap)


def spawn_generators(seed: int) -> dict:
    children = np.random.SeedSequence(seed).spawn(len(RNG_STREAMS))
    return {name: np.random.default_rng(child) for name, child in zip(RNG_STREAMS, children)}


class SimulationService:
    """
    One deterministic run. Construct per scenario; `run()` may be called once.
    """

    def __init__(self, scenario):
        self.scenario = scenario
        self.rngs = spawn_generators(scenario.seed)
        self.state = NetworkState(scenario=scenario, repositories=RepositoryFactory(scenario).get_all())
        self.energy = EnergyService(scenario)
        self.topology = TopologyService(scenario)
        self.hierarchy = HierarchyService(scenario, self.rngs['election'], on_control=self.send_control)
        self.detection = DetectionService(scenario, self.energy)
        self.adjudication = AdjudicationService(scenario, self.energy, on_control=self.send_control)
        self.attack = AttackService(scenario, self.rngs['attack'])
        self.queue = EventQueue()
        self.metrics = []
        self._spawned = []
        self._alive = set()
        self._thresholds = {}
        self._frame_schedules = {}
        self._frame_owner = {}
        self._attack_started = set()
        self._unrestorable = set()
        self._handlers = {
            EventType.EPOCH_START: self._on_epoch_start,
            EventType.TRANSMIT: self._on_transmit,
            EventType.EPOCH_END: self._on_epoch_end,
        }

    # Run phases

    def run(self) -> RunResult:
        scenario = self.scenario
        logger.info(f"Run start: seed={scenario.seed} mode={scenario.mode.value} "
                    f"ids={scenario.ids_mode.value} horizon={scenario.horizon}")
        self.initialize()
        self.form_hierarchy()
        self.activate_ids()
        self._advance(Phase.DATA_TRANSFER)

        self.queue.push(0.0, EventType.EPOCH_START, payload={'epoch': 0})
        while self.queue:
            self.dispatch_event(self.queue.pop(), self.state)

        summary = self.summarize()
        logger.info(f"Run end: alive={self.metrics[-1].alive_count} quarantined={self.metrics[-1].quarantined_count} "
                    f"accuracy={self.metrics[-1].accuracy:.3f}")
        return RunResult(events=list(self.state.log), metrics=list(self.metrics), state=self.state, summary=summary)

    def _advance(self, phase: Phase):
        self.state.phase.advance(phase)
        self.state.record(LogType.PHASE, phase.value, f"epoch={self.state.epoch}")

    def initialize(self):
        state = self.state
        state.record(LogType.PHASE, state.phase.phase.value, "epoch=0")
        nodes = self.topology.deploy_nodes(self.rngs['topology'])
        state.nodes = {node.uid: node for node in nodes}
        state.neighbor_map = self.topology.neighbor_discovery(nodes)
        self._alive = {uid for uid, node in state.nodes.items() if node.alive}
        self.metrics.append(self.collect_metrics(state, 0.0))

        self.send_control(SINK_ID)
        for uid in sorted(state.nodes):
            if uid != SINK_ID and state.nodes[uid].reachable:
                self.send_control(uid)

    def form_hierarchy(self):
        state = self.state
        self._advance(Phase.CLUSTER_FORMATION)
        self.hierarchy.form_clusters(state)
        self._advance(Phase.SECTOR_FORMATION)
        self.hierarchy.form_sectors(state)

        for uid in sorted(state.nodes):
            node = state.nodes[uid]
            if uid == SINK_ID:
                continue
            profile = self.energy.normal_profile(uid, node.kind, self.scenario.traffic.rate_of(uid))
            state.profiles[uid] = profile
            self._thresholds[uid] = self.detection.thresholds_for(profile)

    def activate_ids(self):
        state = self.state
        self._advance(Phase.IDS_ACTIVATION)
        state.attackers = self.attack.assign_attackers(state)
        for uid in sorted(state.nodes):
            self.energy.record_epoch(state.nodes[uid])
            # formation traffic is already booked and must not shorten the first epoch's sleep
            state.nodes[uid].ledger.activity = 0.0

        if self.scenario.ids_mode is not IdsMode.DISABLED:
            for sector_id in sorted(state.sectors):
                sector = state.sectors[sector_id]
                self.send_control(sector.coordinator)
                if not sector.monitor_fallback:
                    self.send_control(sector.monitor)
        self.hierarchy.refresh_backups(state, 0)

    # Event loop

    def _schedule(self, time: float, kind: EventType, subject=None, payload=None):
        self._spawned.append(self.queue.push(time, kind, subject, payload))

    def dispatch_event(self, event: SimEvent, state) -> list:
        """Apply one event and return the events it scheduled."""
        if event.time < state.clock - TIME_EPSILON:
            raise SimulationError(f"event at t={event.time} is older than the clock t={state.clock}")
        state.clock = max(state.clock, event.time)
        self._spawned = []
        if event.subject is not None and not state.nodes[event.subject].alive:
            logger.debug(f"DeadNode {event.subject}: dropped {event.kind.name} at t={event.time:.6f}")
            return []
        self._handlers[event.kind](event)
        return self._spawned

    def _on_epoch_start(self, event: SimEvent):
        state = self.state
        epoch = event.payload['epoch']
        if not state.phase.data_allowed:
            raise PhaseError(f"data transfer requested during {state.phase.phase.value}")
        state.epoch = epoch
        epoch_length = self.scenario.duty.epoch_length

        self._frame_schedules = {
            sid: replace(schedule, assignments=dict(schedule.assignments))
            for sid, schedule in sorted(state.schedules.items())
        }
        self._frame_owner = {
            leaf: schedule for schedule in self._frame_schedules.values() for leaf in schedule.leaves
        }

        for uid, spec in state.attackers.items():
            emissions = self.attack.act(spec, epoch, state)
            if emissions and uid not in self._attack_started:
                self._attack_started.add(uid)
                state.record(LogType.ATTACK, uid, f"active archetype={spec.archetype.value} epoch={epoch}")
            for emission in emissions:
                self._schedule(emission.time, EventType.TRANSMIT, uid,
                               {'slot': emission.slot, 'kind': emission.kind, 'target': emission.target})

        for sector_id, schedule in self._frame_schedules.items():
            if state.sectors[sector_id].degraded:
                continue
            for leaf in schedule.leaves:
                node = state.nodes[leaf]
                if not node.alive or node.quarantined:
                    continue
                spec = state.attackers.get(leaf)
                if spec is not None and self.attack.suppresses_traffic(spec, epoch, state):
                    continue
                self._schedule_leaf_traffic(leaf, schedule, epoch)

        end = (epoch + 1) * epoch_length
        self._schedule(end, EventType.EPOCH_END, payload={'epoch': epoch})
        if epoch + 1 < self.scenario.horizon:
            self._schedule(end, EventType.EPOCH_START, payload={'epoch': epoch + 1})

    def _schedule_leaf_traffic(self, leaf: int, schedule, epoch: int):
        rate = self.state.profiles[leaf].rate
        slots = schedule.slots_of(leaf)
        per_slot, extra = divmod(rate, len(slots))
        rng = self.rngs['traffic']
        for index, slot in enumerate(slots):
            count = per_slot + (1 if index < extra else 0)
            if count == 0:
                continue
            offsets = np.sort(rng.uniform(*SLOT_MARGIN, size=count))
            start = schedule.slot_start(epoch, slot)
            for offset in offsets.tolist():
                self._schedule(start + offset * schedule.slot_duration, EventType.TRANSMIT, leaf,
                               {'slot': slot, 'kind': PacketKind.DATA, 'target': None})

    def _on_transmit(self, event: SimEvent):
        state = self.state
        traffic = self.scenario.traffic
        sender = state.nodes[event.subject]
        if sender.quarantined:
            logger.debug(f"Quarantined node {sender.uid} is isolated; transmission dropped")
            return
        sector = state.sector_of(sender.uid)
        if sector is None or sector.degraded:
            return

        kind = event.payload['kind']
        packet = Packet(
            packet_id=state.next_packet_id(),
            origin=sender.uid,
            payload_size=traffic.payload_size,
            created_at=event.time,
            slot=event.payload['slot'],
            hops=[sender.uid],
            kind=kind,
        )
        if kind is PacketKind.DATA:
            self.energy.spend(sender, EnergyMode.SENSING, traffic.sensing_time)
            self.energy.spend(sender, EnergyMode.COMPUTE, traffic.compute_time)
            state.generated += 1

        heard = self._transmit(sender.uid, sector.coordinator, traffic.airtime)
        if kind is PacketKind.WAKE:
            victim = state.nodes.get(event.payload['target'])
            if victim is not None and victim.alive:
                self.energy.spend(victim, EnergyMode.IDLE, traffic.airtime)
                victim.ledger.forced_awake = True
        if heard:
            state.buffers.setdefault(sender.uid, []).append(packet)

    def _transmit(self, sender: int, receiver, airtime: float, control: bool = False) -> bool:
        """Charge one transmission; receiver None is a broadcast. False when nobody alive heard it."""
        if sender == receiver:
            return True
        nodes = self.state.nodes
        if not nodes[sender].alive:
            logger.debug(f"DeadNode {sender}: cannot transmit")
            return False
        self.energy.spend(nodes[sender], EnergyMode.TRANSMIT, airtime)
        if control:
            self.state.control_packets += 1
        else:
            self.state.data_packets += 1
        if receiver is None:
            return True
        if not nodes[receiver].alive:
            return False
        self.energy.spend(nodes[receiver], EnergyMode.IDLE, airtime)
        return True

    def send_control(self, sender: int, receiver=None) -> bool:
        return self._transmit(sender, receiver, self.scenario.traffic.control_airtime, control=True)

    def _on_epoch_end(self, event: SimEvent):
        state = self.state
        epoch = event.payload['epoch']
        for uid in sorted(state.nodes):
            if state.nodes[uid].alive:
                self.energy.settle(state.nodes[uid])
        self._record_deaths()

        if self.scenario.ids_mode is not IdsMode.DISABLED:
            self._run_detection(epoch)
        for uid in sorted(state.nodes):
            self.energy.record_epoch(state.nodes[uid])
        self._forward_all()
        self._check_reconfiguration()
        self._record_deaths()

        state.buffers.clear()
        self.metrics.append(self.collect_metrics(state, state.clock))

    def _record_deaths(self):
        state = self.state
        for uid in sorted(self._alive):
            if not state.nodes[uid].alive:
                self._alive.discard(uid)
                state.record(LogType.DEATH, uid, f"role={state.nodes[uid].role.value}")
                logger.info(f"Node {uid} died at t={state.clock:.3f}")

    # Detection

    def _run_detection(self, epoch: int):
        state = self.state
        if not state.phase.ids_active:
            raise PhaseError("SIDS evaluation before IDS activation")
        config = self.scenario
        verdicts = state.repo(RepoType.VERDICT)
        reputations = state.repo(RepoType.REPUTATION)

        for sector_id, schedule in self._frame_schedules.items():
            sector = state.sectors.get(sector_id)
            if sector is None or sector.degraded:
                continue
            coordinator = state.nodes[sector.coordinator]
            if not coordinator.alive or coordinator.quarantined:
                continue

            suspects = []
            for leaf in schedule.leaves:
                node = state.nodes[leaf]
                if not node.alive or node.quarantined:
                    continue
                vector = self.detection.acquisition_vector(
                    node, state.buffers.get(leaf, ()), schedule, self.attack.reported_residual(node, epoch, state))
                try:
                    view = self.detection.ledger_view(node, epoch)
                except VerdictUnavailable as exc:
                    logger.debug(f"No verdict for {leaf}: {exc}")
                    continue

                verdict = evaluate_insomnia(vector, view, schedule, self._thresholds[leaf])
                self.energy.spend(coordinator, EnergyMode.COMPUTE, config.traffic.evaluation_time)
                verdicts.save(verdict)
                benign = leaf not in state.attackers
                state.evaluations += 1
                state.benign_evaluations += benign

                record = observe(reputations.get_record(leaf))
                if verdict.insomnia:
                    record = penalize(record, config.reputation.penalty)
                    state.sids_flags += 1
                    state.sids_benign_flags += benign
                    state.suspected.setdefault(sector_id, {})[leaf] = epoch
                    state.record(LogType.VERDICT, leaf, verdict.describe())
                    suspects.append((leaf, vector))
                else:
                    record = reward(record, config.reputation.reward)
                reputations.save(record)

            for leaf, vector in suspects:
                # a re-election above may have moved the leaf under a new host
                current = state.sector_of(leaf)
                if current is None or current.degraded:
                    continue
                self._adjudicate(current, leaf, vector, schedule, epoch)
            if suspects:
                logger.debug(f"Epoch {epoch} sector {sector_id}: {len(suspects)} suspects")

    def _adjudicate(self, sector, leaf: int, vector, schedule, epoch: int):
        state = self.state
        node = state.nodes[leaf]
        if node.quarantined:
            return
        reputations = state.repo(RepoType.REPUTATION)
        thresholds = self._thresholds[leaf]

        if self.scenario.ids_mode is IdsMode.SIDS_ONLY:
            host = sector.coordinator
            ruling = Ruling.MALICIOUS
        else:
            host = sector.monitor
            host_node = state.nodes[host]
            if not host_node.alive or host_node.quarantined:
                ruling = Ruling.STILL_SUSPECTED
            else:
                recheck = self.adjudication.recheck(node, vector, epoch, self.detection, schedule, thresholds)
                history = state.repo(RepoType.VERDICT).history_of(leaf)
                try:
                    ruling = adjudicate(leaf, reputations.get_record(leaf), history, thresholds,
                                        host_node.budget, recheck)
                    self.energy.spend(host_node, EnergyMode.COMPUTE, self.scenario.traffic.adjudication_time)
                except AdjudicationUnavailable as exc:
                    logger.info(f"Sector {sector.id}: {exc}")
                    ruling = Ruling.STILL_SUSPECTED

        state.record(LogType.RULING, leaf, f"{ruling.value} host={host}")
        state.counters = score_ruling(leaf, ruling, state.attackers, state.counters)
        if ruling is Ruling.MALICIOUS:
            self.adjudication.quarantine(leaf, state, host, epoch)
        elif ruling is Ruling.CLEARED:
            reputations.save(reward(reputations.get_record(leaf), self.scenario.reputation.reward))
            state.suspected.get(sector.id, {}).pop(leaf, None)
        if self.scenario.ids_mode is IdsMode.FULL and not state.nodes[host].budget.active:
            self._restore_monitoring(sector)

    # Forwarding

    def _forward_all(self):
        state = self.state
        traffic = self.scenario.traffic
        quarantine = state.repo(RepoType.QUARANTINE)
        forwarding = state.repo(RepoType.FORWARDING)

        groups = {}
        for leaf in sorted(state.buffers):
            sector = state.sector_of(leaf)
            if sector is None or sector.degraded:
                continue
            data = [p for p in state.buffers[leaf] if p.kind is PacketKind.DATA]
            if data:
                groups.setdefault(sector.id, []).extend(data)

        by_cluster = {}
        for sector_id in sorted(groups):
            by_cluster.setdefault(state.sectors[sector_id].cluster_id, []).append(sector_id)

        for cluster_id in sorted(by_cluster):
            cluster = state.clusters[cluster_id]
            if cluster.degraded:
                continue
            coordinator = cluster.coordinator
            accepted = []
            for sector_id in by_cluster[cluster_id]:
                sector = state.sectors[sector_id]
                packets = groups[sector_id]
                for packet in packets:
                    packet.hop(sector.coordinator)
                if not self._transmit(sector.coordinator, sector.forwarding_head, traffic.aggregate_airtime):
                    continue
                for packet in packets:
                    packet.hop(sector.forwarding_head)
                    forwarding.save(ForwardingEntry(
                        node_id=packet.origin, member_id=sector_id, na='', packet_id=packet.packet_id,
                        node_info=f"slot={packet.slot}", next_hop=coordinator, timestamp=packet.created_at,
                    ))
                if not self._transmit(sector.forwarding_head, coordinator, traffic.aggregate_airtime):
                    continue
                accepted += self._validate_batch(packets, sector_id, coordinator)

            if accepted and self._transmit(coordinator, SINK_ID, traffic.aggregate_airtime):
                for packet in accepted:
                    if quarantine.is_quarantined(packet.origin) or quarantine.is_quarantined(coordinator):
                        state.rejected += 1
                        state.record(LogType.REJECT, packet.origin,
                                     f"reason={RejectReason.QUARANTINED.value} packet={packet.packet_id} at={SINK_ID}")
                        continue
                    packet.hop(SINK_ID)
                    state.delivered.append(packet)

    def _validate_batch(self, packets, sector_id: int, coordinator: int) -> list:
        state = self.state
        cc = state.nodes[coordinator]
        quarantine = state.repo(RepoType.QUARANTINE)
        forwarding = state.repo(RepoType.FORWARDING)
        valid_list = state.repo(RepoType.VALID_LIST)
        reputations = state.repo(RepoType.REPUTATION)
        accepted = []
        for packet in packets:
            self.energy.spend(cc, EnergyMode.COMPUTE, self.scenario.traffic.validation_time)
            entry = forwarding.get_one({'packet_id': packet.packet_id})
            result = validate_at_cc(packet, entry, valid_list, quarantine, self._frame_owner.get(packet.origin))
            if result.accepted:
                packet.hop(coordinator)
                valid_list.save(ValidEntry(
                    node_id=packet.origin, member_id=sector_id, na='',
                    reputation=reputations.get_record(packet.origin).reputation, packet_id=packet.packet_id,
                ))
                accepted.append(packet)
            else:
                self._reject_at_cc(packet, result.reason, coordinator)
        return accepted

    def _reject_at_cc(self, packet, reason: RejectReason, coordinator: int):
        state = self.state
        state.rejected += 1
        state.record(LogType.REJECT, packet.origin, f"reason={reason.value} packet={packet.packet_id} at={coordinator}")
        if reason is RejectReason.CORRUPTED or packet.origin is None:
            return
        reputations = state.repo(RepoType.REPUTATION)
        record = penalize(observe(reputations.get_record(packet.origin)), self.scenario.reputation.penalty)
        reputations.save(record)
        state.counters = score_ruling(packet.origin, Ruling.MALICIOUS, state.attackers, state.counters)

    # Reconfiguration

    def _reconfigure(self, scope: Scope, trigger: ReconfigTrigger):
        self._advance(Phase.RECONFIGURATION)
        self.hierarchy.reconfigure(scope, trigger, self.state)
        self.hierarchy.refresh_backups(self.state, self.state.epoch)
        self._advance(Phase.DATA_TRANSFER)

    def _check_reconfiguration(self):
        state = self.state
        for cluster_id in sorted(state.clusters):
            cluster = state.clusters[cluster_id]
            if cluster.degraded:
                continue
            coordinator = state.nodes[cluster.coordinator]
            if not coordinator.alive:
                self._reconfigure(Scope.cluster(cluster_id), ReconfigTrigger.COORDINATOR_DEAD)
                continue
            if coordinator.quarantined:
                self._reconfigure(Scope.cluster(cluster_id), ReconfigTrigger.COORDINATOR_DEVIATES)
                continue
            if self._fallback_exhausted(cluster):
                self._reconfigure(Scope.cluster(cluster_id), ReconfigTrigger.DETECTION_POWER_EXHAUSTED)
                continue
            for sector_id in list(cluster.sector_ids):
                sector = state.sectors.get(sector_id)
                if sector is None or sector.degraded or sector.pseudo:
                    continue
                trigger = self._sector_trigger(sector)
                if trigger is not None:
                    self._reconfigure(Scope.sector(sector_id), trigger)

    def _restore_monitoring(self, sector):
        """Re-elect the host of an exhausted monitor in the same epoch."""
        if not sector.monitor_fallback:
            self._reconfigure(Scope.sector(sector.id), ReconfigTrigger.DETECTION_POWER_EXHAUSTED)
        elif self._fallback_exhausted(self.state.clusters[sector.cluster_id]):
            self._reconfigure(Scope.cluster(sector.cluster_id), ReconfigTrigger.DETECTION_POWER_EXHAUSTED)
        elif sector.cluster_id not in self._unrestorable:
            self._unrestorable.add(sector.cluster_id)
            logger.warning(f"Sector {sector.id}: cluster coordinator {sector.monitor} is exhausted "
                           f"and no leader of cluster {sector.cluster_id} can take over adjudication")

    def _fallback_exhausted(self, cluster) -> bool:
        """
        The cluster coordinator adjudicates for some sector, its detection power is spent,
        and another leader of the cluster still has power to take the role over.
        """
        if self.scenario.ids_mode is not IdsMode.FULL:
            return False
        nodes = self.state.nodes
        if nodes[cluster.coordinator].budget.active:
            return False
        hosting = any(
            self.state.sectors[sid].monitor_fallback and not self.state.sectors[sid].degraded
            for sid in cluster.sector_ids if sid in self.state.sectors
        )
        if not hosting:
            return False
        return any(
            nodes[m].is_leader and nodes[m].eligible and nodes[m].budget.active
            for m in cluster.members if m != cluster.coordinator
        )

    def _sector_trigger(self, sector):
        nodes = self.state.nodes
        holders = [sector.coordinator, sector.forwarding_head]
        if not sector.monitor_fallback:
            holders.append(sector.monitor)
        if any(not nodes[h].alive for h in holders):
            return ReconfigTrigger.COORDINATOR_DEAD
        if any(nodes[h].quarantined for h in holders):
            return ReconfigTrigger.COORDINATOR_DEVIATES
        if not sector.monitor_fallback and not nodes[sector.monitor].budget.active:
            return ReconfigTrigger.DETECTION_POWER_EXHAUSTED

        history = nodes[sector.coordinator].ledger.consumption_history
        leaves = self.state.schedules[sector.id].leaves
        if history and leaves:
            mean_tnec = sum(self.state.profiles[leaf].tnec for leaf in leaves) / len(leaves)
            if history[-1] > self.scenario.reconfiguration.sc_consumption_factor * mean_tnec:
                return ReconfigTrigger.NODE_SUSPECTED_HIGH_CONSUMPTION
        return None

    # Metrics

    def collect_metrics(self, state, time: float) -> MetricsFrame:
        nodes = state.nodes.values()
        counters = state.counters
        data, control = state.data_packets, state.control_packets
        return MetricsFrame(
            time=time,
            alive_count=sum(1 for node in nodes if node.alive),
            total_energy_consumed=sum(node.ledger.consumed for node in nodes),
            truedetect=counters.truedetect,
            phantomdetect=counters.phantomdetect,
            accuracy=counters.accuracy,
            data_packets=data,
            control_packets=control,
            overhead_ratio=control / max(1, data + control),
            quarantined_count=len(state.repo(RepoType.QUARANTINE)),
        )

    def summarize(self) -> dict:
        state = self.state
        attackers = sorted(state.attackers)
        caught = [uid for uid in attackers if uid in state.quarantined_at]
        latency = {
            str(uid): state.quarantined_at[uid] - state.attackers[uid].start_epoch for uid in caught
        }
        suspected = sorted({leaf for leaves in state.suspected.values() for leaf in leaves
                            if not state.nodes[leaf].quarantined})
        window = self.scenario.energy.crlt_window
        rates = [
            sum(state.nodes[uid].ledger.consumption_history[-window:]) / max(1, len(state.nodes[uid].ledger.consumption_history[-window:]))
            for uid in suspected
        ]
        final = self.metrics[-1]
        return {
            'seed': self.scenario.seed,
            'mode': self.scenario.mode.value,
            'ids_mode': self.scenario.ids_mode.value,
            'horizon': self.scenario.horizon,
            'nodes': len(state.nodes),
            'clusters': len(state.clusters),
            'sectors': len(state.sectors),
            'degraded_sectors': sum(1 for s in state.sectors.values() if s.degraded),
            'alive': final.alive_count,
            'energy_consumed_j': final.total_energy_consumed,
            'generated_packets': state.generated,
            'delivered_packets': len(state.delivered),
            'rejected_packets': state.rejected,
            'truedetect': final.truedetect,
            'phantomdetect': final.phantomdetect,
            'accuracy': final.accuracy,
            'attackers': attackers,
            'quarantined': sorted(state.quarantined_at),
            'recall': len(caught) / len(attackers) if attackers else 1.0,
            'detection_latency_epochs': latency,
            'false_positive_rate_per_1000': (
                1000 * state.sids_benign_flags / state.benign_evaluations if state.benign_evaluations else 0.0
            ),
            'r_suspected': sum(rates) / len(rates) if rates else 0.0,
        }
