import math
from typing import Callable, Optional

from common.app_logger import get_logger
from common.helpers.exceptions import ElectionError
from common.models import (
    Cluster,
    ClusterSnapshot,
    LogType,
    NodeKind,
    RoleType,
    Scope,
    ScopeKind,
    Sector,
    SimulationMode,
    SlotSchedule,
)
from common.repositories.factory import RepoType
from common.services.topology import SINK_ID, signal_strength

logger = get_logger(__name__)


def pick_best(candidates, key: Callable, rng):
    """
    Smallest key wins. Exact ties are drawn from `rng` over the tied ids in ascending
    order, so a replay with the same generator state picks the same node.
    """
    ranked = sorted(candidates, key=lambda c: (key(c), c))
    if not ranked:
        raise ValueError("no candidates to choose from")
    best = key(ranked[0])
    ties = [c for c in ranked if key(c) == best]
    if len(ties) == 1:
        return ties[0]
    return ties[int(rng.integers(len(ties)))]


def _no_control(sender, receiver=None):
    return None


class HierarchyService:

    def __init__(self, scenario, rng, on_control: Optional[Callable] = None):
        self.scenario = scenario
        self.rng = rng
        self.radio = scenario.radio
        self.on_control = on_control or _no_control
        self._next_sector_id = 0

    def _coverage(self, node_id: int, neighbor_map, pool) -> set:
        return ({node_id} | set(neighbor_map.neighbors(node_id))) & pool

    def _strength(self, nodes: dict, a: int, b: int) -> float:
        return signal_strength(nodes[a].position, nodes[b].position, self.radio)

    def _allocate_sector_id(self) -> int:
        sector_id = self._next_sector_id
        self._next_sector_id += 1
        return sector_id

    # Elections

    def select_cluster_coordinators(self, nodes: dict, neighbor_map) -> list:
        """
        Greedy cover of the reachable field. Each round elects, among leaders that still
        cover an uncovered node, the one with most residual energy and fewest hops to the
        sink. Cluster members here are raw coverage; membership is resolved afterwards.
        """
        leaders = [uid for uid in sorted(nodes) if nodes[uid].is_leader and nodes[uid].eligible]
        if not leaders:
            raise ElectionError("no leader node is reachable from the sink")

        pool = {uid for uid, node in nodes.items() if node.kind is not NodeKind.SINK and node.eligible}
        uncovered = set(pool)
        clusters = []

        def key(uid):
            return (-nodes[uid].ledger.residual_energy, neighbor_map.hop_distance(uid))

        while uncovered:
            candidates = [uid for uid in leaders if self._coverage(uid, neighbor_map, pool) & uncovered]
            if not candidates:
                break
            coordinator = pick_best(candidates, key, self.rng)
            leaders.remove(coordinator)
            covered = self._coverage(coordinator, neighbor_map, pool)
            clusters.append(Cluster(id=len(clusters), coordinator=coordinator, members=covered))
            uncovered -= covered

        return clusters

    def assign_membership(self, node_id: int, candidate_clusters, nodes: dict) -> Optional[int]:
        if not candidate_clusters:
            logger.warning(f"UnassignedNode: {node_id} lies outside every cluster")
            return None
        strengths = {c.id: self._strength(nodes, node_id, c.coordinator) for c in candidate_clusters}
        return pick_best(list(strengths), lambda cid: -strengths[cid], self.rng)

    def select_sector_coordinators(self, cluster: Cluster, nodes: dict, neighbor_map) -> list:
        coordinator = cluster.coordinator
        members = {m for m in cluster.members if m != coordinator and nodes[m].eligible}
        followers = [m for m in sorted(members) if nodes[m].is_follower]
        if not followers:
            logger.info(f"Cluster {cluster.id} has no follower; it carries zero sectors")
            return []

        def key(uid):
            hops = neighbor_map.hops_between(uid, coordinator)
            return (-nodes[uid].ledger.residual_energy, math.inf if hops is None else hops)

        uncovered = set(members)
        coverage = {}
        while uncovered:
            candidates = [f for f in followers
                          if f not in coverage and self._coverage(f, neighbor_map, members) & uncovered]
            if not candidates:
                break
            chosen = pick_best(candidates, key, self.rng)
            coverage[chosen] = self._coverage(chosen, neighbor_map, members)
            uncovered -= coverage[chosen]

        sectors = {}
        for sc in coverage:
            sector = Sector(id=self._allocate_sector_id(), cluster_id=cluster.id, coordinator=sc, members={sc})
            sectors[sector.id] = sector
        by_coordinator = {s.coordinator: s for s in sectors.values()}

        for member in sorted(members):
            if member in by_coordinator:
                continue
            contested = [s for s in sectors.values() if member in coverage[s.coordinator]]
            if not contested:
                logger.info(f"Node {member} is outside every sector of cluster {cluster.id}; joining the nearest")
                contested = list(sectors.values())
            strengths = {s.id: self._strength(nodes, member, s.coordinator) for s in contested}
            chosen = pick_best(list(strengths), lambda sid: -strengths[sid], self.rng)
            sectors[chosen].members.add(member)

        return list(sectors.values())

    def select_sector_monitor(self, sector: Sector, cluster: Cluster, nodes: dict) -> tuple:
        """Returns (monitor, fallback). Fallback means the cluster coordinator hosts adjudication."""
        eligible = [
            m for m in sorted(sector.members)
            if nodes[m].is_leader and m != cluster.coordinator and nodes[m].eligible and nodes[m].budget.active
        ]
        if not eligible:
            logger.warning(f"MonitorFallback: sector {sector.id} has no eligible leader, "
                           f"cluster coordinator {cluster.coordinator} adjudicates")
            return cluster.coordinator, True
        monitor = pick_best(
            eligible,
            lambda uid: (-nodes[uid].ledger.residual_energy, -nodes[uid].budget.dp),
            self.rng,
        )
        return monitor, False

    def select_forwarding_sector_head(self, sector: Sector, cluster: Cluster, nodes: dict, neighbor_map) -> int:
        """
        Fewest hops to the cluster coordinator. The monitor is never a candidate since the
        forwarding head's detection power is zeroed; among equal hops a node that holds no
        other role is preferred.
        """
        coordinator = cluster.coordinator
        candidates = [
            m for m in sorted(sector.members)
            if m != coordinator and m != sector.monitor and nodes[m].eligible
        ]
        if not candidates:
            return sector.coordinator

        def key(uid):
            hops = neighbor_map.hops_between(uid, coordinator)
            return (math.inf if hops is None else hops, uid == sector.coordinator)

        head = pick_best(candidates, key, self.rng)
        nodes[head].budget.disable()
        return head

    # Formation

    def form_clusters(self, state):
        nodes = state.nodes
        clusters = self.select_cluster_coordinators(nodes, state.neighbor_map)
        coverage = {c.id: set(c.members) for c in clusters}
        coordinators = {c.coordinator: c for c in clusters}
        for cluster in clusters:
            cluster.members = {cluster.coordinator}

        for uid in sorted(nodes):
            node = nodes[uid]
            if node.kind is NodeKind.SINK or not node.eligible:
                continue
            if uid in coordinators:
                node.cluster_id = coordinators[uid].id
                node.role = RoleType.CLUSTER_COORDINATOR
                continue
            candidates = [c for c in clusters if uid in coverage[c.id]]
            chosen = self.assign_membership(uid, candidates, nodes)
            if chosen is None:
                node.unassigned = True
                continue
            clusters[chosen].members.add(uid)
            node.cluster_id = chosen

        state.clusters = {c.id: c for c in clusters}
        for cluster in clusters:
            self.on_control(cluster.coordinator)
            for member in sorted(cluster.members - {cluster.coordinator}):
                self.on_control(member, cluster.coordinator)
            state.record(LogType.ELECTION, f"cluster:{cluster.id}",
                         f"coordinator={cluster.coordinator} members={len(cluster.members)}")
        logger.info(f"Formed {len(clusters)} clusters")
        return state.clusters

    def form_sectors(self, state):
        for cluster_id in sorted(state.clusters):
            self._form_cluster_sectors(state.clusters[cluster_id], state, strict=True)
        logger.info(f"Formed {len(state.sectors)} sectors in {self.scenario.mode.value} mode")
        return state.sectors

    def _form_cluster_sectors(self, cluster: Cluster, state, strict: bool):
        nodes = state.nodes
        for sector_id in cluster.sector_ids:
            state.sectors.pop(sector_id, None)
            state.schedules.pop(sector_id, None)
        cluster.sector_ids = []

        members = sorted(m for m in cluster.members if m != cluster.coordinator)
        for member in members:
            nodes[member].sector_id = None
            nodes[member].role = RoleType.LEAF_NODE

        if self.scenario.mode is SimulationMode.NON_SECTORIZED:
            coordinator = cluster.coordinator
            sectors = [Sector(
                id=self._allocate_sector_id(), cluster_id=cluster.id, coordinator=coordinator,
                monitor=coordinator, forwarding_head=coordinator, monitor_fallback=True, pseudo=True,
                members={m for m in members if nodes[m].eligible},
            )]
        else:
            sectors = self.select_sector_coordinators(cluster, nodes, state.neighbor_map)
            for sector in sectors:
                sector.monitor, sector.monitor_fallback = self.select_sector_monitor(sector, cluster, nodes)
                sector.forwarding_head = self.select_forwarding_sector_head(
                    sector, cluster, nodes, state.neighbor_map)

        for sector in sectors:
            state.sectors[sector.id] = sector
            cluster.sector_ids.append(sector.id)
            self._install_sector(sector, state, strict)
            self._announce_sector(sector)
            state.record(
                LogType.ELECTION, f"sector:{sector.id}",
                f"cluster={cluster.id} sc={sector.coordinator} sm={sector.monitor} "
                f"fsh={sector.forwarding_head} members={len(sector.members)}",
            )

    def _install_sector(self, sector: Sector, state, strict: bool):
        nodes = state.nodes
        for member in sorted(sector.members):
            nodes[member].sector_id = sector.id
            nodes[member].cluster_id = sector.cluster_id
            nodes[member].role = RoleType.LEAF_NODE

        if not sector.pseudo:
            nodes[sector.coordinator].role = RoleType.SECTOR_COORDINATOR
            if not sector.monitor_fallback:
                nodes[sector.monitor].role = RoleType.SECTOR_MONITOR
            head = sector.forwarding_head
            if head not in (sector.coordinator, sector.monitor):
                nodes[head].role = RoleType.FORWARDING_SECTOR_HEAD

        leaves = [m for m in sorted(sector.members)
                  if nodes[m].role is RoleType.LEAF_NODE and nodes[m].eligible]
        slots = self.scenario.slots
        schedule, dropped = SlotSchedule.build(
            leaves,
            slots_per_leaf=slots.slots_per_leaf,
            frame_length=slots.frame_length,
            slot_capacity=slots.slot_capacity,
            epoch_length=self.scenario.duty.epoch_length,
            strict=strict,
        )
        if dropped:
            logger.warning(f"Sector {sector.id}: {len(dropped)} leaves do not fit the frame and stay silent")
        state.schedules[sector.id] = schedule

    def _announce_sector(self, sector: Sector):
        if sector.pseudo:
            self.on_control(sector.coordinator)
            return
        self.on_control(sector.coordinator)
        for member in sorted(sector.members - {sector.coordinator}):
            self.on_control(member, sector.coordinator)
        self.on_control(sector.monitor)
        self.on_control(sector.forwarding_head)
        self.on_control(sector.coordinator)

    # Backups

    def refresh_backups(self, state, epoch: int):
        backups = state.repo(RepoType.BACKUP)
        for cluster_id in sorted(state.clusters):
            cluster = state.clusters[cluster_id]
            sectors = tuple(
                (sid, tuple(sorted(state.sectors[sid].members))) for sid in cluster.sector_ids
            )
            for holder in (cluster.coordinator, SINK_ID):
                snapshot = ClusterSnapshot(
                    cluster_id=cluster.id, holder=holder, coordinator=cluster.coordinator,
                    members=tuple(sorted(cluster.members)), sectors=sectors, epoch=epoch,
                )
                backups.save(snapshot)
                cluster.backup = snapshot

    # Reconfiguration

    def reconfigure(self, scope: Scope, trigger, state) -> bool:
        """Re-run the smallest affected election. Returns False when the scope degraded."""
        state.record(LogType.RECONFIGURE, scope, trigger.value)
        logger.info(f"Reconfiguring {scope} after {trigger.value}")
        if scope.kind is ScopeKind.SECTOR:
            sector = state.sectors.get(scope.identifier)
            if sector is None:
                return False
            if sector.pseudo:
                return self._reconfigure_cluster(state.clusters[sector.cluster_id], state)
            return self._reconfigure_sector(sector, state)
        return self._reconfigure_cluster(state.clusters[scope.identifier], state)

    def _degrade_sector(self, sector: Sector, state, reason: str):
        sector.degraded = True
        state.schedules[sector.id] = SlotSchedule(
            frame_length=self.scenario.slots.frame_length,
            slot_capacity=self.scenario.slots.slot_capacity,
            epoch_length=self.scenario.duty.epoch_length,
        )
        state.record(LogType.DEGRADED, f"sector:{sector.id}", reason)
        logger.warning(f"Sector {sector.id} degraded: {reason}")

    def _reconfigure_sector(self, sector: Sector, state) -> bool:
        nodes = state.nodes
        cluster = state.clusters[sector.cluster_id]
        followers = [m for m in sorted(sector.members) if nodes[m].is_follower and nodes[m].eligible]
        if not followers:
            self._degrade_sector(sector, state, "no eligible sector coordinator")
            return False

        def key(uid):
            hops = state.neighbor_map.hops_between(uid, cluster.coordinator)
            return (-nodes[uid].ledger.residual_energy, math.inf if hops is None else hops)

        sector.coordinator = pick_best(followers, key, self.rng)
        sector.monitor, sector.monitor_fallback = self.select_sector_monitor(sector, cluster, nodes)
        sector.forwarding_head = self.select_forwarding_sector_head(sector, cluster, nodes, state.neighbor_map)
        self._install_sector(sector, state, strict=False)
        self._announce_sector(sector)
        state.record(
            LogType.ELECTION, f"sector:{sector.id}",
            f"cluster={cluster.id} sc={sector.coordinator} sm={sector.monitor} fsh={sector.forwarding_head}",
        )
        return True

    def _reconfigure_cluster(self, cluster: Cluster, state) -> bool:
        nodes = state.nodes
        neighbor_map = state.neighbor_map
        backup = state.repo(RepoType.BACKUP).get_one({'cluster_id': cluster.id, 'holder': SINK_ID})
        roster = sorted(set(backup.members) | cluster.members) if backup else sorted(cluster.members)

        for member in roster:
            if not nodes[member].eligible:
                nodes[member].sector_id = None
                nodes[member].role = RoleType.LEAF_NODE

        members = [m for m in roster if nodes[m].eligible]
        leaders = [m for m in members if nodes[m].is_leader]
        if not leaders:
            cluster.degraded = True
            for sector_id in cluster.sector_ids:
                self._degrade_sector(state.sectors[sector_id], state, "cluster has no eligible coordinator")
            state.record(LogType.DEGRADED, f"cluster:{cluster.id}", "no eligible cluster coordinator")
            logger.warning(f"Cluster {cluster.id} degraded: no eligible leader")
            return False

        # leaders with detection power left are preferred
        coordinator = pick_best(
            leaders,
            lambda uid: (not nodes[uid].budget.active, -nodes[uid].ledger.residual_energy,
                         neighbor_map.hop_distance(uid)),
            self.rng,
        )
        cluster.coordinator = coordinator
        kept = {m for m in members if m == coordinator or neighbor_map.are_neighbors(m, coordinator)}
        cluster.members = kept
        nodes[coordinator].role = RoleType.CLUSTER_COORDINATOR
        nodes[coordinator].cluster_id = cluster.id
        nodes[coordinator].sector_id = None

        self._form_cluster_sectors(cluster, state, strict=False)
        for member in members:
            if member not in kept:
                self._rehome(member, cluster, state)

        self.on_control(coordinator)
        for member in sorted(kept - {coordinator}):
            self.on_control(member, coordinator)
        state.record(LogType.ELECTION, f"cluster:{cluster.id}",
                     f"coordinator={coordinator} members={len(kept)}")
        return True

    def _rehome(self, member: int, origin: Cluster, state):
        """Move a node the new coordinator cannot hear into a neighbouring cluster, if any."""
        nodes = state.nodes
        node = nodes[member]
        candidates = [
            c for cid, c in sorted(state.clusters.items())
            if cid != origin.id and not c.degraded and nodes[c.coordinator].eligible
            and state.neighbor_map.are_neighbors(member, c.coordinator)
        ]
        chosen = self.assign_membership(member, candidates, nodes)
        node.role = RoleType.LEAF_NODE
        node.sector_id = None
        if chosen is None:
            node.unassigned = True
            node.cluster_id = None
            return

        cluster = state.clusters[chosen]
        cluster.members.add(member)
        node.cluster_id = chosen
        sectors = [state.sectors[sid] for sid in cluster.sector_ids if not state.sectors[sid].degraded]
        if not sectors:
            return
        strengths = {s.id: self._strength(nodes, member, s.coordinator) for s in sectors}
        target = state.sectors[pick_best(list(strengths), lambda sid: -strengths[sid], self.rng)]
        target.members.add(member)
        self.on_control(member, target.coordinator)
        self._install_sector(target, state, strict=False)
