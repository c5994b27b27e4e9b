from dataclasses import dataclass
from typing import Optional

from common.app_logger import get_logger
from common.helpers.exceptions import ConfigError
from common.models import Archetype, AttackerSpec, LogType, PacketKind, RoleType

logger = get_logger(__name__)


@dataclass(frozen=True)
class Emission:
    time: float
    slot: int
    kind: PacketKind
    target: Optional[int] = None


def _spread(schedule, epoch: int, slot: int, count: int, kind: PacketKind, target=None) -> list:
    """`count` transmissions evenly spaced strictly inside one slot."""
    start = schedule.slot_start(epoch, slot)
    step = schedule.slot_duration / (count + 1)
    return [Emission(time=start + (i + 1) * step, slot=slot, kind=kind, target=target) for i in range(count)]


def _foreign_slots(schedule, node: int) -> list:
    """Frame slots the node does not own, starting right after its own window."""
    owned = schedule.slots_of(node)
    frame = schedule.frame_length
    begin = (max(owned) + 1) if owned else 0
    ordered = [(begin + offset) % frame for offset in range(frame)]
    return [slot for slot in ordered if slot not in owned]


class AttackBehavior:
    """One attacker program. Subclasses declare the archetype they implement."""
    ARCHETYPE = None
    REPLACES_TRAFFIC = False

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        if cls.ARCHETYPE is None:
            raise TypeError(f"Subclasses of {cls.__name__} must define the ARCHETYPE attribute.")

    def emissions(self, node: int, spec: AttackerSpec, epoch: int, state, schedule) -> list:
        return []

    def reported_residual(self, spec: AttackerSpec, node) -> float:
        return node.ledger.residual_energy


class Flooder(AttackBehavior):
    ARCHETYPE = Archetype.FLOODER
    REPLACES_TRAFFIC = True

    def emissions(self, node, spec, epoch, state, schedule):
        bursts = []
        for slot in schedule.slots_of(node):
            bursts += _spread(schedule, epoch, slot, spec.packets_per_burst, PacketKind.DATA)
        return bursts


class UnslottedSender(AttackBehavior):
    ARCHETYPE = Archetype.UNSLOTTED_SENDER

    def emissions(self, node, spec, epoch, state, schedule):
        foreign = _foreign_slots(schedule, node)
        if not foreign:
            return []
        bursts = []
        for index in range(spec.packets_per_burst):
            bursts += _spread(schedule, epoch, foreign[index % len(foreign)], 1, PacketKind.DATA)
        return sorted(bursts, key=lambda e: e.time)


class WakeInjector(AttackBehavior):
    ARCHETYPE = Archetype.WAKE_INJECTOR

    def emissions(self, node, spec, epoch, state, schedule):
        foreign = _foreign_slots(schedule, node)
        victims = victims_of(node, spec, state)
        if not foreign or not victims:
            return []
        bursts = []
        for victim in victims:
            bursts += [(victim, i) for i in range(spec.packets_per_burst)]
        frames = _spread(schedule, epoch, foreign[0], len(bursts), PacketKind.WAKE)
        return [Emission(time=f.time, slot=f.slot, kind=f.kind, target=victim)
                for f, (victim, _) in zip(frames, bursts)]


class EnergySpoofer(AttackBehavior):
    ARCHETYPE = Archetype.ENERGY_SPOOFER

    def reported_residual(self, spec, node):
        return spec.intensity * node.ledger.residual_energy


def victims_of(node: int, spec: AttackerSpec, state) -> list:
    if spec.victims is not None:
        return [v for v in spec.victims if v in state.nodes and state.nodes[v].alive]
    sector = state.sector_of(node)
    if sector is None:
        return []
    return [
        leaf for leaf in state.schedules[sector.id].leaves
        if leaf != node and state.neighbor_map.are_neighbors(node, leaf) and state.nodes[leaf].alive
    ]


class AttackService:

    _behaviors = {
        Archetype.FLOODER: Flooder,
        Archetype.UNSLOTTED_SENDER: UnslottedSender,
        Archetype.WAKE_INJECTOR: WakeInjector,
        Archetype.ENERGY_SPOOFER: EnergySpoofer,
    }

    def __init__(self, scenario, rng):
        self.scenario = scenario
        self.rng = rng

    def get_behavior(self, archetype: Archetype) -> AttackBehavior:
        behavior_class = self._behaviors.get(archetype)
        if behavior_class:
            return behavior_class()
        raise ValueError(f"No attack behavior found with the name '{archetype}'")

    def assign_attackers(self, state) -> dict:
        """
        Resolve every spec to a node. Specs without a node get a leaf drawn from the
        attack generator; wake injectors prefer leaves that have leaf neighbours.
        """
        nodes = state.nodes
        taken = {spec.node for spec in self.scenario.attackers if spec.node is not None}
        resolved = {}
        for spec in self.scenario.attackers:
            if spec.node is not None:
                if spec.node not in nodes or not nodes[spec.node].is_follower:
                    raise ConfigError(f"attacker node {spec.node} is not a follower")
                resolved[spec.node] = spec
                continue
            leaves = sorted(
                uid for sid in sorted(state.schedules) for uid in state.schedules[sid].leaves
                if nodes[uid].is_follower and uid not in taken
            )
            pool = leaves
            if spec.archetype is Archetype.WAKE_INJECTOR:
                pool = [uid for uid in leaves if victims_of(uid, spec, state)] or leaves
            if not pool:
                raise ConfigError(f"no leaf is left to host a {spec.archetype.value} attacker")
            chosen = pool[int(self.rng.integers(len(pool)))]
            taken.add(chosen)
            resolved[chosen] = spec.model_copy(update={'node': chosen})

        for uid in sorted(resolved):
            spec = resolved[uid]
            state.record(LogType.ATTACK, uid, f"archetype={spec.archetype.value} intensity={spec.intensity} "
                                              f"start={spec.start_epoch} end={spec.end_epoch}")
        return dict(sorted(resolved.items()))

    def is_active(self, spec: AttackerSpec, epoch: int, state) -> bool:
        node = state.nodes[spec.node]
        return (
            spec.active_at(epoch)
            and node.alive
            and not node.quarantined
            and node.role is RoleType.LEAF_NODE
            and state.sector_of(spec.node) is not None
        )

    def suppresses_traffic(self, spec: AttackerSpec, epoch: int, state) -> bool:
        return self.is_active(spec, epoch, state) and self.get_behavior(spec.archetype).REPLACES_TRAFFIC

    def act(self, spec: AttackerSpec, epoch: int, state) -> list:
        if not self.is_active(spec, epoch, state):
            if state.nodes[spec.node].quarantined and spec.active_at(epoch):
                logger.debug(f"Attacker {spec.node} is quarantined and emits nothing")
            return []
        sector = state.sector_of(spec.node)
        schedule = state.schedules[sector.id]
        return self.get_behavior(spec.archetype).emissions(spec.node, spec, epoch, state, schedule)

    def reported_residual(self, node, epoch: int, state) -> float:
        spec = state.attackers.get(node.uid)
        if spec is None or not self.is_active(spec, epoch, state):
            return node.ledger.residual_energy
        return self.get_behavior(spec.archetype).reported_residual(spec, node)
