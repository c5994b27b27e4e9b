import math

import networkx as nx
import numpy as np

from common.app_logger import get_logger
from common.helpers.exceptions import ConfigError
from common.models import (
    DetectionBudget,
    EnergyLedger,
    FieldConfig,
    NeighborMap,
    Node,
    NodeId,
    NodeKind,
    Placement,
    Position,
    RadioModel,
    RoleType,
)

logger = get_logger(__name__)

SINK_ID = 0
RANGE_EPSILON = 1e-9


def signal_strength(a: Position, b: Position, radio: RadioModel) -> float:
    """Inverse-power path loss. Co-located positions saturate at reference_strength."""
    distance = a.distance_to(b)
    if distance <= 0:
        return radio.reference_strength
    return radio.reference_strength / distance ** radio.signal_exponent


def ensure_deployable(field: FieldConfig):
    if field.width <= 0 or field.height <= 0:
        raise ConfigError(f"field dimensions must be positive, got {field.width} x {field.height}")
    if field.follower_count == 0:
        raise ConfigError("follower_count must be at least 1")
    x, y = field.sink_position
    if not (0 <= x <= field.width and 0 <= y <= field.height):
        raise ConfigError(f"sink_position {field.sink_position} lies outside the field")


def _grid_positions(count: int, field: FieldConfig, rng: np.random.Generator) -> np.ndarray:
    columns = max(1, math.ceil(math.sqrt(count)))
    rows = max(1, math.ceil(count / columns))
    xs = (np.arange(columns) + 0.5) * field.width / columns
    ys = (np.arange(rows) + 0.5) * field.height / rows
    cells = np.array([(x, y) for y in ys for x in xs])[:count]
    # Leaders would otherwise all sit in the first row.
    return cells[rng.permutation(count)]


class TopologyService:

    def __init__(self, scenario):
        self.scenario = scenario
        self.field = scenario.field
        self.radio = scenario.radio

    def _budget_for(self, kind: NodeKind) -> DetectionBudget:
        if kind is not NodeKind.LEADER:
            return DetectionBudget.none()
        budget = self.scenario.budget
        return DetectionBudget(dp=budget.initial_dp, dp_min=budget.dp_min,
                               cost_per_evaluation=budget.cost_per_evaluation)

    def _capacity_for(self, kind: NodeKind) -> float:
        return {
            NodeKind.LEADER: self.field.leader_energy,
            NodeKind.FOLLOWER: self.field.follower_energy,
            NodeKind.SINK: self.field.sink_energy,
        }[kind]

    def deploy_nodes(self, rng_seed) -> list:
        """
        Sink is NodeId 0, leaders 1..L, followers L+1..L+F. `rng_seed` may be an int or a
        numpy Generator; positions are a pure function of it.
        """
        ensure_deployable(self.field)
        rng = np.random.default_rng(rng_seed)
        count = self.field.leader_count + self.field.follower_count

        if self.field.placement is Placement.GRID:
            coords = _grid_positions(count, self.field, rng)
        else:
            coords = np.column_stack((
                rng.uniform(0.0, self.field.width, size=count),
                rng.uniform(0.0, self.field.height, size=count),
            ))

        kinds = [NodeKind.SINK]
        kinds += [NodeKind.LEADER] * self.field.leader_count
        kinds += [NodeKind.FOLLOWER] * self.field.follower_count
        positions = [Position(*map(float, self.field.sink_position))]
        positions += [Position(float(x), float(y)) for x, y in coords]

        nodes = []
        for uid, (kind, position) in enumerate(zip(kinds, positions)):
            nodes.append(Node(
                node_id=NodeId(uid, position),
                kind=kind,
                ledger=EnergyLedger.full(self._capacity_for(kind), self.scenario.energy.standard_lifetime),
                budget=self._budget_for(kind),
                role=RoleType.SINK_NODE if kind is NodeKind.SINK else RoleType.LEAF_NODE,
            ))

        logger.info(f"Deployed {len(nodes)} nodes ({self.field.leader_count} leaders, "
                    f"{self.field.follower_count} followers) on {self.field.width}x{self.field.height} m")
        return nodes

    def neighbor_discovery(self, nodes) -> NeighborMap:
        nodes = sorted(nodes, key=lambda n: n.uid)
        if not nodes:
            raise ConfigError("neighbor discovery needs at least one node")
        sink = next((n.uid for n in nodes if n.kind is NodeKind.SINK), nodes[0].uid)

        ids = [n.uid for n in nodes]
        coords = np.array([(n.position.x, n.position.y) for n in nodes])
        deltas = coords[:, None, :] - coords[None, :, :]
        distances = np.sqrt((deltas ** 2).sum(axis=-1))
        within = distances <= self.radio.comm_range + RANGE_EPSILON

        graph = nx.Graph()
        graph.add_nodes_from(ids)
        rows, cols = np.nonzero(np.triu(within, k=1))
        graph.add_edges_from((ids[i], ids[j]) for i, j in zip(rows.tolist(), cols.tolist()))

        neighbor_map = NeighborMap(graph, sink)
        for node in nodes:
            node.reachable = neighbor_map.is_reachable(node.uid)
        if neighbor_map.unreachable:
            logger.warning(f"Unreachable nodes excluded from clustering: {neighbor_map.unreachable}")
        return neighbor_map
