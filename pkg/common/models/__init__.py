from .energy import EnergyMode, EnergyProfile, DutyCycle, EnergyLedger, EpochUsage
from .hierarchy import (
    RoleType,
    Role,
    ReconfigTrigger,
    Scope,
    ScopeKind,
    ClusterSnapshot,
    Cluster,
    Sector,
)
from .adjudication import (
    Ruling,
    RejectReason,
    ValidationResult,
    QuarantineEntry,
    ForwardingEntry,
    ValidEntry,
    DetectionBudget,
    DetectionCounters,
)
from .node import NodeKind, Position, NodeId, RadioModel, Node, NeighborMap
from .detection import (
    DetectionThresholds,
    CaseEvidence,
    InsomniaVerdict,
    ReputationRecord,
    AcquisitionVector,
    LedgerView,
    NormalProfile,
)
from .simulation import (
    PacketKind,
    Packet,
    SlotSchedule,
    Phase,
    PhaseState,
    MetricsFrame,
    EventType,
    SimEvent,
    LogType,
    LogEntry,
    RunResult,
)
from .scenario import (
    SimulationMode,
    IdsMode,
    Placement,
    Archetype,
    FieldConfig,
    EnergyConfig,
    TrafficConfig,
    SlotConfig,
    ThresholdConfig,
    ReputationConfig,
    BudgetConfig,
    ReconfigurationConfig,
    AttackerSpec,
    ScenarioConfig,
)
from .state import NetworkState
