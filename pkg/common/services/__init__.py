from .topology import TopologyService
from .energy import EnergyService
from .hierarchy import HierarchyService
from .detection import DetectionService
from .adjudication import AdjudicationService
from .attack import AttackService
from .simulation import SimulationService
from .report import ReportService
from .experiment import ExperimentService
