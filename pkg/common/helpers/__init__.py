from .exceptions import (
    ConfigError,
    ElectionError,
    PhaseError,
    VerdictUnavailable,
    AdjudicationUnavailable,
    SimulationError,
)
from .number_utils import format_fixed, force_number_str
