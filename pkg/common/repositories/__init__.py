from .quarantine import QuarantineRepository
from .forwarding import ForwardingRepository
from .valid_list import ValidListRepository
from .reputation import ReputationRepository
from .verdict import VerdictRepository
from .backup import BackupRepository
