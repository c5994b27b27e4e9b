from common.repositories.base import BaseRepository
from common.models.detection import ReputationRecord


class ReputationRepository(BaseRepository):
    MODEL = ReputationRecord
    KEY = 'node'

    def __init__(self, initial_reputation: float = 1.0):
        super().__init__()
        self.initial_reputation = initial_reputation

    def get_record(self, node: int) -> ReputationRecord:
        record = self.get_one({'node': node})
        if record is None:
            record = ReputationRecord(node=node, reputation=self.initial_reputation)
        return record
