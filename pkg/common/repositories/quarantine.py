from common.repositories.base import BaseRepository
from common.models.adjudication import QuarantineEntry


class QuarantineRepository(BaseRepository):
    MODEL = QuarantineEntry
    KEY = 'node_id'

    def is_quarantined(self, node_id) -> bool:
        return node_id is not None and self.exists({'node_id': node_id})
