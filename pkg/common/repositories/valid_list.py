from common.repositories.base import BaseRepository
from common.models.adjudication import ValidEntry


class ValidListRepository(BaseRepository):
    MODEL = ValidEntry
    KEY = 'packet_id'
