from common.repositories.base import BaseRepository
from common.models.adjudication import ForwardingEntry


class ForwardingRepository(BaseRepository):
    MODEL = ForwardingEntry
    KEY = 'packet_id'
