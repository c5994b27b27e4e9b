from common.repositories.base import BaseRepository
from common.models.detection import InsomniaVerdict


class VerdictRepository(BaseRepository):
    """Knowledge base: every SIDS verdict, in the order it was issued."""
    MODEL = InsomniaVerdict

    def __init__(self):
        super().__init__()
        self._by_node = {}

    def save(self, instance):
        instance = super().save(instance)
        self._by_node.setdefault(instance.node, []).append(instance)
        return instance

    def history_of(self, node: int) -> list:
        return list(self._by_node.get(node, ()))
