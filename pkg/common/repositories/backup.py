from common.repositories.base import BaseRepository
from common.models.hierarchy import ClusterSnapshot


class BackupRepository(BaseRepository):
    MODEL = ClusterSnapshot
    KEY = ('cluster_id', 'holder')
