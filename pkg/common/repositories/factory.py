from enum import Enum, auto

from common.repositories import (
    QuarantineRepository,
    ForwardingRepository,
    ValidListRepository,
    ReputationRepository,
    VerdictRepository,
    BackupRepository,
)


class RepoType(Enum):

    @staticmethod
    def _generate_next_value_(name, start, count, last_values):
        """Method for auto-generating Enum values"""
        return name.lower()

    QUARANTINE = auto()
    FORWARDING = auto()
    VALID_LIST = auto()
    REPUTATION = auto()
    VERDICT = auto()
    BACKUP = auto()


class RepositoryFactory:
    """Builds the per-run registries. Each call returns a fresh, empty repository."""

    def __init__(self, scenario):
        self.scenario = scenario

    _repositories = {
        RepoType.QUARANTINE: QuarantineRepository,
        RepoType.FORWARDING: ForwardingRepository,
        RepoType.VALID_LIST: ValidListRepository,
        RepoType.REPUTATION: ReputationRepository,
        RepoType.VERDICT: VerdictRepository,
        RepoType.BACKUP: BackupRepository,
    }

    def get_repository(self, repo_type: RepoType):
        repo_class = self._repositories.get(repo_type)

        if repo_class is ReputationRepository:
            return repo_class(self.scenario.reputation.initial)
        if repo_class:
            return repo_class()

        raise ValueError(f"No repository found with the name '{repo_type}'")

    def get_all(self) -> dict:
        return {repo_type: self.get_repository(repo_type) for repo_type in RepoType}
