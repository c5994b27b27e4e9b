

class ConfigError(Exception):
    pass


class ElectionError(Exception):
    pass


class PhaseError(Exception):
    pass


class VerdictUnavailable(Exception):
    pass


class AdjudicationUnavailable(Exception):
    pass


class SimulationError(Exception):
    pass
