"""Exception types raised by skillnet."""


class SkillNetError(Exception):
    """Base class for all package errors."""


class LexiconError(SkillNetError):
    pass


class CorpusError(SkillNetError):
    pass


class GraphError(SkillNetError):
    """Raised when an operation needs edges the graph does not have."""


class ConvergenceError(SkillNetError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigError(SkillNetError):
    pass
