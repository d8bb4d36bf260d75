"""Exception types raised across the package."""


class DynrouteError(Exception):
    pass


class ParameterError(DynrouteError, ValueError):
    """An argument is outside its documented range."""


class GenerationFailure(DynrouteError, RuntimeError):
    """A random walk exhausted its restart budget."""


class InvalidChromosome(DynrouteError, ValueError):
    pass


class TopologyParseError(DynrouteError, ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


class TopologyValidationError(TopologyParseError):
    """Well-formed line whose values violate a topology invariant."""


class OracleRefusal(DynrouteError, ValueError):
    """Brute-force enumeration refused because the graph is too large."""


class ExperimentInvariantError(DynrouteError, RuntimeError):
    pass


class ConfigError(DynrouteError, ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
