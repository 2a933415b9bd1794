"""Exception types raised across the package."""


class CVBQCError(Exception):
    """Base class for all package errors."""


class NonGaussianWord(CVBQCError):
    """A word containing a cubic phase gate was given to a Gaussian-only routine."""


class Undecidable(CVBQCError):
    """Two non-Gaussian words could not be compared with the available rewrite rules."""


class DomainError(CVBQCError, ValueError):
    pass


class CutoffTooSmall(CVBQCError):
    """Truncation leakage exceeded the configured budget."""


class UnsupportedObservable(CVBQCError):
    pass


class ShapeMismatch(CVBQCError, ValueError):
    pass


class NoEmbedding(CVBQCError):
    """The logical graph is not an induced subgraph of the host graph."""


class CycleError(CVBQCError):
    pass


class ProtocolOrderViolation(CVBQCError):
    pass


class PostSelectionStarvation(CVBQCError):
    """The post-selection window accepted too small a fraction of outcomes."""


class ConfigError(CVBQCError, ValueError):
    """Invalid experiment configuration or program file.

    ``field`` names the offending entry so the CLI can report it.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class CapacityError(CVBQCError):
    """The requested simulation exceeds what the backend can hold."""
