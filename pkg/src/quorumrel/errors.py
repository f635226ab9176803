"""Exception types shared across the library."""


class AnalysisError(Exception):
    """Base class for errors raised by this package."""


class ProfileError(AnalysisError):
    """A fault profile violates its probability constraints."""


class ModelMismatchError(AnalysisError):
    """Input is incompatible with the protocol's fault model."""


class CapacityError(AnalysisError):
    """The instance is too large for exhaustive enumeration."""


class ConstraintError(AnalysisError):
    """A quorum membership constraint cannot be satisfied."""


class ConfigurationError(AnalysisError):
    """A quorum rule produced invalid sizes for some cluster size."""


class SchemaError(AnalysisError):
    """An input document does not match the expected schema."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason


class UnsupportedProtocolError(SchemaError):
    """The input names a protocol this package does not analyze."""


class ValidationError(AnalysisError):
    """A deployment failed semantic validation."""

    def __init__(self, issues) -> None:
        self.issues = tuple(issues)
        super().__init__("; ".join(str(issue) for issue in self.issues))
