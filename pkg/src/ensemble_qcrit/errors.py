"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResolutionTooCoarseError(DomainError):
    """The measurement resolution cannot distinguish any outcome for this ensemble size."""


class ResourceLimitError(RuntimeError):
    """A request exceeds an implementation resource bound (e.g. state-vector memory)."""
