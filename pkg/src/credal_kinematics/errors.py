"""Exception hierarchy shared by every module."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class NullConditioningError(DomainError):
    """Conditioning on an event of probability (or lower probability) zero."""

    def __init__(self, message, *, block=None, member=None):
        super().__init__(message)
        self.block = block
        self.member = member


class NotARefinementError(DomainError):
    """A partition was expected to refine another one and does not."""


class ScenarioError(DomainError):
    """A scenario file failed validation; ``field`` names the offending entry."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
