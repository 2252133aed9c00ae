"""Exception types shared across the package."""


class BoxlabError(Exception):
    """Base class for every error raised by this library."""


class StructuralError(BoxlabError):
    """Input so malformed that invariants cannot even be checked.

    Examples: mismatched array lengths, transform entries outside the point
    range, unparseable rational strings, invalid JSON payloads.
    """


class InvariantViolationError(BoxlabError):
    """Well-formed data that breaks a required invariant."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = list(report or [])


class SupportCapError(BoxlabError):
    """A sparse construction would exceed the configured entry cap."""

    def __init__(self, needed: int, cap: int):
        super().__init__(
            f"sparse support would need {needed} entries, exceeding the cap of {cap}"
        )
        self.needed = needed
        self.cap = cap


class PreconditionError(BoxlabError):
    """A documented operation precondition does not hold for these inputs."""
