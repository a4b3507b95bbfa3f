"""Error types raised by the engine, each carrying the process exit code."""


class AbmodError(Exception):
    """Base class for all engine errors."""

    exit_code = 3


class UsageError(AbmodError):
    """Invalid command line or request arguments."""

    exit_code = 1


class FamilyParseError(AbmodError):
    """A family document or polynomial expression could not be parsed."""

    exit_code = 1

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class UnsupportedFamilyError(AbmodError):
    """The family has no finite staircase over Q(t), or no critical point at the origin."""

    exit_code = 2


class InternalCapError(AbmodError):
    """A computation exceeded one of its configured caps."""

    exit_code = 3


class FixtureFailure(AbmodError):
    """At least one reference identity did not re-derive."""

    exit_code = 4


class PoleError(AbmodError):
    """A coefficient has a pole at the requested parameter value."""


class NotInImageError(AbmodError):
    """b^-1 was applied to a class with nonzero b^0 part."""


class NotInPError(AbmodError):
    """b^-1 nabla was applied to a class whose nabla is not divisible by b."""


class ContextMismatchError(AbmodError):
    """A check was run on a family it does not apply to."""


class NonIsolatedError(AbmodError):
    """A polynomial expected to have an isolated singularity does not."""

    exit_code = 2
