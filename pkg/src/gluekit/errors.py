"""Exception hierarchy shared by all gluekit modules."""


class GlueError(Exception):
    """Base class for all gluekit errors."""


class ValidationError(GlueError):
    """Raised when an input object violates a structural invariant."""


class UnsupportedFeature(GlueError):
    """Raised for features that are accepted syntactically but not implemented
    (scheme verification)."""


class FalsificationError(GlueError):
    """Raised when an executed theorem conclusion fails on validated input.

    This must never fire on valid data: it is the falsification channel,
    mapped to exit code 3 by the CLI.
    """
