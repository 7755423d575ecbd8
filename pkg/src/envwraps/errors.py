"""Exception types raised by the library.

Every error raised on purpose derives from :class:`EnvwrapsError` so callers can
catch the whole family at an API boundary (the CLI maps build-time errors to
exit code 1 and run-time errors to exit code 2).
"""

__all__ = [
    "EnvwrapsError",
    "PreconditionFailed",
    "InvalidParam",
    "ShapeMismatch",
    "SpaceInferenceFailed",
    "ContainmentViolation",
    "NonFiniteReward",
    "MalformedAgentId",
    "UnknownEnv",
    "ParseError",
    "ValidationError",
    "ResetNeeded",
    "RuntimeFailure",
]


class EnvwrapsError(Exception):
    """Base class for all library errors."""


class PreconditionFailed(EnvwrapsError):
    """A wrapper was applied to an env whose spaces it cannot handle."""


class InvalidParam(EnvwrapsError):
    """A wrapper or env parameter is out of its documented range."""


class ShapeMismatch(EnvwrapsError):
    """A tensor's shape is incompatible with the requested operation."""


class SpaceInferenceFailed(EnvwrapsError):
    """Automatic output-space inference produced inconsistent results."""


class ContainmentViolation(EnvwrapsError):
    """A value crossed a boundary it was declared to stay inside."""


class NonFiniteReward(EnvwrapsError):
    """A reward transform produced NaN or an infinity."""


class MalformedAgentId(EnvwrapsError):
    """An agent id does not follow the expected "<type>_<n>" form."""


class UnknownEnv(EnvwrapsError):
    """No reference environment is registered under the given name."""


class ParseError(EnvwrapsError):
    """A config document is not valid JSON."""


class ValidationError(EnvwrapsError):
    """A config document is valid JSON but violates the config schema."""


class ResetNeeded(EnvwrapsError):
    """step() was called after done=true without an intervening reset()."""


class RuntimeFailure(EnvwrapsError):
    """A contract violation detected while a benchmark run was stepping."""
