"""Exception hierarchy shared by all swarmstate modules."""


class SwarmStateError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SwarmStateError):
    """A value violates a mathematical or structural precondition."""


class ConfigError(DomainError):
    """A simulation or scenario configuration field is invalid."""


class ParseError(SwarmStateError):
    """An input file could not be parsed; message carries the line number."""
