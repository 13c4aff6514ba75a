"""Exception types shared across the package."""


class TopicRecError(Exception):
    """Base class for all package errors."""


class ParseError(TopicRecError):
    """An input file could not be parsed (bad syntax, missing fields)."""


class ValidationError(TopicRecError):
    """Parsed data violates a documented invariant."""


class ModelFormatError(TopicRecError):
    """A persisted model file is corrupt or has an unsupported version."""
