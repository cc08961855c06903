"""Exception types shared across the toolkit."""


class XpkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(XpkitError):
    """A value lies outside the declared feature domain or class set."""


class ModelError(XpkitError):
    """A classifier violates its structural invariants."""


class ContractError(XpkitError):
    """An operation was called with its precondition violated."""


class ResourceLimitError(XpkitError):
    """An exhaustive computation would exceed the configured space guard."""
