"""Exception hierarchy shared by every bellga module."""


class BellGAError(Exception):
    """Base class for all bellga errors."""


class InvalidInputError(BellGAError, ValueError):
    """Raised for non-finite coefficients, non-unit directions, bad arguments."""


class ContractViolation(BellGAError):
    """Raised when inputs are individually valid but mutually inconsistent."""


class ResourceLimitError(BellGAError):
    """Raised when a requested enumeration exceeds its configured cap."""
