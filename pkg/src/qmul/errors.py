"""Exception types shared across the package."""


class QmulError(Exception):
    """Base class for all qmul errors."""


class DomainError(QmulError, ValueError):
    """An argument is outside the operation's domain (bit-width 0, value too large)."""


class StructuralError(QmulError, ValueError):
    """A circuit, gate, layout or plan is malformed or mismatched."""


class CapacityError(QmulError):
    """A dense simulation would exceed the configured qubit limit."""
