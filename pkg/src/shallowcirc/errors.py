"""Exception types shared across the package."""


class ShallowCircError(Exception):
    """Base class for all package errors."""


class ShapeError(ShallowCircError, ValueError):
    """Operands have incompatible dimensions."""


class PromiseViolation(ShallowCircError, ValueError):
    """An input does not satisfy the problem's promise (e.g. odd parity)."""


class CapacityError(ShallowCircError, ValueError):
    """Requested size exceeds what an exhaustive routine supports."""


class StructureError(ShallowCircError, ValueError):
    """A graph or table does not have the required structure."""


class DomainError(ShallowCircError, ValueError):
    """An operation is undefined for the given arguments."""


class ConsistencyError(ShallowCircError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""
