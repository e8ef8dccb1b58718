"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class InvalidOrderError(ValueError):
    """The interaction order is too small for the requested quantity."""


class CapacityError(RuntimeError):
    """A dense allocation would exceed the configured memory budget."""


class NumericalError(RuntimeError):
    """A numerical procedure (bracketing, refinement) failed to converge."""


class ShapeError(ValueError):
    """Array dimensions do not match the operation's contract."""


class ConfigError(ValueError):
    """An option combination is inconsistent or unsupported."""
