"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the domain of an operation (e.g. a non-dominant weight)."""


class ConstructionError(RuntimeError):
    """A numerical construction failed its a-posteriori certification."""


class ResourceError(RuntimeError):
    """A requested object exceeds a configured size cap."""


class PrecisionError(ArithmeticError):
    """A quadrature value was too far from the integer it should round to."""


class PreconditionError(ValueError):
    """A quadrature rule (or other input) is not adequate for the requested computation."""


class ConfigError(ValueError):
    """Experiment configuration failed validation."""
